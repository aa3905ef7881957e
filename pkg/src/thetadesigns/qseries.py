"""Truncated q-expansions with exact rational coefficients.

Exponents live on the grid (1/8)Z and are stored as integers counting
eighths, so ``q**(1/4)`` is exponent 2 and ``q**1`` is exponent 8.  A series
carries an inclusive cutoff; every arithmetic result is truncated to the
smallest cutoff involved and asking for a coefficient past the cutoff is an
error rather than a silent zero.

Internally a series is dense on an arithmetic progression of exponents
(``offset + i*step``) with integer numerators over one common denominator.
Products of long operands go through Kronecker substitution on gmpy2
integers; short operands (theta constants have O(sqrt(cutoff)) terms) are
handled by shift-and-add on numpy object arrays.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import gmpy2
import numpy as np

from .errors import CutoffError, DomainError

EIGHTHS = 8
DEFAULT_CUTOFF = 1200
DEFAULT_CUTOFF_EIGHTHS = DEFAULT_CUTOFF * EIGHTHS
# Scratch series such as q^(-1/8) * theta_2(z/2) may dip slightly below zero.
MIN_EIGHTHS = -64

_SPARSE_TERMS = 48


def to_eighths(m) -> int:
    """Convert a rational exponent of q to eighths, insisting on the grid."""
    e = Fraction(m) * EIGHTHS
    if e.denominator != 1:
        raise DomainError(f"exponent {m} is not on the 1/8 grid")
    return int(e)


def from_eighths(e: int) -> Fraction:
    return Fraction(e, EIGHTHS)


def _fmt_exponent(e: int) -> str:
    f = from_eighths(e)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


class QSeries:
    """Immutable truncated series ``sum c_e q^(e/8)`` for ``e <= cutoff``."""

    __slots__ = ("_cutoff", "_offset", "_step", "_den", "_nums")

    def __init__(self, cutoff: int, offset: int, step: int, den: int, nums: list[int]):
        # Private: callers go through the constructors below, which
        # canonicalize.  Fields are never mutated after this point.
        self._cutoff = cutoff
        self._offset = offset
        self._step = step
        self._den = den
        self._nums = nums

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def _make(cls, cutoff: int, offset: int, step: int, den: int, nums: list[int]) -> "QSeries":
        if cutoff < MIN_EIGHTHS:
            raise DomainError(f"cutoff {cutoff} below the exponent floor {MIN_EIGHTHS}")
        lo = 0
        hi = len(nums)
        while lo < hi and nums[lo] == 0:
            lo += 1
        while hi > lo and nums[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            return cls(cutoff, 0, EIGHTHS, 1, [])
        if lo or hi != len(nums):
            nums = nums[lo:hi]
            offset += lo * step
        if offset < MIN_EIGHTHS:
            raise DomainError(f"exponent {offset} below the floor {MIN_EIGHTHS}")
        g = 0
        for i, v in enumerate(nums):
            if v:
                g = math.gcd(g, i)
                if g == 1:
                    break
        if g > 1:
            nums = nums[::g]
            step *= g
        if len(nums) == 1:
            step = EIGHTHS
        if den != 1:
            if den < 0:
                den = -den
                nums = [-v for v in nums]
            c = math.gcd(den, *nums)
            if c > 1:
                den //= c
                nums = [v // c for v in nums]
        return cls(cutoff, offset, step, den, nums)

    @classmethod
    def zero(cls, cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> "QSeries":
        return cls._make(cutoff, 0, EIGHTHS, 1, [])

    @classmethod
    def constant(cls, value, cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> "QSeries":
        return cls.from_terms({0: value}, cutoff)

    @classmethod
    def one(cls, cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> "QSeries":
        return cls.constant(1, cutoff)

    @classmethod
    def monomial(cls, eighths: int, value=1, cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> "QSeries":
        return cls.from_terms({eighths: value}, cutoff)

    @classmethod
    def from_terms(cls, terms: Mapping[int, object] | Iterable[tuple[int, object]],
                   cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> "QSeries":
        """Build from ``{eighths: coefficient}``; repeated exponents add up."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            e = int(e)
            if e > cutoff:
                raise CutoffError(f"term at exponent {_fmt_exponent(e)} beyond cutoff {_fmt_exponent(cutoff)}")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        acc = {e: c for e, c in acc.items() if c}
        if not acc:
            return cls.zero(cutoff)
        exps = sorted(acc)
        lo = exps[0]
        step = 0
        for e in exps[1:]:
            step = math.gcd(step, e - lo)
        step = step or EIGHTHS
        den = 1
        for c in acc.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [0] * ((exps[-1] - lo) // step + 1)
        for e, c in acc.items():
            nums[(e - lo) // step] = c.numerator * (den // c.denominator)
        return cls._make(cutoff, lo, step, den, nums)

    @classmethod
    def from_int_list(cls, offset: int, step: int, values: list[int], cutoff: int, den: int = 1) -> "QSeries":
        """Dense constructor: ``values[i]/den`` is the coefficient at ``offset + i*step``."""
        last = offset + (len(values) - 1) * step
        if values and last > cutoff:
            keep = (cutoff - offset) // step + 1
            if any(values[keep:]):
                raise CutoffError("dense values extend beyond the cutoff")
            values = values[:keep]
        return cls._make(cutoff, offset, step, den, list(values))

    # ------------------------------------------------------------------
    # inspection

    @property
    def cutoff(self) -> int:
        """Inclusive cutoff in eighths."""
        return self._cutoff

    @property
    def valuation(self) -> int | None:
        """Smallest exponent with a nonzero coefficient, or None for zero."""
        return self._offset if self._nums else None

    def is_zero(self) -> bool:
        return not self._nums

    def __bool__(self) -> bool:
        return bool(self._nums)

    def __len__(self) -> int:
        return sum(1 for v in self._nums if v)

    def coeff(self, eighths: int) -> Fraction:
        """Coefficient of ``q^(eighths/8)``; raises past the cutoff."""
        if eighths > self._cutoff:
            raise CutoffError(
                f"exponent {_fmt_exponent(eighths)} beyond cutoff {_fmt_exponent(self._cutoff)}")
        i, r = divmod(eighths - self._offset, self._step)
        if r or i < 0 or i >= len(self._nums):
            return Fraction(0)
        return Fraction(self._nums[i], self._den)

    def at(self, m) -> Fraction:
        """Coefficient of ``q^m`` for a rational ``m``."""
        return self.coeff(to_eighths(m))

    def terms(self) -> Iterator[tuple[int, Fraction]]:
        """Nonzero ``(eighths, coefficient)`` pairs in increasing order."""
        o, s, d = self._offset, self._step, self._den
        for i, v in enumerate(self._nums):
            if v:
                yield o + i * s, Fraction(v, d)

    def dense(self, offset: int, step: int, count: int) -> list[Fraction]:
        """Coefficients at ``offset + i*step`` for ``i < count`` (within the cutoff)."""
        return [self.coeff(offset + i * step) for i in range(count)]

    def integer_coefficients(self, offset: int, step: int, upto: int) -> list[int]:
        """Integer coefficients on a progression up to ``upto`` eighths.

        Raises DomainError if any requested coefficient is not an integer.
        """
        if upto > self._cutoff:
            raise CutoffError(f"exponent {_fmt_exponent(upto)} beyond cutoff {_fmt_exponent(self._cutoff)}")
        count = (upto - offset) // step + 1 if upto >= offset else 0
        out = [0] * count
        if not self._nums:
            return out
        if self._den != 1:
            raise DomainError("series has non-integral coefficients")
        for e, c in self._iter_raw():
            if e < offset or e > upto:
                continue
            i, r = divmod(e - offset, step)
            if r:
                continue
            out[i] = c
        return out

    def _iter_raw(self) -> Iterator[tuple[int, int]]:
        o, s = self._offset, self._step
        for i, v in enumerate(self._nums):
            if v:
                yield o + i * s, v

    # ------------------------------------------------------------------
    # equality / display

    def _key(self):
        return (self._cutoff, self._offset, self._step, self._den, tuple(self._nums))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def equal_to_cutoff(self, other: "QSeries") -> bool:
        """Agreement of all coefficients up to the smaller cutoff."""
        c = min(self._cutoff, other._cutoff)
        return self.truncate(c) == other.truncate(c)

    def first_difference(self, other: "QSeries") -> int | None:
        """Smallest exponent where the two series differ (up to the common cutoff)."""
        c = min(self._cutoff, other._cutoff)
        diff = (self.truncate(c) - other.truncate(c))
        return diff.valuation

    def __repr__(self) -> str:
        shown = []
        for k, (e, c) in enumerate(self.terms()):
            if k == 6:
                shown.append("...")
                break
            shown.append(f"{c}*q^{_fmt_exponent(e)}")
        body = " + ".join(shown) if shown else "0"
        return f"QSeries({body}; cutoff={_fmt_exponent(self._cutoff)})"

    # ------------------------------------------------------------------
    # cutoff management

    def truncate(self, cutoff: int) -> "QSeries":
        """Lower the cutoff (raising it would invent coefficients)."""
        if cutoff > self._cutoff:
            raise CutoffError(
                f"cannot extend cutoff {_fmt_exponent(self._cutoff)} to {_fmt_exponent(cutoff)}")
        if cutoff == self._cutoff:
            return self
        if not self._nums or cutoff < self._offset:
            return QSeries.zero(cutoff)
        keep = (cutoff - self._offset) // self._step + 1
        return QSeries._make(cutoff, self._offset, self._step, self._den, self._nums[:keep])

    def require(self, cutoff: int) -> "QSeries":
        """Return self truncated to ``cutoff``; error if it does not reach it."""
        if self._cutoff < cutoff:
            raise CutoffError(
                f"series known only to {_fmt_exponent(self._cutoff)}, {_fmt_exponent(cutoff)} requested")
        return self.truncate(cutoff)

    # ------------------------------------------------------------------
    # linear structure

    def _aligned(self, other: "QSeries"):
        """Both operands as dense integer lists on a common progression."""
        cut = min(self._cutoff, other._cutoff)
        a = self.truncate(cut)
        b = other.truncate(cut)
        if not a._nums:
            return cut, b._offset, b._step, [0] * len(b._nums), b._nums, 1, b._den
        if not b._nums:
            return cut, a._offset, a._step, a._nums, [0] * len(a._nums), a._den, 1
        lo = min(a._offset, b._offset)
        step = math.gcd(a._step, b._step, a._offset - b._offset)
        hi = max(a._offset + (len(a._nums) - 1) * a._step, b._offset + (len(b._nums) - 1) * b._step)
        n = (hi - lo) // step + 1
        da = [0] * n
        db = [0] * n
        for src, dst in ((a, da), (b, db)):
            base = (src._offset - lo) // step
            r = src._step // step
            dst[base: base + r * (len(src._nums) - 1) + 1: r] = src._nums
        return cut, lo, step, da, db, a._den, b._den

    def _combine(self, other: "QSeries", sign: int) -> "QSeries":
        cut, lo, step, da, db, pa, pb = self._aligned(other)
        den = pa * pb // math.gcd(pa, pb)
        fa, fb = den // pa, den // pb
        if fa == 1 and fb == 1:
            nums = [x + sign * y for x, y in zip(da, db)] if sign > 0 else [x - y for x, y in zip(da, db)]
        else:
            nums = [fa * x + sign * fb * y for x, y in zip(da, db)]
        return QSeries._make(cut, lo, step, den, nums)

    def __add__(self, other):
        if isinstance(other, QSeries):
            return self._combine(other, 1)
        if isinstance(other, (int, Fraction)):
            return self._combine(QSeries.constant(other, self._cutoff), 1)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return self._combine(other, -1)
        if isinstance(other, (int, Fraction)):
            return self._combine(QSeries.constant(other, self._cutoff), -1)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> "QSeries":
        return QSeries(self._cutoff, self._offset, self._step, self._den, [-v for v in self._nums])

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        if c == 0:
            return QSeries.zero(self._cutoff)
        return QSeries._make(self._cutoff, self._offset, self._step, self._den * c.denominator,
                             [v * c.numerator for v in self._nums])

    # ------------------------------------------------------------------
    # multiplication

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "QSeries":
        return power(self, k)

    # ------------------------------------------------------------------
    # exponent manipulations

    def shift(self, eighths: int) -> "QSeries":
        """Multiply by ``q^(eighths/8)``; the cutoff moves along."""
        return QSeries._make(self._cutoff + eighths, self._offset + eighths, self._step, self._den,
                             list(self._nums))

    def rescale(self, num: int, den: int = 1) -> "QSeries":
        """Substitute ``q -> q^(num/den)`` (exponents and cutoff scale together)."""
        if num <= 0 or den <= 0:
            raise DomainError("rescale factors must be positive")
        if (self._offset * num) % den or (self._step * num) % den:
            raise DomainError("rescaled exponents leave the 1/8 grid")
        cut = (self._cutoff * num) // den
        return QSeries._make(cut, self._offset * num // den, self._step * num // den, self._den,
                             list(self._nums))

    def dissect(self, c, modulus: int) -> "QSeries":
        """Terms whose exponent is congruent to ``c`` modulo ``modulus`` (in units of q).

        ``c`` may be rational, which selects a residue class on a fractional grid
        (for instance exponents 3/4 + 2Z of a shadow series).
        """
        if modulus <= 0:
            raise DomainError("modulus must be positive")
        ce = to_eighths(c)
        me = modulus * EIGHTHS
        return QSeries.from_terms({e: v for e, v in self.terms() if (e - ce) % me == 0}, self._cutoff)

    def filter(self, keep) -> "QSeries":
        """Terms whose exponent (in eighths) satisfies ``keep``."""
        return QSeries.from_terms({e: v for e, v in self.terms() if keep(e)}, self._cutoff)

    # ------------------------------------------------------------------
    # serialization

    def to_json_obj(self) -> dict:
        terms = []
        for e, c in self.terms():
            terms.append([e, f"{c.numerator}/{c.denominator}"])
        return {"cutoff_eighths": self._cutoff, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "QSeries":
        return cls.from_terms([(int(e), Fraction(c)) for e, c in obj["terms"]], int(obj["cutoff_eighths"]))

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_json_obj(json.loads(text))


# ----------------------------------------------------------------------
# products

def _spread(nums: list[int], ratio: int, length: int) -> list[int]:
    """Place ``nums`` every ``ratio`` slots, truncated to ``length`` slots."""
    if ratio == 1:
        return nums[:length]
    out = [0] * min(length, (len(nums) - 1) * ratio + 1)
    src = nums[: (len(out) - 1) // ratio + 1]
    out[0: (len(src) - 1) * ratio + 1: ratio] = src
    return out


def _max_bits(v: list[int]) -> int:
    return max((abs(x).bit_length() for x in v), default=0)


def _pack(v: list[int], width: int):
    pos = bytearray(len(v) * width)
    neg = bytearray(len(v) * width)
    for i, x in enumerate(v):
        if x > 0:
            pos[i * width:(i + 1) * width] = x.to_bytes(width, "little")
        elif x < 0:
            neg[i * width:(i + 1) * width] = (-x).to_bytes(width, "little")
    return gmpy2.mpz.from_bytes(bytes(pos), "little") - gmpy2.mpz.from_bytes(bytes(neg), "little")


def _kronecker(a: list[int], b: list[int], n_out: int) -> list[int]:
    """Exact truncated convolution of signed integer lists via one big product."""
    bits = _max_bits(a) + _max_bits(b) + min(len(a), len(b)).bit_length() + 2
    width = (bits + 7) // 8
    pa = _pack(a, width)
    pb = pa if b is a else _pack(b, width)
    prod = pa * pb
    half = 1 << (8 * width - 1)
    bias = gmpy2.mpz.from_bytes((b"\x00" * (width - 1) + b"\x80") * n_out, "little")
    total = gmpy2.f_mod_2exp(prod + bias, 8 * width * n_out)
    raw = total.to_bytes(width * n_out, "little")
    fb = int.from_bytes
    return [fb(raw[i:i + width], "little") - half for i in range(0, width * n_out, width)]


def _sparse_convolve(dense: list[int], sparse: list[int], n_out: int) -> list[int]:
    acc = np.zeros(n_out, dtype=object)
    acc[:] = 0
    src = np.array(dense[:n_out], dtype=object)
    for j, c in enumerate(sparse):
        if not c or j >= n_out:
            continue
        span = min(len(src), n_out - j)
        if span <= 0:
            continue
        if c == 1:
            acc[j:j + span] += src[:span]
        else:
            acc[j:j + span] += src[:span] * c
    return acc.tolist()


def convolve(a: list[int], b: list[int], n_out: int) -> list[int]:
    """Truncated integer convolution choosing shift-add or Kronecker substitution."""
    if not a or not b or n_out <= 0:
        return [0] * max(n_out, 0)
    nza = sum(1 for x in a if x)
    nzb = sum(1 for x in b if x)
    if min(nza, nzb) <= _SPARSE_TERMS:
        if nza < nzb:
            a, b = b, a
        out = _sparse_convolve(a, b, n_out)
    else:
        a = a[:n_out]
        b = b[:n_out]
        out = _kronecker(a, b, min(n_out, len(a) + len(b) - 1))
    if len(out) < n_out:
        out.extend([0] * (n_out - len(out)))
    return out


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Product truncated to the smaller cutoff."""
    cut = min(a._cutoff, b._cutoff)
    if not a._nums or not b._nums:
        return QSeries.zero(cut)
    off = a._offset + b._offset
    if off > cut:
        return QSeries.zero(cut)
    step = math.gcd(a._step, b._step)
    n_out = (cut - off) // step + 1
    da = _spread(a._nums, a._step // step, n_out)
    db = da if (b is a) else _spread(b._nums, b._step // step, n_out)
    nums = convolve(da, db, n_out)
    return QSeries._make(cut, off, step, a._den * b._den, nums)


def power(a: QSeries, k: int) -> QSeries:
    """``a**k`` by binary exponentiation; ``a**0`` is 1 at ``a``'s cutoff."""
    if k < 0:
        raise DomainError("negative powers are not supported")
    result = QSeries.one(a._cutoff)
    base = a
    first = True
    while k:
        if k & 1:
            result = base if first else mul(result, base)
            first = False
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def naive_mul(a: QSeries, b: QSeries) -> QSeries:
    """Reference double loop over terms (oracle for :func:`mul`)."""
    cut = min(a.cutoff, b.cutoff)
    acc: dict[int, Fraction] = {}
    for e1, c1 in a.terms():
        for e2, c2 in b.terms():
            e = e1 + e2
            if e <= cut:
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
    return QSeries.from_terms(acc, cut)


def qsum(series: Iterable[QSeries]) -> QSeries:
    it = iter(series)
    total = next(it)
    for s in it:
        total = total + s
    return total
