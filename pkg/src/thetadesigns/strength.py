"""Design strength of lattice shells from weighted theta series.

For a selfdual lattice and a harmonic polynomial P of degree 2j, the
weighted theta series is a cusp form in a small space spanned by a few
basis forms.  A shell of norm m satisfies condition (C_2j) when the q^m
coefficient of every basis form vanishes.  When the linear forms attached
to the basis are known to be independent (the "exact" flag) the converse
holds as well; otherwise vanishing is only sufficient and the verdict is a
lower bound.

The module also hosts zero-coefficient scans, the Ramanujan tau scan and
certificates for the positivity of coefficients of ``phi0 * psi^n``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .designs import StrengthVerdict, assemble_verdict, dim_harmonic
from .errors import DataError, DomainError, ParseError
from .modforms import (DE8, DE24, NAMED_FORMS, PHI, Q, R, TH2, TH3, TH4, ThetaPolynomial, expand, parse_form,
                       shadow, translate)
from .qseries import EIGHTHS, QSeries, mul, power, to_eighths

DEFAULT_MAX_NORM = 1200
DEFAULT_MAX_DEGREE = 16


# ----------------------------------------------------------------------
# family descriptors

@dataclass(frozen=True)
class FamilyDescriptor:
    """Parameters of a selfdual lattice family.

    ``n`` is the rank, ``k`` the shadow index (sigma = n - 8k), ``p`` the
    number of orthogonal unit vectors split off, ``N = n - p`` and ``h`` the
    Coxeter number of the norm-2 root system where relevant.
    """

    family: str
    n: int
    k: int
    min_norm: int
    name: str
    variant: str = ""
    N: int | None = None
    p: int = 0
    h: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("rank must be positive")
        if self.N is not None and self.p != self.n - self.N:
            raise DomainError(f"{self.name}: p must equal n - N")

    @property
    def sigma(self) -> int:
        return self.n - 8 * self.k

    @property
    def even(self) -> bool:
        return self.family == "even_selfdual"

    @property
    def has_shadow(self) -> bool:
        return self.family != "construction_a_even"

    def to_json_obj(self) -> dict:
        return {"family": self.family, "variant": self.variant, "name": self.name, "n": self.n,
                "N": self.N, "p": self.p, "h": self.h, "k": self.k, "min_norm": self.min_norm}


def cubic(n: int) -> FamilyDescriptor:
    return FamilyDescriptor("cubic", n, 0, 1, f"Z^{n}", N=0, p=n)


def even_selfdual(variant: str, h: int | None = None, n: int | None = None, name: str | None = None) -> FamilyDescriptor:
    """``variant`` is one of E8, rank16, leech, niemeier (needs h) or witt (needs n)."""
    if variant == "E8":
        return FamilyDescriptor("even_selfdual", 8, 1, 2, name or "E8", "E8", N=8, h=30)
    if variant == "rank16":
        return FamilyDescriptor("even_selfdual", 16, 2, 2, name or "rank16", "rank16", N=16, h=30)
    if variant == "leech":
        return FamilyDescriptor("even_selfdual", 24, 3, 4, name or "Leech", "leech", N=24, h=0)
    if variant == "niemeier":
        if h is None or h < 2:
            raise DomainError("a Niemeier lattice needs its Coxeter number h >= 2")
        return FamilyDescriptor("even_selfdual", 24, 3, 2, name or f"Niemeier(h={h})", "niemeier", N=24, h=h)
    if variant == "witt":
        if n is None or n % 8 or n < 32:
            raise DomainError("the generic even Witt variant needs n >= 32, n = 0 mod 8")
        return FamilyDescriptor("even_selfdual", n, n // 8, 2, name or f"W{n}", "witt", N=n, h=2 * (n - 1))
    raise DataError(f"unknown even selfdual variant {variant!r}")


def witt(n: int) -> FamilyDescriptor:
    """The Witt lattice ``D_n^+`` (n a multiple of 4, n >= 8)."""
    if n % 4 or n < 8:
        raise DomainError("Witt lattices need n >= 8, n = 0 mod 4")
    if n == 8:
        return even_selfdual("E8", name="W8")
    if n == 16:
        return even_selfdual("rank16", name="W16")
    if n == 24:
        return even_selfdual("niemeier", h=46, name="W24")
    if n % 8 == 0:
        return even_selfdual("witt", n=n)
    return FamilyDescriptor("witt", n, (n - 4) // 8, 2, f"W{n}", N=n, h=2 * (n - 1))


def long_shadow(n: int, h: int | None = None, name: str | None = None) -> FamilyDescriptor:
    """Selfdual lattice of minimum >= 2 with sigma = n - 8 (n <= 23)."""
    if not 8 <= n <= 23:
        raise DomainError("long-shadow lattices of minimum >= 2 have 8 <= n <= 23")
    if n == 8:
        return even_selfdual("E8", name=name or "E8")
    if n == 23:
        return FamilyDescriptor("shorter_leech", 23, 1, 3, name or "O23+", N=23, h=0)
    return FamilyDescriptor("long_shadow_min2", n, 1, 2, name or f"long_shadow(n={n})", N=n,
                            h=2 * (23 - n) if h is None else h)


def long_shadow_min1(p: int, N: int, h: int | None = None, name: str | None = None) -> FamilyDescriptor:
    """``Z^p`` plus a long-shadow lattice of rank N (sigma = n - 8)."""
    if p < 1 or not 8 <= N <= 23:
        raise DomainError("need p >= 1 and 8 <= N <= 23")
    n = p + N
    if p == 1 and N == 8:
        variant = "z1_e8"
    elif p == 1 and N == 23:
        variant = "z1_o23"
    else:
        variant = "generic"
    return FamilyDescriptor("long_shadow_min1", n, 1, 1, name or f"Z^{p}+L{N}", variant, N=N, p=p,
                            h=2 * (23 - N) if h is None else h)


def odd24(h: int, variant: str, name: str | None = None) -> FamilyDescriptor:
    """Odd selfdual rank-24 lattice of minimum >= 2 with sigma = 8.

    ``variant`` is ``"se"`` (norm-2 vectors strongly eutactic), ``"nse"``
    (not strongly eutactic) or ``"empty"`` (no norm-2 vectors, h = 0).
    """
    if variant not in ("se", "nse", "empty"):
        raise DataError(f"unknown odd rank-24 case {variant!r}")
    if (variant == "empty") != (h == 0):
        raise DomainError("h = 0 exactly when there are no norm-2 vectors")
    return FamilyDescriptor("odd24", 24, 2, 3 if variant == "empty" else 2,
                            name or f"odd24({variant}, h={h})", variant, N=24, h=h)


def residual(n: int, N: int, h: int, variant: str, name: str | None = None) -> FamilyDescriptor:
    """Selfdual lattice with sigma = n - 16 (rank at most 24).

    ``variant`` ``"i"`` has no norm-1 vectors and a root system that is not
    strongly eutactic; ``"ii"`` has norm-1 vectors and a strongly eutactic
    complement; ``"iii"`` covers the remaining configurations.
    """
    if variant not in ("i", "ii", "iii"):
        raise DataError(f"unknown residual case {variant!r}")
    if n > 24 or n < 16:
        raise DomainError("residual family needs 16 <= n <= 24")
    p = n - N
    if variant == "i" and p:
        raise DomainError("case i has no norm-1 vectors (N = n)")
    return FamilyDescriptor("residual_rank_le24", n, 2, 2 if variant == "i" else 1,
                            name or f"residual({variant}, n={n}, N={N}, h={h})", variant, N=N, p=p, h=h)


def construction_a_even(n: int) -> FamilyDescriptor:
    """Construction A of the even-weight code, i.e. ``D_n`` (not selfdual)."""
    if n < 2:
        raise DomainError("need n >= 2")
    return FamilyDescriptor("construction_a_even", n, 0, 2, f"CA(even-weight-{n})", N=n)


def family_for(spec: str) -> FamilyDescriptor:
    """Descriptor for a lattice description understood by :func:`lattice.build`."""
    s = spec.replace(" ", "")
    m = re.fullmatch(r"Z:(\d+)", s)
    if m:
        return cubic(int(m.group(1)))
    m = re.fullmatch(r"(?:Witt|W):(\d+)", s)
    if m:
        return witt(int(m.group(1)))
    if s == "E8":
        return even_selfdual("E8")
    m = re.fullmatch(r"CA:even:(\d+)", s)
    if m:
        return construction_a_even(int(m.group(1)))
    if s in ("Witt:12+Witt:12", "W:12+W:12"):
        return odd24(22, "se", name="W12+W12")
    m = re.fullmatch(r"Z:(\d+)\+(?:E8|Witt:8|W:8)", s)
    if m:
        return long_shadow_min1(int(m.group(1)), 8, name=s)
    raise DataError(f"no theta family known for {spec!r}")


# ----------------------------------------------------------------------
# family theta series

def _mono(eps: int, a: int, i: int) -> ThetaPolynomial:
    return PHI ** eps * TH3 ** a * DE8 ** i


def family_theta(fd: FamilyDescriptor) -> ThetaPolynomial:
    """Theta series of the family as a polynomial in the theta constants."""
    n, f, v = fd.n, fd.family, fd.variant
    if f == "cubic":
        return TH3 ** n
    if f == "witt":
        return Fraction(1, 2) * (TH2 ** n + TH3 ** n + TH4 ** n)
    if f == "even_selfdual":
        if v == "E8":
            return Q
        if v == "rank16":
            return Q ** 2
        if v == "leech":
            return Q ** 3 - 720 * DE24
        if v == "niemeier":
            return Q ** 3 + n * (fd.h - 30) * DE24
        if v == "witt":
            return Fraction(1, 2) * (TH2 ** n + TH3 ** n + TH4 ** n)
    if f in ("long_shadow_min2", "shorter_leech"):
        return TH3 ** n - 2 * n * _mono(0, n - 8, 1)
    if f == "long_shadow_min1":
        return TH3 ** n - 2 * fd.N * _mono(0, n - 8, 1)
    if f == "odd24":
        return TH3 ** 24 - 48 * _mono(0, 16, 1) + 24 * (fd.h + 2) * _mono(0, 8, 2)
    if f == "residual_rank_le24":
        c2 = (fd.h - 46 + 2 * fd.N) * fd.N
        return TH3 ** n - 2 * fd.N * _mono(0, n - 8, 1) + c2 * _mono(0, n - 16, 2)
    if f == "construction_a_even":
        return Fraction(1, 2) * (TH3 ** n + TH4 ** n)
    raise DataError(f"unknown family {f!r}")


def cubic_coefficients(series: QSeries, n: int, k: int) -> list[Fraction]:
    """Solve ``series = sum_i c_i De8^i Th3^(n-8i)`` (i <= k) from the first k+1 coefficients."""
    if n - 8 * k < 0:
        raise DomainError("need n >= 8k")
    cut = to_eighths(k)
    rest = series.truncate(cut)
    coeffs: list[Fraction] = []
    for i in range(k + 1):
        c = rest.at(i)
        coeffs.append(c)
        rest = rest - expand(_mono(0, n - 8 * i, i), cut).scale(c) if i < k else rest
    return coeffs


# ----------------------------------------------------------------------
# basis tables

@dataclass(frozen=True)
class BasisForm:
    """A basis form with a display label.

    ``factors`` lists ``(name, exponent)`` pairs when the form is a monomial
    in the named forms, which lets callers substitute a named series.
    """

    poly: ThetaPolynomial
    label: str
    factors: tuple[tuple[str, int], ...] = ()

    @classmethod
    def monomial(cls, coeff, *factors: tuple[str, int]) -> "BasisForm":
        fs = tuple((nm, e) for nm, e in factors if e)
        poly = ThetaPolynomial.constant(coeff)
        for nm, e in fs:
            poly = poly * NAMED_FORMS[nm] ** e
        parts = [nm if e == 1 else f"{nm}^{e}" for nm, e in fs] or ["1"]
        label = "*".join(parts)
        if coeff != 1:
            label = f"{coeff}*{label}"
        return cls(poly, label, fs if coeff == 1 else ())


def _odd_mono(eps: int, a: int, i: int) -> BasisForm:
    return BasisForm.monomial(1, ("Phi", eps), ("Th3", a), ("De8", i))


def _even_mono(r: int, a: int, i: int) -> BasisForm:
    return BasisForm.monomial(1, ("R", r), ("Q", a), ("De24", i))


def _combo(label: str, poly: ThetaPolynomial) -> BasisForm:
    return BasisForm(poly, label)


@dataclass(frozen=True)
class DegreeEntry:
    """Basis of the weighted theta series in one degree.

    ``forms == ()`` means the weighted series vanishes identically.
    ``exact`` is set when vanishing of all coefficients is also necessary.
    """

    degree: int
    forms: tuple[BasisForm, ...]
    exact: bool
    source: str

    @property
    def zero(self) -> bool:
        return not self.forms

    def to_json_obj(self) -> dict:
        return {"degree": self.degree, "forms": [f.label for f in self.forms], "exact": self.exact,
                "source": self.source}


class DegreeBasisTable:
    """Per-degree bases of a family; degrees past the lemma table use generic bases."""

    def __init__(self, fd: FamilyDescriptor, entries: Mapping[int, DegreeEntry]):
        self.family = fd
        self._entries = dict(entries)
        for e in self._entries.values():
            self._check_weight(e)

    @property
    def lemma_degrees(self) -> list[int]:
        return sorted(d for d, e in self._entries.items() if e.source != "generic")

    @property
    def zero_degrees(self) -> list[int]:
        return sorted(d for d, e in self._entries.items() if e.zero)

    def entry(self, degree: int) -> DegreeEntry:
        if degree < 2 or degree % 2:
            raise DomainError("degrees are even and positive")
        if degree not in self._entries:
            e = _generic_entry(self.family, degree)
            self._check_weight(e)
            self._entries[degree] = e
        return self._entries[degree]

    def _check_weight(self, e: DegreeEntry) -> None:
        want = Fraction(self.family.n, 2) + e.degree
        for f in e.forms:
            if f.poly.weight != want and not f.poly.is_zero():
                raise AssertionError(f"{self.family.name}: {f.label} has weight {f.poly.weight}, expected {want}")

    def to_json_obj(self, max_degree: int = DEFAULT_MAX_DEGREE) -> dict:
        return {"family": self.family.to_json_obj(),
                "degrees": [self.entry(d).to_json_obj() for d in range(2, max_degree + 1, 2)]}


def _zero(d: int, source: str = "lemma") -> DegreeEntry:
    return DegreeEntry(d, (), True, source)


def _generic_entry(fd: FamilyDescriptor, degree: int) -> DegreeEntry:
    """Spanning set valid for every harmonic P of the given degree (sufficient only)."""
    if dim_harmonic(fd.n, degree) == 0:
        return _zero(degree, "trivial")
    j = degree // 2
    if fd.even:
        big_n, lo = fd.n // 8, max(fd.min_norm // 2, 1)
        forms = []
        r = j % 2
        top = big_n + (j - 3 * r) // 2
        i = lo
        while top - 3 * i >= 0:
            forms.append(_even_mono(r, top - 3 * i, i))
            i += 1
        return DegreeEntry(degree, tuple(forms), False, "generic")
    base = cubic(fd.n) if fd.family == "construction_a_even" else fd
    lo = max(base.min_norm, 1)
    forms = []
    if j % 2 == 0:
        for i in range(lo, base.k + j // 2 + 1):
            a = base.n + 4 * j - 8 * i
            if a >= 0:
                forms.append(_odd_mono(0, a, i))
    else:
        for i in range(lo, base.k + (j - 1) // 2 + 1):
            a = base.n + 4 * j - 4 - 8 * i
            if a >= 0:
                forms.append(_odd_mono(1, a, i))
    if fd.family == "construction_a_even":
        forms = [_half_translate(f) for f in forms]
    return DegreeEntry(degree, tuple(forms), False, "generic")


def _half_translate(f: BasisForm) -> BasisForm:
    return BasisForm(Fraction(1, 2) * (f.poly + translate(f.poly)), f"(1/2)*(1+T)({f.label})")


def _lemma_entries(fd: FamilyDescriptor) -> dict[int, DegreeEntry]:
    n, f, v = fd.n, fd.family, fd.variant
    E = lambda d, *forms, exact=True: DegreeEntry(d, tuple(forms), exact, "lemma")  # noqa: E731
    if f == "cubic":
        return {2: _zero(2),
                4: E(4, _odd_mono(0, n, 1)) if n >= 2 else _zero(4),
                6: E(6, _odd_mono(1, n, 1)) if n >= 3 else _zero(6)}
    if f == "construction_a_even":
        return {2: _zero(2),
                4: E(4, _half_translate(_odd_mono(0, n, 1))),
                6: E(6, _half_translate(_odd_mono(1, n, 1))) if n >= 3 else _zero(6)}
    if f == "witt":
        core = TH2 ** 4 * TH3 ** 4 * TH4 ** 4
        w4 = core * (-TH2 ** (n - 4) + TH3 ** (n - 4) - TH4 ** (n - 4))
        w6 = core * ((TH3 ** 4 + TH4 ** 4) * TH2 ** (n - 4) + (TH4 ** 4 - TH2 ** 4) * TH3 ** (n - 4)
                     - (TH2 ** 4 + TH3 ** 4) * TH4 ** (n - 4))
        return {2: _zero(2),
                4: E(4, _combo(f"Th2^4*Th3^4*Th4^4*(-Th2^{n-4}+Th3^{n-4}-Th4^{n-4})", w4)),
                6: E(6, _combo(f"Th2^4*Th3^4*Th4^4*((Th3^4+Th4^4)*Th2^{n-4}+(Th4^4-Th2^4)*Th3^{n-4}"
                               f"-(Th2^4+Th3^4)*Th4^{n-4})", w6))}
    if f == "even_selfdual":
        if v == "E8":
            return {2: _zero(2), 4: _zero(4), 6: _zero(6), 10: _zero(10),
                    8: E(8, _even_mono(0, 0, 1)), 12: E(12, _even_mono(0, 1, 1)),
                    14: E(14, _even_mono(1, 0, 1)), 16: E(16, _even_mono(0, 2, 1)),
                    18: E(18, _even_mono(1, 1, 1))}
        if v == "rank16":
            return {2: _zero(2), 6: _zero(6),
                    4: E(4, _even_mono(0, 0, 1)), 8: E(8, _even_mono(0, 1, 1)),
                    10: E(10, _even_mono(1, 0, 1)), 12: E(12, _even_mono(0, 2, 1)),
                    14: E(14, _even_mono(1, 1, 1))}
        if v == "leech":
            out = {d: _zero(d) for d in (2, 4, 6, 8, 10, 14)}
            out.update({12: E(12, _even_mono(0, 0, 2)), 16: E(16, _even_mono(0, 1, 2)),
                        18: E(18, _even_mono(1, 0, 2)), 20: E(20, _even_mono(0, 2, 2)),
                        22: E(22, _even_mono(1, 1, 2))})
            return out
        if v == "niemeier":
            return {2: _zero(2), 4: E(4, _even_mono(0, 1, 1)), 6: E(6, _even_mono(1, 0, 1)),
                    8: E(8, _even_mono(0, 2, 1)), 10: E(10, _even_mono(1, 1, 1))}
        return {}
    if f == "long_shadow_min2":
        return {2: _zero(2), 4: E(4, _odd_mono(0, n - 8, 2)), 6: E(6, _odd_mono(1, n - 8, 2))}
    if f == "shorter_leech":
        return {2: _zero(2), 4: _zero(4), 6: _zero(6),
                8: E(8, _odd_mono(0, 15, 3)), 10: E(10, _odd_mono(1, 15, 3))}
    if f == "long_shadow_min1":
        if v == "z1_e8":
            return {2: E(2, _odd_mono(1, 1, 1)),
                    4: E(4, _combo("Th3^9*De8+8*Th3*De8^2", _mono(0, 9, 1) + 8 * _mono(0, 1, 2)), exact=False),
                    6: E(6, _combo("Phi*Th3^9*De8-Phi*Th3*De8^2", _mono(1, 9, 1) - _mono(1, 1, 2)))}
        if v == "z1_o23":
            return {2: E(2, _odd_mono(1, 16, 1)),
                    4: E(4, _combo("Th3^24*De8-40*Th3^16*De8^2", _mono(0, 24, 1) - 40 * _mono(0, 16, 2))),
                    6: E(6, _combo("Phi*Th3^24*De8-16*Phi*Th3^16*De8^2",
                                   _mono(1, 24, 1) - 16 * _mono(1, 16, 2)))}
        return {2: E(2, _odd_mono(1, n - 8, 1)),
                4: E(4, _odd_mono(0, n, 1), _odd_mono(0, n - 8, 2)),
                6: E(6, _odd_mono(1, n, 1), _odd_mono(1, n - 8, 2))}
    if f == "odd24":
        if v == "nse":
            return {2: E(2, _odd_mono(1, 8, 2)), 4: E(4, _odd_mono(0, 16, 2), _odd_mono(0, 8, 3))}
        if v == "se":
            return {2: _zero(2), 4: E(4, _odd_mono(0, 16, 2), _odd_mono(0, 8, 3)),
                    6: E(6, _odd_mono(1, 16, 2), _odd_mono(1, 8, 3))}
        return {2: _zero(2), 4: E(4, _odd_mono(0, 8, 3)), 6: E(6, _odd_mono(1, 8, 3))}
    if f == "residual_rank_le24":
        if v == "i":
            return {2: E(2, _odd_mono(1, n - 16, 2))}
        if v == "ii":
            c = 46 - 2 * fd.N - fd.h
            poly = _mono(1, n - 8, 1) + c * _mono(1, n - 16, 2)
            return {2: E(2, _combo(f"Phi*Th3^{n-8}*De8+({c})*Phi*Th3^{n-16}*De8^2", poly))}
        return {2: E(2, _odd_mono(1, n - 8, 1), _odd_mono(1, n - 16, 2))}
    raise DataError(f"unknown family {f!r}")


def degree_basis(fd: FamilyDescriptor) -> DegreeBasisTable:
    """Lemma table of the family, with trivial degrees (no harmonics) folded in."""
    entries = _lemma_entries(fd)
    for d in list(entries):
        if dim_harmonic(fd.n, d) == 0:
            entries[d] = _zero(d, "trivial")
    return DegreeBasisTable(fd, entries)


# ----------------------------------------------------------------------
# shell verdicts

@dataclass(frozen=True)
class ShellReport:
    norm: Fraction
    shell_size: int
    verdict: StrengthVerdict
    shadow: bool = False

    @property
    def empty(self) -> bool:
        return self.shell_size == 0

    @property
    def status(self) -> str:
        return "design-or-empty" if self.empty else self.verdict.label

    def to_json_obj(self) -> dict:
        out = {"norm": str(self.norm), "shadow": self.shadow, "shell_size": self.shell_size,
               "empty": self.empty}
        if self.empty:
            out["strength"] = "design-or-empty"
        else:
            out.update(self.verdict.to_json_obj())
        return out


def _pair_series(degree: int, half: bool, cutoff: int) -> QSeries:
    """``sum Re((a+bi)^degree) q^(a^2+b^2)`` over Z^2, or over (Z+1/2)^2 when ``half``."""
    scale = 2 if half else 1
    bound = math.isqrt(cutoff * scale * scale // EIGHTHS) + 1
    coords = range(-bound, bound + 1, 1)
    terms: dict[int, int] = {}
    for a in coords:
        if half and a % 2 == 0:
            continue
        for b in coords:
            if half and b % 2 == 0:
                continue
            e = EIGHTHS * (a * a + b * b) // (scale * scale)
            if e > cutoff:
                continue
            re = sum(math.comb(degree, k) * a ** (degree - k) * b ** k * (-1) ** (k // 2)
                     for k in range(0, degree + 1, 2))
            terms[e] = terms.get(e, 0) + re
    den = scale ** degree
    return QSeries.from_terms({e: Fraction(v, den) for e, v in terms.items() if v}, cutoff)


def _partitions_by_four(total: int, parts: int, largest: int) -> Iterable[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    if parts == 0:
        return
    for first in range(min(total, largest), 3, -4):
        for rest in _partitions_by_four(total - first, parts - 1, first):
            yield (first,) + rest


def cubic_witness_series(n: int, degree: int, shadow_side: bool, cutoff: int) -> list[QSeries]:
    """Weighted theta series of Z^n (or its shadow) for explicit harmonic polynomials.

    Each polynomial is a product of ``Re((x_{2i-1} + i x_{2i})^{4k_i})`` over
    disjoint coordinate pairs, so its series is a product of two-dimensional
    sums times a power of the one-dimensional theta series.  A nonzero
    coefficient at m proves that the shell at m fails the condition.
    """
    theta = expand(TH2 if shadow_side else TH3, cutoff)
    out = []
    for parts in _partitions_by_four(degree, n // 2, degree):
        s = power(theta, n - 2 * len(parts))
        for d in parts:
            s = mul(s, _pair_series(d, shadow_side, cutoff))
        out.append(s)
    return out


class StrengthEngine:
    """Shell verdicts for one family (or its shadow) up to ``max_norm``.

    ``overrides`` maps a named form (for example ``"De24"``) to a series
    used in place of its expansion inside monomial basis forms.
    """

    def __init__(self, fd: FamilyDescriptor, shadow_side: bool = False, max_norm=DEFAULT_MAX_NORM,
                 max_degree: int | None = None, overrides: Mapping[str, QSeries] | None = None):
        if shadow_side and not fd.has_shadow:
            raise DomainError(f"{fd.name} is not selfdual; it has no shadow")
        self.family = fd
        self.shadow = shadow_side
        self._apply_shadow = shadow_side and not fd.even  # an even lattice is its own shadow
        self.max_norm = Fraction(max_norm)
        self.cutoff = to_eighths(self.max_norm)
        self.table = degree_basis(fd)
        lemma_top = max(self.table.lemma_degrees, default=2)
        self.max_degree = max_degree if max_degree is not None else max(DEFAULT_MAX_DEGREE, lemma_top)
        if self.max_degree < 4 or self.max_degree % 2:
            raise DomainError("max_degree must be an even integer >= 4")
        self.overrides = dict(overrides or {})
        theta = family_theta(fd)
        self.theta = expand(shadow(theta) if self._apply_shadow else theta, self.cutoff)
        self._series: dict[BasisForm, QSeries] = {}
        self._witnesses: dict[int, list[QSeries]] = {}

    # grid ---------------------------------------------------------------
    def grid(self) -> list[Fraction]:
        """Positive norms up to ``max_norm`` on the lattice (or shadow) grid."""
        if self.shadow and not self.family.even:
            start = Fraction(self.family.n, 4) % 2 or Fraction(2)
            step = 2
        elif self.family.even:
            start, step = Fraction(2), 2
        else:
            start, step = Fraction(1), 1
        out = []
        m = start
        while m <= self.max_norm:
            out.append(m)
            m += step
        return out

    def size(self, m) -> int:
        c = self.theta.at(Fraction(m))
        if c.denominator != 1 or c < 0:
            raise AssertionError(f"shell size {c} at norm {m} is not a nonnegative integer")
        return int(c)

    # conditions ---------------------------------------------------------
    def series(self, form: BasisForm) -> QSeries:
        if form not in self._series:
            if self.overrides and form.factors and any(nm in self.overrides for nm, _ in form.factors):
                if self._apply_shadow:
                    raise DomainError("series overrides are not available on the shadow side")
                s = QSeries.one(self.cutoff)
                for nm, e in form.factors:
                    base = self.overrides.get(nm)
                    if base is None:
                        base = expand(NAMED_FORMS[nm], self.cutoff)
                    s = mul(s, power(base, e))
            else:
                poly = shadow(form.poly) if self._apply_shadow else form.poly
                s = expand(poly, self.cutoff)
            self._series[form] = s
        return self._series[form]

    def condition(self, degree: int, m) -> bool | None:
        """(C_degree) at norm m: True, False, or None when undecided."""
        e = self.table.entry(degree)
        if e.zero:
            return True
        if all(self.series(f).at(m) == 0 for f in e.forms):
            return True
        if e.exact or any(w.at(m) != 0 for w in self.witnesses(degree)):
            return False
        return None

    def witnesses(self, degree: int) -> list[QSeries]:
        """Realized weighted series used to settle inexact basis entries (cubic families only)."""
        if degree not in self._witnesses:
            ok = self.family.family == "cubic" and not self.overrides
            self._witnesses[degree] = (cubic_witness_series(self.family.n, degree, self.shadow, self.cutoff)
                                       if ok else [])
        return self._witnesses[degree]

    def verdict(self, m) -> StrengthVerdict:
        m = Fraction(m)
        witnesses = {}

        def cond(d: int) -> bool | None:
            v = self.condition(d, m)
            if v is False:
                witnesses[d] = tuple(str(self.series(f).at(m)) for f in self.table.entry(d).forms)
            return v

        v = assemble_verdict(cond, self.max_degree, True)
        return StrengthVerdict(v.strength_times_two, v.exact,
                               tuple((d, witnesses.get(d)) for d, _ in v.failing),
                               v.max_degree_checked, v.conditions)

    def report(self, m) -> ShellReport:
        m = Fraction(m)
        if m <= 0 or m > self.max_norm:
            raise DomainError(f"norm {m} outside (0, {self.max_norm}]")
        return ShellReport(m, self.size(m), self.verdict(m), self.shadow)

    def reports(self, norms: Iterable | None = None) -> list[ShellReport]:
        return [self.report(m) for m in (self.grid() if norms is None else norms)]


def shell_strength(fd: FamilyDescriptor, m, shadow: bool = False, max_degree: int | None = None) -> ShellReport:
    """Strength of the shell of norm m (of the shadow when ``shadow``)."""
    m = Fraction(m)
    return StrengthEngine(fd, shadow, max(m, Fraction(1)), max_degree).report(m)


# ----------------------------------------------------------------------
# zero patterns

def _split4(m: int) -> tuple[int, int]:
    a = 0
    while m % 4 == 0:
        m //= 4
        a += 1
    return a, m


def _is_square(x: int) -> bool:
    return x >= 0 and math.isqrt(x) ** 2 == x


def _is_sum_two_squares(x: int) -> bool:
    if x < 0:
        return False
    a = 0
    while a * a <= x:
        if _is_square(x - a * a):
            return True
        a += 1
    return False


def _int(m: Fraction) -> int | None:
    return int(m) if m.denominator == 1 else None


@dataclass(frozen=True)
class ZeroPattern:
    """A named set of norms, e.g. ``4^a(8b+3)``."""

    text: str
    test: Callable[[Fraction], bool]

    def __call__(self, m) -> bool:
        return self.test(Fraction(m))


def parse_pattern(text: str) -> ZeroPattern:
    """Parse a norm-set description.

    Accepted shapes: ``4^a(8b+r)``, ``4^a2`` (also ``4^a*2``), ``4^a``,
    ``2^a``, optionally followed by ``, a>=K``; ``m!=a^2``,
    ``m!=a^2+b^2``, ``m!=a^2/4``, ``m!=(a^2+b^2)/4``; ``m-k odd``;
    ``r mod s``; ``2a``, ``2a+1``, ``4a+2`` (with optional ``, a>=K``);
    a finite set ``{3, 49/4}``; and ``none``.
    """
    raw = text.strip()
    s = raw.replace(" ", "").replace("≠", "!=").replace("≥", ">=")
    amin = 0
    mm = re.fullmatch(r"(.*),a>=(\d+)", s)
    if mm:
        s, amin = mm.group(1), int(mm.group(2))
    if s.startswith("m="):
        s = s[2:]

    def integral(pred: Callable[[int], bool]) -> Callable[[Fraction], bool]:
        return lambda m: (_int(m) is not None and _int(m) > 0 and pred(_int(m)))

    mm = re.fullmatch(r"4\^a\(8b\+(\d)\)", s)
    if mm:
        r = int(mm.group(1))
        return ZeroPattern(raw, integral(lambda x: _split4(x)[1] % 8 == r and _split4(x)[0] >= amin))
    mm = re.fullmatch(r"4\^a\*?(\d)", s)
    if mm:
        r = int(mm.group(1))
        return ZeroPattern(raw, integral(lambda x: _split4(x)[1] == r and _split4(x)[0] >= amin))
    if s == "4^a":
        return ZeroPattern(raw, integral(lambda x: _split4(x)[1] == 1 and _split4(x)[0] >= amin))
    if s == "2^a":
        return ZeroPattern(raw, integral(lambda x: x & (x - 1) == 0 and x.bit_length() - 1 >= amin))
    lin = re.fullmatch(r"(\d+)a(?:\+(\d+))?", s)
    if lin:
        mod, off = int(lin.group(1)), int(lin.group(2) or 0)
        return ZeroPattern(raw, integral(lambda x: x % mod == off % mod and (x - off) // mod >= amin))
    if s == "m!=a^2":
        return ZeroPattern(raw, lambda m: _int(m) is not None and not _is_square(_int(m)))
    if s == "m!=a^2+b^2":
        return ZeroPattern(raw, lambda m: _int(m) is not None and not _is_sum_two_squares(_int(m)))
    if s == "m!=a^2/4":
        return ZeroPattern(raw, lambda m: (4 * m).denominator == 1 and not _is_square(int(4 * m)))
    if s == "m!=(a^2+b^2)/4":
        return ZeroPattern(raw, lambda m: (4 * m).denominator == 1 and not _is_sum_two_squares(int(4 * m)))
    mm = re.fullmatch(r"m-(\d+)odd", s)
    if mm:
        k = int(mm.group(1))
        return ZeroPattern(raw, lambda m: _int(m) is not None and (_int(m) - k) % 2 == 1)
    mm = re.fullmatch(r"(\d+)mod(\d+)", s)
    if mm:
        r, mod = int(mm.group(1)), int(mm.group(2))
        return ZeroPattern(raw, lambda m: _int(m) is not None and _int(m) % mod == r % mod)
    mm = re.fullmatch(r"\{(.*)\}", s)
    if mm:
        try:
            members = frozenset(Fraction(x) for x in mm.group(1).split(",") if x)
        except ValueError:
            raise ParseError(f"bad finite set {raw!r}") from None
        return ZeroPattern(raw, lambda m: m in members)
    if s in ("none", "{}"):
        return ZeroPattern(raw, lambda m: False)
    raise ParseError(f"unrecognised norm pattern {raw!r}")


@dataclass(frozen=True)
class LemmaEntry:
    item: str
    eps: int
    alpha: int
    beta: int
    shadowed: bool
    pattern: str

    @property
    def expression(self) -> str:
        return lemma_expression(self.eps, self.alpha, self.beta, self.shadowed)


def lemma_expression(eps: int, alpha: int, beta: int, shadowed: bool = False) -> str:
    parts = []
    if eps:
        parts.append("Phi")
    if alpha:
        parts.append("Th3" if alpha == 1 else f"Th3^{alpha}")
    if beta:
        parts.append("De8" if beta == 1 else f"De8^{beta}")
    body = "*".join(parts) or "1"
    return f"Sh({body})" if shadowed else body


def _lemma_table() -> tuple[LemmaEntry, ...]:
    rows = []
    for k in (1, 2, 3):
        rows.append(LemmaEntry("a", 0, 4 * k, k, False, f"m-{k} odd"))
        rows.append(LemmaEntry("a", 0, 16 * k, k, True, "2 mod 4"))
    rows += [
        LemmaEntry("b", 0, 1, 0, False, "m!=a^2"),
        LemmaEntry("b", 0, 1, 0, True, "m!=a^2/4"),
        LemmaEntry("b", 0, 2, 0, False, "m!=a^2+b^2"),
        LemmaEntry("b", 0, 2, 0, True, "m!=(a^2+b^2)/4"),
        LemmaEntry("b", 0, 3, 0, False, "4^a(8b+7)"),
        LemmaEntry("b", 1, 12, 0, False, "{1}"),
        LemmaEntry("c", 0, 1, 1, False, "4^a(8b+5)"),
        LemmaEntry("c", 0, 2, 1, False, "m!=a^2+b^2"),
        LemmaEntry("c", 0, 2, 1, True, "m!=(a^2+b^2)/4"),
        LemmaEntry("c", 0, 3, 1, False, "4^a(8b+7)"),
        LemmaEntry("c", 0, 7, 1, False, "4^a(8b+3)"),
        LemmaEntry("c", 1, 3, 1, False, "4^a(8b+7)"),
        LemmaEntry("c", 1, 16, 1, False, "4^a2"),
        LemmaEntry("c", 1, 16, 1, True, "4^a2"),
        LemmaEntry("c", 1, 40, 1, True, "{24}"),
        LemmaEntry("d", 0, 5, 2, False, "4^a(8b+1)"),
        LemmaEntry("d", 0, 12, 2, False, "4^a"),
        LemmaEntry("d", 1, 8, 2, False, "4^a"),
        LemmaEntry("d", 1, 8, 2, True, "4^a"),
        LemmaEntry("d", 1, 20, 2, False, "{3}"),
        LemmaEntry("d", 1, 33, 2, False, "{4}"),
        LemmaEntry("d", 1, 33, 2, True, "{49/4}"),
        LemmaEntry("e", 0, 4, 3, False, "4^a2"),
        LemmaEntry("e", 1, 24, 3, False, "2^a"),
        LemmaEntry("e", 1, 24, 3, True, "2^a"),
    ]
    return tuple(rows)


LEMMA_ZEROS: tuple[LemmaEntry, ...] = _lemma_table()

_LEMMA_BODY = re.compile(r"(?:Phi|Th3|De8)(?:\^\d+)?(?:\*(?:Phi|Th3|De8)(?:\^\d+)?)*")


def _lemma_shape(text: str) -> tuple[int, int, int, bool] | None:
    """(eps, alpha, beta, shadowed) when the text is a plain Phi^e Th3^a De8^b monomial."""
    s = text.replace(" ", "")
    sh = s.startswith("Sh(") and s.endswith(")")
    body = s[3:-1] if sh else s
    if not _LEMMA_BODY.fullmatch(body):
        return None
    eps = alpha = beta = 0
    for tok in body.split("*"):
        name, _, e = tok.partition("^")
        e = int(e) if e else 1
        if name == "Phi":
            eps += e
        elif name == "Th3":
            alpha += e
        else:
            beta += e
    if eps > 1:
        return None
    return eps, alpha, beta, sh


@dataclass(frozen=True)
class ScanResult:
    form: str
    cutoff: Fraction
    grid_start: Fraction
    grid_step: int
    zeros: tuple[Fraction, ...]
    expectation: str | None
    predicted: tuple[Fraction, ...] | None

    @property
    def extras(self) -> tuple[Fraction, ...]:
        if self.predicted is None:
            return ()
        p = set(self.predicted)
        return tuple(z for z in self.zeros if z not in p)

    @property
    def missing(self) -> tuple[Fraction, ...]:
        if self.predicted is None:
            return ()
        z = set(self.zeros)
        return tuple(m for m in self.predicted if m not in z)

    @property
    def passed(self) -> bool | None:
        if self.predicted is None:
            return None
        return not self.extras and not self.missing

    def to_json_obj(self) -> dict:
        f = lambda xs: None if xs is None else [str(x) for x in xs]  # noqa: E731
        return {"form": self.form, "cutoff": _json_number(self.cutoff),
                "grid": {"start": str(self.grid_start), "step": self.grid_step},
                "expect": self.expectation, "zeros": f(self.zeros), "predicted": f(self.predicted),
                "extras": f(self.extras), "missing": f(self.missing), "pass": self.passed}


def lemma_prediction(eps: int, alpha: int, beta: int, shadowed: bool) -> list[str] | None:
    """Patterns the zero lemma attaches to a monomial; [] inside the checked range, None outside."""
    pats = [e.pattern for e in LEMMA_ZEROS if (e.eps, e.alpha, e.beta, e.shadowed) == (eps, alpha, beta, shadowed)]
    if pats or (beta <= 3 and alpha <= 36):
        return pats
    return None


def scan_zeros(expr: str, cutoff=DEFAULT_MAX_NORM, expect: str | None = None) -> ScanResult:
    """Vanishing coefficients of a form up to ``q^cutoff``.

    Monomials ``Phi^e Th3^a De8^b`` use the support ``b + N`` (shadows:
    ``a/4 + 2N``) and default to the zero lemma's prediction.  Other
    expressions use the grid of their own nonzero exponents (valuation plus
    the gcd of the gaps).
    """
    poly = parse_form(expr)
    cutoff = Fraction(cutoff)
    series = expand(poly, to_eighths(cutoff))
    shape = _lemma_shape(expr)
    if shape is not None:
        eps, alpha, beta, sh = shape
        if eps == alpha == beta == 0:
            raise DomainError("the constant form has no zero pattern")
        start, step = (Fraction(alpha, 4), 2) if sh else (Fraction(beta), 1)
    else:
        exps = [e for e, _ in series.terms()]
        if not exps:
            raise DomainError(f"{expr} expands to zero up to the cutoff")
        start = Fraction(exps[0], EIGHTHS)
        gap = reduce(math.gcd, (e - exps[0] for e in exps[1:]), 0) or EIGHTHS
        if gap % EIGHTHS:
            raise DomainError(f"{expr}: exponents are not on an integer step grid")
        step = gap // EIGHTHS
    zeros = []
    m = start
    if m == 0:
        m += step
    grid = []
    while m <= cutoff:
        grid.append(m)
        if series.at(m) == 0:
            zeros.append(m)
        m += step
    if expect is not None:
        pat = parse_pattern(expect)
        predicted = tuple(x for x in grid if pat(x))
        expectation = expect
    elif shape is not None:
        pats = lemma_prediction(*shape)
        if pats is None:
            predicted, expectation = None, None
        else:
            compiled = [parse_pattern(p) for p in pats]
            predicted = tuple(x for x in grid if any(p(x) for p in compiled))
            expectation = " | ".join(pats) if pats else "none"
    else:
        predicted, expectation = None, None
    return ScanResult(expr, cutoff, start, step, tuple(zeros), expectation, predicted)


def lemma_scan(cutoff=DEFAULT_MAX_NORM, alpha_max: int = 36, beta_max: int = 3) -> list[ScanResult]:
    """Every monomial (and shadow) with alpha <= alpha_max, beta <= beta_max, plus the lemma's outliers."""
    seen = set()
    out = []
    keys = [(e, a, b, s) for e in (0, 1) for a in range(alpha_max + 1) for b in range(beta_max + 1)
            for s in (False, True) if (e, a, b) != (0, 0, 0)]
    keys += [(x.eps, x.alpha, x.beta, x.shadowed) for x in LEMMA_ZEROS]
    for key in keys:
        if key in seen:
            continue
        seen.add(key)
        out.append(scan_zeros(lemma_expression(*key), cutoff))
    return out


# ----------------------------------------------------------------------
# Ramanujan tau and the degree-8 condition for E8

@dataclass(frozen=True)
class TauReport:
    values: tuple[int, ...]
    zeros: tuple[int, ...]
    wiring_mismatches: tuple[int, ...]
    consequences: tuple[dict, ...]

    @property
    def nonvanishing(self) -> bool:
        return not self.zeros

    def to_json_obj(self) -> dict:
        return {"max_m": len(self.values), "tau": list(self.values), "zeros": list(self.zeros),
                "nonvanishing": self.nonvanishing, "wiring_mismatches": list(self.wiring_mismatches),
                "consequences": list(self.consequences)}


def tau_series(max_m: int) -> QSeries:
    """Delta_24 = sum tau(m) q^(2m) up to q^(2 max_m)."""
    return expand(DE24, to_eighths(2 * max_m))


def tau_scan(max_m: int, tau_override: Mapping[int, int] | None = None) -> TauReport:
    """tau(1..max_m), with the E8 / rank-16 consequences of any zero.

    ``tau_override`` replaces selected values (a synthetic zero checks that
    a vanishing tau is routed to the shell verdicts).
    """
    if max_m < 1:
        raise DomainError("max_m must be positive")
    delta = tau_series(max_m)
    if tau_override:
        terms = {e: c for e, c in delta.terms()}
        for m, v in tau_override.items():
            if not 1 <= m <= max_m:
                raise DomainError(f"override index {m} outside 1..{max_m}")
            terms[to_eighths(2 * m)] = Fraction(v)
        delta = QSeries.from_terms(terms, delta.cutoff)
    values = tuple(int(delta.at(2 * m)) for m in range(1, max_m + 1))
    e8 = StrengthEngine(even_selfdual("E8"), max_norm=2 * max_m, overrides={"De24": delta})
    r16 = StrengthEngine(even_selfdual("rank16"), max_norm=2 * max_m, overrides={"De24": delta})
    mismatches = []
    for m in range(1, max_m + 1):
        if e8.condition(8, 2 * m) != (values[m - 1] == 0):
            mismatches.append(m)
    consequences = []
    zeros = tuple(m for m in range(1, max_m + 1) if values[m - 1] == 0)
    for m in zeros:
        ve, vr = e8.verdict(2 * m), r16.verdict(2 * m)
        consequences.append({"m": m, "norm": 2 * m, "E8": ve.label, "E8_exact": ve.exact,
                             "rank16": vr.label, "rank16_exact": vr.exact})
    return TauReport(values, zeros, tuple(mismatches), tuple(consequences))


# ----------------------------------------------------------------------
# growth certificates

@dataclass(frozen=True)
class GrowthCertificate:
    n: int
    target: int
    start: int
    prefix: tuple[int, ...]

    @property
    def bound(self) -> int:
        """Certified M_n (capped at the target)."""
        return self.prefix[-1]

    @property
    def certified(self) -> bool:
        return self.bound >= self.target

    @property
    def monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.prefix, self.prefix[1:]))

    def to_json_obj(self) -> dict:
        return {"n": self.n, "target": self.target, "start": self.start, "M_n": self.bound,
                "certified": self.certified, "monotone": self.monotone, "prefix_by_power": list(self.prefix)}


def _integral_coefficients(s: QSeries, upto: int, name: str) -> tuple[int, list[int]]:
    terms = list(s.terms())
    if not terms:
        raise DomainError(f"{name} is zero")
    v = terms[0][0]
    if any(e % EIGHTHS for e, _ in terms):
        raise DomainError(f"{name} must have integral exponents")
    den = 1
    for _, c in terms:
        den = den * c.denominator // math.gcd(den, c.denominator)
    out = [0] * (upto - v // EIGHTHS + 1)
    for e, c in terms:
        i = e // EIGHTHS - v // EIGHTHS
        if i < len(out):
            out[i] = int(c * den)
    return v // EIGHTHS, out


def growth_certificate(phi0: QSeries, psi: QSeries, n: int, target: int) -> GrowthCertificate:
    """Largest M with all coefficients of ``phi0 * psi^j`` positive on [k, M], for j = 0..n.

    Hypotheses: the leading coefficient of phi0 is positive, psi = b0 + b1 q + ...
    with b0, b1 > 0 and all b_j >= 0.  Coefficients are read up to ``target``
    (the certified bound is capped there).
    """
    if n < 0 or target < 1:
        raise DomainError("need n >= 0 and target >= 1")
    k, a = _integral_coefficients(phi0, target, "phi0")
    if a[0] <= 0:
        raise DomainError("phi0 must have a positive leading coefficient")
    v, b = _integral_coefficients(psi, target, "psi")
    if v != 0 or len(b) < 2 or b[0] <= 0 or b[1] <= 0:
        raise DomainError("psi must start b0 + b1 q with b0, b1 > 0")
    if any(x < 0 for x in b):
        raise DomainError("psi must have nonnegative coefficients")
    length = target - k + 1
    if length <= 0:
        raise DomainError("target below the valuation of phi0")
    cur = np.array(a[:length] + [0] * (length - len(a[:length])), dtype=object)
    support = [(i, c) for i, c in enumerate(b[:length]) if c]

    def prefix(arr) -> int:
        bad = np.nonzero(arr <= 0)[0]
        return k + (int(bad[0]) if bad.size else length) - 1

    out = [prefix(cur)]
    for _ in range(n):
        nxt = np.zeros(length, dtype=object)
        for i, c in support:
            nxt[i:] += c * cur[:length - i]
        cur = nxt
        out.append(prefix(cur))
    return GrowthCertificate(n, target, k, tuple(out))


def shadow_growth_inputs(cutoff: int) -> tuple[QSeries, QSeries]:
    """phi0 = -16 Sh(De8)(z/2) and psi = q^(-1/8) Th2(z/2), as integral q-series."""
    cut = to_eighths(2 * cutoff + 2)
    phi0 = expand(shadow(DE8), cut).rescale(1, 2).scale(-16)
    psi = expand(TH2, cut).rescale(1, 2).shift(-1)
    return phi0, psi


# ----------------------------------------------------------------------
# theorem reproduction

Expectation = Callable[[Fraction], "str | None"]


@dataclass
class MemberSummary:
    lattice: str
    shadow: bool
    counts: dict[str, int]
    norms: dict[str, list[str]]
    lower_bounds: int
    mismatches: list[dict]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json_obj(self) -> dict:
        return {"lattice": self.lattice, "shadow": self.shadow, "counts": dict(sorted(self.counts.items())),
                "norms": {k: v for k, v in sorted(self.norms.items())}, "lower_bounds": self.lower_bounds,
                "mismatches": self.mismatches, "pass": self.passed}


@dataclass
class TheoremReport:
    theorem: str
    cutoff: Fraction
    members: list[MemberSummary] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(m.passed for m in self.members)

    def to_json_obj(self) -> dict:
        return {"theorem": self.theorem, "cutoff": _json_number(self.cutoff), "pass": self.passed,
                "members": [m.to_json_obj() for m in self.members]}

    def to_text(self, show: int = 10) -> str:
        lines = [f"theorem {self.theorem} (norms <= {self.cutoff}): {'PASS' if self.passed else 'FAIL'}"]
        for m in self.members:
            name = f"Sh({m.lattice})" if m.shadow else m.lattice
            parts = []
            for label in sorted(m.counts, key=lambda x: (x == "empty", x)):
                shown = m.norms.get(label)
                if shown is None:
                    parts.append(f"{label}: {m.counts[label]} shells")
                else:
                    more = "" if len(shown) <= show else f", ... ({len(shown)} total)"
                    parts.append(f"{label}: {', '.join(shown[:show])}{more}")
            flag = "ok" if m.passed else f"{len(m.mismatches)} mismatches"
            lines.append(f"  {name:<22} {flag:<14} " + "; ".join(parts))
        return "\n".join(lines) + "\n"


def summarize(fd: FamilyDescriptor, shadow_side: bool, cutoff, expected: Expectation,
              engine: StrengthEngine | None = None) -> MemberSummary:
    """Compare every shell verdict up to ``cutoff`` with ``expected(m)`` (None for empty)."""
    eng = engine or StrengthEngine(fd, shadow_side, cutoff)
    by_label: dict[str, list[Fraction]] = {}
    lower = 0
    mismatches = []
    for m in eng.grid():
        size = eng.size(m)
        if size == 0:
            got = None
        else:
            v = eng.verdict(m)
            got = v.label
            lower += not v.exact
        want = expected(m)
        if got != want:
            mismatches.append({"norm": str(m), "expected": want or "empty", "got": got or "empty"})
        by_label.setdefault(got or "empty", []).append(m)
    counts = {k: len(v) for k, v in by_label.items()}
    bulk = max(counts, key=lambda k: (counts[k], k)) if counts else None
    norms = {k: [str(x) for x in v] for k, v in by_label.items() if k not in (bulk, "empty")}
    return MemberSummary(fd.name, shadow_side, counts, norms, lower, mismatches)


def _nonempty(label: str, eng: StrengthEngine) -> Expectation:
    return lambda m: label if eng.size(m) else None


def _with_default(default: str, eng: StrengthEngine, special: Sequence[tuple[Callable[[Fraction], bool], str]]) -> Expectation:
    def f(m: Fraction) -> str | None:
        if not eng.size(m):
            return None
        for test, label in special:
            if test(m):
                return label
        return default
    return f


def _run(report: TheoremReport, fd: FamilyDescriptor, shadow_side: bool, make_expected) -> None:
    eng = StrengthEngine(fd, shadow_side, report.cutoff)
    report.members.append(summarize(fd, shadow_side, report.cutoff, make_expected(eng), eng))


def theorem_cubic(cutoff=DEFAULT_MAX_NORM, n_max: int = 48) -> TheoremReport:
    """Cubic lattices Z^n and their shadows, 2 <= n <= n_max."""
    rep = TheoremReport("cubic", Fraction(cutoff))
    p = parse_pattern
    for n in range(2, n_max + 1):
        fd = cubic(n)
        for sh in (False, True):
            special: list[tuple[Callable[[Fraction], bool], str]] = []
            default = "3.5" if n == 2 else "3"
            if not sh:
                if n == 4:
                    special.append((p("2a, a>=1"), "5"))
                if n == 7:
                    special.append((p("4^a(8b+3)"), "5"))
                if n == 16:
                    special.append((p("4^a2"), "3.5"))
            else:
                if n == 16:
                    special += [(p("4^a2, a>=1"), "3.5"), (p("4a+2, a>=1"), "5")]
                if n == 40:
                    special.append((p("{24}"), "3.5"))
            _run(rep, fd, sh, lambda eng, s=special, d=default: _with_default(d, eng, s))
    return rep


def theorem_witt(cutoff=DEFAULT_MAX_NORM, ns: Sequence[int] = (8, 12, 16, 20, 24, 28)) -> TheoremReport:
    """Witt lattices: W8 all 7.5, W16 all 3.5, otherwise exactly 3 (shadows included)."""
    rep = TheoremReport("witt", Fraction(cutoff))
    for n in ns:
        fd = witt(n)
        label = {8: "7.5", 16: "3.5"}.get(n, "3")
        for sh in ((False,) if fd.even else (False, True)):
            _run(rep, fd, sh, lambda eng, lab=label: _nonempty(lab, eng))
    return rep


def theorem_even(cutoff=DEFAULT_MAX_NORM, catalog: dict | None = None) -> TheoremReport:
    """E8 (7.5), rank 16 (3.5), Leech (11.5) and every Niemeier lattice with roots (3)."""
    from .rootsys import load_catalog
    cat = catalog or load_catalog()
    rep = TheoremReport("even", Fraction(cutoff))
    _run(rep, even_selfdual("E8"), False, lambda eng: _nonempty("7.5", eng))
    _run(rep, even_selfdual("rank16"), False, lambda eng: _nonempty("3.5", eng))
    _run(rep, even_selfdual("leech"), False, lambda eng: _nonempty("11.5", eng))
    for rec in cat["niemeier"]:
        if rec["h"] == 0:
            continue
        fd = even_selfdual("niemeier", h=rec["h"], name=rec["name"])
        _run(rep, fd, False, lambda eng: _nonempty("3", eng))
    return rep


def theorem_long_shadow(cutoff=DEFAULT_MAX_NORM, catalog: dict | None = None) -> TheoremReport:
    """Long-shadow lattices of minimum 2 and of minimum 1 (rank 24, and Z^3 + W8)."""
    from .rootsys import load_catalog
    cat = catalog or load_catalog()
    p = parse_pattern
    rep = TheoremReport("long_shadow", Fraction(cutoff))
    for rec in cat["long_shadow"]:
        n, name = rec["n"], rec["name"]
        if n == 8:
            continue
        fd = long_shadow(n, rec["h"], name=name)
        for sh in (False, True):
            special: list = []
            default = "7" if n == 23 else "3"
            if rec["roots"] == "2D8":
                # the shadow case follows from the zero pattern of Sh(Phi*Th3^8*De8^2)
                special += [(p("4^a, a>=1"), "3.5")] + ([] if sh else [(p("2a+1, a>=1"), "5")])
            if not sh and rec["roots"] in ("4A5", "5D4"):
                special.append((p("4^a, a>=1"), "5"))
            _run(rep, fd, sh, lambda eng, s=special, d=default: _with_default(d, eng, s))
    for rec in cat["long_shadow"]:
        big_n = rec["n"]
        fd = long_shadow_min1(24 - big_n, big_n, rec["h"], name=f"Z^{24 - big_n}+{rec['name']}")
        for sh in (False, True):
            _run(rep, fd, sh, lambda eng: _with_default("1", eng, [(p("4^a2"), "3")]))
    fd = long_shadow_min1(3, 8, 30, name="Z^3+W8")
    _run(rep, fd, False, lambda eng: _with_default("1", eng, [(p("4^a(8b+7)"), "3")]))
    return rep


def theorem_odd24(cutoff=DEFAULT_MAX_NORM, catalog: dict | None = None,
                  nse_h: Sequence[int] = (1, 3)) -> TheoremReport:
    """Odd rank-24 lattices of minimum 2: strongly eutactic cases from the catalog, plus parametric others."""
    from .rootsys import load_catalog, parse_root_system
    cat = catalog or load_catalog()
    p = parse_pattern
    rep = TheoremReport("odd24", Fraction(cutoff))
    seen: set[int] = set()
    for rec in cat["odd24_pairs"]:
        r = parse_root_system(rec["R"])
        if not r.components or r.h == 0 or r.h in seen:
            continue
        seen.add(r.h)
        fd = odd24(r.h, "se", name=f"odd24({r.label})")
        for sh in (False, True):
            _run(rep, fd, sh, lambda eng: _nonempty("3", eng))
    for h in nse_h:
        fd = odd24(h, "nse", name=f"odd24(nse, h={h})")
        for sh in (False, True):
            _run(rep, fd, sh, lambda eng: _with_default("1", eng, [(p("4^a, a>=1"), "3")]))
    return rep


THEOREMS: dict[str, Callable[..., TheoremReport]] = {
    "cubic": theorem_cubic,
    "witt": theorem_witt,
    "even": theorem_even,
    "long_shadow": theorem_long_shadow,
    "odd24": theorem_odd24,
}


def theorem_report(name: str, cutoff=DEFAULT_MAX_NORM, **kwargs) -> TheoremReport:
    if name not in THEOREMS:
        raise DataError(f"unknown theorem table {name!r}; known: {', '.join(THEOREMS)}")
    return THEOREMS[name](cutoff, **kwargs)


# ----------------------------------------------------------------------
# agreement with direct computation on constructed lattices

@dataclass(frozen=True)
class OracleRow:
    norm: Fraction
    shadow: bool
    theta_size: int
    counted_size: int
    enumerated_size: int | None
    theta_label: str | None
    theta_exact: bool | None
    kernel_label: str | None

    @property
    def count_ok(self) -> bool:
        return self.theta_size == self.counted_size and self.enumerated_size in (None, self.counted_size)

    @property
    def verdict_ok(self) -> bool:
        if self.theta_label is None or self.kernel_label is None:
            return self.theta_label == self.kernel_label
        if self.theta_exact:
            return self.theta_label == self.kernel_label
        return _label_key(self.theta_label) <= _label_key(self.kernel_label)

    def to_json_obj(self) -> dict:
        return {"norm": str(self.norm), "shadow": self.shadow, "theta_size": self.theta_size,
                "counted_size": self.counted_size, "enumerated_size": self.enumerated_size,
                "theta": self.theta_label, "theta_exact": self.theta_exact, "kernel": self.kernel_label,
                "ok": self.count_ok and self.verdict_ok}


def _json_number(x) -> int | str:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _label_key(label: str) -> Fraction:
    return Fraction(label)


def compare_with_kernel(spec: str, max_norm: int = 20, shadow_side: bool = False, max_degree: int = 16,
                        enumerate_limit: int = 20000, fd: FamilyDescriptor | None = None) -> list[OracleRow]:
    """Theta-route sizes and verdicts against orbit counts, enumeration and kernel sums.

    Shell sizes are counted orbit by orbit (and, below ``enumerate_limit``
    predicted vectors, also by plain enumeration); kernel verdicts use the
    exact inner-product distribution of the same shell.
    """
    from .designs import strength_from_distribution
    from .lattice import build, shadow_coset
    from .shells import enumerate_shell
    from .symmetric import lattice_model

    lat = build(spec)
    fd = fd or family_for(spec)
    if fd.n != lat.rank:
        raise DataError(f"{spec}: family rank {fd.n} differs from lattice rank {lat.rank}")
    engine = StrengthEngine(fd, shadow_side, max_norm, max_degree)
    model = lattice_model(lat, shadow_side)
    shift = shadow_coset(lat).shift_coords if shadow_side else None
    rows = []
    for m in engine.grid():
        t_size = engine.size(m)
        c_size = model.size(m)
        e_size = len(enumerate_shell(lat, m, shift)) if t_size <= enumerate_limit else None
        if c_size:
            kv = strength_from_distribution(model.distribution(m), m, lat.rank, max_degree)
            tv = engine.verdict(m)
            rows.append(OracleRow(m, shadow_side, t_size, c_size, e_size, tv.label, tv.exact, kv.label))
        else:
            rows.append(OracleRow(m, shadow_side, t_size, c_size, e_size, None, None, None))
    return rows
