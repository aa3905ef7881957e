"""Polynomials in the theta constants and their q-expansions.

A :class:`ThetaPolynomial` is a finite rational combination of words
``Th2^a Th3^b Th4^c``.  The named forms (Phi, De8, Q, R, De24) are fixed
polynomials; :func:`expand` turns any polynomial into a truncated
:class:`~thetadesigns.qseries.QSeries` by substituting the defining sums

    Th2 = sum_{m in Z+1/2} q^(m^2),  Th3 = sum_{m in Z} q^(m^2),
    Th4 = sum_{m in Z} (-1)^m q^(m^2),

with ``q^m = exp(i pi z m)``.  Two word maps act on polynomials:

* :func:`shadow` implements ``f(z) -> (i/z)^w f(-1/z + 1)`` on words with
  ``4 | a``: ``Th2^a Th3^b Th4^c -> (-1)^(a/4) Th4^a Th2^b Th3^c``;
* :func:`translate` implements ``f(z) -> f(z+1)`` on the same words:
  ``Th2^a Th3^b Th4^c -> (-1)^(a/4) Th2^a Th4^b Th3^c``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import ParseError, UnsupportedShadowError
from .qseries import DEFAULT_CUTOFF_EIGHTHS, EIGHTHS, QSeries, mul, power, to_eighths


@dataclass(frozen=True, order=True)
class ThetaWord:
    """The monomial ``Th2^a Th3^b Th4^c``."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise ValueError("theta word exponents are nonnegative")

    @property
    def weight(self) -> Fraction:
        return Fraction(self.a + self.b + self.c, 2)

    def __mul__(self, other: "ThetaWord") -> "ThetaWord":
        return ThetaWord(self.a + other.a, self.b + other.b, self.c + other.c)

    def __str__(self) -> str:
        parts = [f"Th{i}^{e}" if e > 1 else f"Th{i}" for i, e in ((2, self.a), (3, self.b), (4, self.c)) if e]
        return "*".join(parts) if parts else "1"


class ThetaPolynomial:
    """Immutable rational combination of theta words."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[ThetaWord, object] | Iterable[tuple[ThetaWord, object]] = ()):
        acc: dict[ThetaWord, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            acc[w] = acc.get(w, Fraction(0)) + Fraction(c)
        self._terms = tuple(sorted((w, c) for w, c in acc.items() if c))
        self._hash = hash(self._terms)

    # construction helpers
    @classmethod
    def word(cls, a: int = 0, b: int = 0, c: int = 0, coeff=1) -> "ThetaPolynomial":
        return cls({ThetaWord(a, b, c): coeff})

    @classmethod
    def constant(cls, value) -> "ThetaPolynomial":
        return cls({ThetaWord(0, 0, 0): value})

    # inspection
    @property
    def terms(self) -> tuple[tuple[ThetaWord, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degrees(self) -> set[int]:
        """Total degrees ``a+b+c`` occurring (twice the weights)."""
        return {w.a + w.b + w.c for w, _ in self._terms}

    @property
    def homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def weight(self) -> Fraction | None:
        """Common weight of a homogeneous nonzero polynomial, else None."""
        d = self.degrees
        return Fraction(d.pop(), 2) if len(d) == 1 else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThetaPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"ThetaPolynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for w, c in self._terms:
            s = str(w)
            if s == "1":
                out.append(str(c))
            elif c == 1:
                out.append(s)
            elif c == -1:
                out.append("-" + s)
            else:
                out.append(f"{c}*{s}")
        return " + ".join(out).replace("+ -", "- ")

    # ring structure
    def _coerce(self, other) -> "ThetaPolynomial | None":
        if isinstance(other, ThetaPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return ThetaPolynomial.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ThetaPolynomial(list(self._terms) + list(o._terms))

    __radd__ = __add__

    def __neg__(self) -> "ThetaPolynomial":
        return ThetaPolynomial((w, -c) for w, c in self._terms)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc: dict[ThetaWord, Fraction] = {}
        for w1, c1 in self._terms:
            for w2, c2 in o._terms:
                w = w1 * w2
                acc[w] = acc.get(w, Fraction(0)) + c1 * c2
        return ThetaPolynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ThetaPolynomial":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result


ONE = ThetaPolynomial.constant(1)
TH2 = ThetaPolynomial.word(1, 0, 0)
TH3 = ThetaPolynomial.word(0, 1, 0)
TH4 = ThetaPolynomial.word(0, 0, 1)
PHI = TH4 ** 4 - TH2 ** 4
DE8 = Fraction(1, 16) * TH2 ** 4 * TH4 ** 4
Q = TH3 ** 8 - 16 * DE8
R = PHI * (TH3 ** 8 + 8 * DE8)
DE24 = TH3 ** 8 * DE8 ** 2

NAMED_FORMS: dict[str, ThetaPolynomial] = {
    "Th2": TH2, "Th3": TH3, "Th4": TH4, "Phi": PHI,
    "De8": DE8, "Q": Q, "R": R, "De24": DE24,
}


# ----------------------------------------------------------------------
# word maps

def _sign_quarter(a: int) -> int:
    if a % 4:
        raise UnsupportedShadowError(
            f"Th2 exponent {a} is not a multiple of 4; the image needs eighth roots of unity")
    return -1 if (a // 4) % 2 else 1


def shadow(p: ThetaPolynomial) -> ThetaPolynomial:
    """Shadow operator on the subalgebra of words with ``4 | a``."""
    return ThetaPolynomial(
        (ThetaWord(w.b, w.c, w.a), _sign_quarter(w.a) * c) for w, c in p.terms)


def translate(p: ThetaPolynomial) -> ThetaPolynomial:
    """The substitution ``z -> z+1`` on words with ``4 | a``."""
    return ThetaPolynomial(
        (ThetaWord(w.a, w.c, w.b), _sign_quarter(w.a) * c) for w, c in p.terms)


# ----------------------------------------------------------------------
# expansions

@lru_cache(maxsize=None)
def theta_constant(index: int, cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> QSeries:
    """``Th2``, ``Th3`` or ``Th4`` from the defining sums, merged over +-m."""
    terms: dict[int, int] = {}
    if index == 2:
        k = 1  # m = k/2 with k odd; exponent m^2 = k^2/4 q = 2 k^2 eighths
        while 2 * k * k <= cutoff:
            terms[2 * k * k] = 2
            k += 2
    elif index in (3, 4):
        terms[0] = 1
        k = 1
        while EIGHTHS * k * k <= cutoff:
            terms[EIGHTHS * k * k] = 2 if (index == 3 or k % 2 == 0) else -2
            k += 1
    else:
        raise ValueError(f"no theta constant Th{index}")
    return QSeries.from_terms(terms, cutoff)


@lru_cache(maxsize=4096)
def _theta_power(index: int, k: int, cutoff: int) -> QSeries:
    if k == 0:
        return QSeries.one(cutoff)
    if k == 1:
        return theta_constant(index, cutoff)
    if k % 2 == 0:
        half = _theta_power(index, k // 2, cutoff)
        return mul(half, half)
    return mul(_theta_power(index, k - 1, cutoff), theta_constant(index, cutoff))


@lru_cache(maxsize=8192)
def expand_word(word: ThetaWord, cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> QSeries:
    """Expansion of one word, products ordered from the sparsest factor."""
    out = QSeries.one(cutoff)
    for index, k in ((2, word.a), (4, word.c), (3, word.b)):
        if k:
            out = mul(out, _theta_power(index, k, cutoff))
    return out


@lru_cache(maxsize=8192)
def _expand_cached(p: ThetaPolynomial, cutoff: int) -> QSeries:
    total = QSeries.zero(cutoff)
    for w, c in p.terms:
        total = total + expand_word(w, cutoff).scale(c)
    return total


def expand(p: ThetaPolynomial, cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> QSeries:
    """q-expansion of ``p`` up to ``cutoff`` eighths (inclusive)."""
    return _expand_cached(p, cutoff)


def expand_to(p: ThetaPolynomial, max_q) -> QSeries:
    """Expansion up to ``q^max_q`` for a rational ``max_q``."""
    return expand(p, to_eighths(max_q))


@dataclass(frozen=True)
class IdentityReport:
    holds: bool
    cutoff: int
    first_difference: int | None = None
    lhs_coeff: Fraction | None = None
    rhs_coeff: Fraction | None = None

    def to_json_obj(self) -> dict:
        out: dict = {"holds": self.holds, "cutoff_eighths": self.cutoff, "to_cutoff_only": True}
        if not self.holds:
            out["first_difference_eighths"] = self.first_difference
            out["lhs"] = str(self.lhs_coeff)
            out["rhs"] = str(self.rhs_coeff)
        return out


def verify_identity(lhs: ThetaPolynomial, rhs: ThetaPolynomial,
                    cutoff: int = DEFAULT_CUTOFF_EIGHTHS) -> IdentityReport:
    """Compare expansions term by term up to the cutoff."""
    a = expand(lhs, cutoff)
    b = expand(rhs, cutoff)
    e = a.first_difference(b)
    if e is None:
        return IdentityReport(True, cutoff)
    return IdentityReport(False, cutoff, e, a.coeff(e), b.coeff(e))


# ----------------------------------------------------------------------
# form-expression grammar
#
#   expr   := term (("+" | "-") term)*
#   term   := unary ("*" unary)*
#   unary  := "-" unary | power
#   power  := atom ("^" INT)?
#   atom   := NAME | INT ("/" INT)? | "(" expr ")" | "Sh" "(" expr ")"

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1) is not None:
            out.append(("int", m.group(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2)))
        elif m.group(3) is not None and not m.group(3).isspace():
            out.append(("op", m.group(3)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind: str, value: str | None = None) -> str:
        t = self.peek()
        if t is None or t[0] != kind or (value is not None and t[1] != value):
            want = value or kind
            got = "end of input" if t is None else repr(t[1])
            raise ParseError(f"expected {want}, got {got} in {self.text!r}")
        self.i += 1
        return t[1]

    def parse(self) -> ThetaPolynomial:
        if not self.toks:
            raise ParseError("empty form expression")
        p = self.expr()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()[1]!r} in {self.text!r}")
        return p

    def expr(self) -> ThetaPolynomial:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take("op")
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> ThetaPolynomial:
        p = self.unary()
        while self.peek() == ("op", "*"):
            self.take("op")
            p = p * self.unary()
        return p

    def unary(self) -> ThetaPolynomial:
        if self.peek() == ("op", "-"):
            self.take("op")
            return -self.unary()
        return self.power()

    def power(self) -> ThetaPolynomial:
        p = self.atom()
        if self.peek() == ("op", "^"):
            self.take("op")
            p = p ** int(self.take("int"))
        return p

    def atom(self) -> ThetaPolynomial:
        t = self.peek()
        if t is None:
            raise ParseError(f"unexpected end of {self.text!r}")
        kind, value = t
        if kind == "int":
            self.i += 1
            num = int(value)
            if self.peek() == ("op", "/"):
                self.take("op")
                den = int(self.take("int"))
                if den == 0:
                    raise ParseError("zero denominator")
                return ThetaPolynomial.constant(Fraction(num, den))
            return ThetaPolynomial.constant(num)
        if kind == "name":
            self.i += 1
            if value == "Sh":
                self.take("op", "(")
                inner = self.expr()
                self.take("op", ")")
                return shadow(inner)
            if value not in NAMED_FORMS:
                raise ParseError(f"unknown form {value!r}; known: {', '.join(NAMED_FORMS)}")
            return NAMED_FORMS[value]
        if t == ("op", "("):
            self.i += 1
            p = self.expr()
            self.take("op", ")")
            return p
        raise ParseError(f"unexpected {value!r} in {self.text!r}")


def parse_form(text: str) -> ThetaPolynomial:
    """Parse a form expression such as ``"Phi*Th3^7*De8"`` or ``"Sh(Th3^2*De8)"``."""
    return _Parser(text).parse()
