"""Orbit-compressed shells for lattices with signed-permutation symmetry.

Let G be the group of coordinate permutations combined with an even
number of sign changes.  When a lattice (or one of its cosets, such as the
shadow) is G-invariant, each shell is a union of G-orbits and every orbit
is described by a multiset of absolute coordinate values plus, when no
coordinate vanishes, the parity of the number of negative entries.

Shell sizes then come from orbit lengths, and exact inner-product
distributions between two shells come from a small dynamic programme that
counts, for one orbit representative x, the vectors z of another orbit
with a prescribed value of <x, z>.  Nothing here uses theta series; the
counts are the same numbers a full enumeration would produce, obtained
orbit by orbit.

Direct sums are handled by :class:`ProductModel`, which convolves the
distributions of the summands.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import _linalg as la
from .errors import DomainError
from .lattice import Lattice, shadow_coset


@dataclass(frozen=True)
class OrbitClass:
    """Sorted absolute values (integers over ``den``) and sign parity (None if any zero)."""

    values: tuple[int, ...]
    parity: int | None

    def representative(self) -> tuple[int, ...]:
        v = list(self.values)
        if self.parity == 1:
            v[0] = -v[0]
        return tuple(v)

    def size(self) -> int:
        n = len(self.values)
        mult = Counter(self.values)
        count = math.factorial(n)
        for c in mult.values():
            count //= math.factorial(c)
        nonzero = sum(1 for v in self.values if v)
        signs = 2 ** nonzero
        if self.parity is not None:
            signs //= 2
        return count * signs


def _square_partitions(total: int, parts: int, cap: int) -> list[tuple[int, ...]]:
    """Nonincreasing tuples of ``parts`` nonnegative ints <= cap with squares summing to total."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    top = min(cap, math.isqrt(total))
    for v in range(top, -1, -1):
        if v * v * parts < total:
            break
        for rest in _square_partitions(total - v * v, parts - 1, v):
            out.append((v,) + rest)
    return out


@lru_cache(maxsize=None)
def _sign_distribution(items: tuple[tuple[int, int], ...]) -> dict[tuple[int, int], int]:
    """For ``k`` copies of value ``v`` (pairs (v, k)), ways to pick signs.

    Returns {(sum of signed values, parity of negatives): ways}.
    """
    dist = {(0, 0): 1}
    for v, k in items:
        step: dict[tuple[int, int], int] = {}
        if v == 0:
            step[(0, 0)] = 1
        else:
            for j in range(k + 1):
                step[(v * (k - 2 * j), j & 1)] = math.comb(k, j)
        new: dict[tuple[int, int], int] = {}
        for (s1, p1), w1 in dist.items():
            for (s2, p2), w2 in step.items():
                key = (s1 + s2, p1 ^ p2)
                new[key] = new.get(key, 0) + w1 * w2
        dist = new
    return dist


def _compositions(a: int, caps: Sequence[int]):
    """Vectors k with 0 <= k_i <= caps_i and sum a."""
    if not caps:
        if a == 0:
            yield ()
        return
    first = caps[0]
    rest_cap = sum(caps[1:])
    for k in range(max(0, a - rest_cap), min(first, a) + 1):
        for tail in _compositions(a - k, caps[1:]):
            yield (k,) + tail


def orbit_ip_counts(x: Sequence[int], target: OrbitClass) -> dict[int, int]:
    """``{<x, z>: count}`` over z in the orbit class ``target`` (integer units)."""
    n = len(x)
    if n != len(target.values):
        raise DomainError("dimension mismatch")
    groups = Counter(abs(v) for v in x)
    neg_x = sum(1 for v in x if v < 0)
    vals = sorted(set(target.values), reverse=True)
    avail = tuple(target.values.count(v) for v in vals)
    # state: (remaining counts, sum, parity) -> number of partial sequences
    states: dict[tuple[tuple[int, ...], int, int], int] = {(avail, 0, 0): 1}
    for u, a in sorted(groups.items(), reverse=True):
        new: dict[tuple[tuple[int, ...], int, int], int] = {}
        fa = math.factorial(a)
        for (rem, s, p), w in states.items():
            for take in _compositions(a, rem):
                arrange = fa
                for k in take:
                    arrange //= math.factorial(k)
                signs = _sign_distribution(tuple((v, k) for v, k in zip(vals, take) if k))
                left = tuple(r - k for r, k in zip(rem, take))
                base = w * arrange
                for (ds, dp), ways in signs.items():
                    key = (left, s + u * ds, p ^ dp)
                    new[key] = new.get(key, 0) + base * ways
        states = new
    out: dict[int, int] = {}
    want = None if target.parity is None else (target.parity ^ (neg_x & 1))
    for (_, s, p), w in states.items():
        if want is None or p == want:
            out[s] = out.get(s, 0) + w
    return out


class OrbitModel:
    """Shells of a G-invariant lattice or lattice coset, orbit by orbit.

    ``shift_coords`` selects the coset ``shift + L`` (basis coordinates).
    """

    def __init__(self, lat: Lattice, shift_coords: Sequence | None = None, label: str | None = None):
        if not lat.signed_symmetry:
            raise DomainError(f"{lat.name} has no verified signed-permutation symmetry")
        self.lattice = lat
        self.n = lat.dim
        self.shift = [Fraction(x) for x in shift_coords] if shift_coords is not None else [Fraction(0)] * self.n
        self.label = label or lat.name
        binv = la.inverse_rational([list(r) for r in lat.basis])
        den = 1
        for row in list(lat.basis):
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
        shift_amb = lat.to_ambient(self.shift)
        for x in shift_amb:
            den = den * x.denominator // math.gcd(den, x.denominator)
        self.den = den
        self._binv = binv
        self._classes: dict[Fraction, list[OrbitClass]] = {}
        self._cross: dict[tuple[Fraction, Fraction], dict[Fraction, int]] = {}

    def contains(self, ints: Sequence[int]) -> bool:
        """Membership of the ambient vector ``ints/den`` in the coset."""
        n = self.n
        for j in range(n):
            c = sum(Fraction(ints[i], self.den) * self._binv[i][j] for i in range(n) if ints[i]) - self.shift[j]
            if c.denominator != 1:
                return False
        return True

    def classes(self, m) -> list[OrbitClass]:
        m = Fraction(m)
        if m not in self._classes:
            total = m * self.den * self.den
            found: list[OrbitClass] = []
            if total.denominator == 1 and total >= 0:
                for vals in _square_partitions(int(total), self.n, math.isqrt(int(total))):
                    options = [None] if 0 in vals else [0, 1]
                    for par in options:
                        cls = OrbitClass(vals, par)
                        if self.contains(cls.representative()):
                            found.append(cls)
            self._classes[m] = found
        return self._classes[m]

    def size(self, m) -> int:
        return sum(c.size() for c in self.classes(m))

    def norms_upto(self, m_max) -> list[Fraction]:
        """Norms in ``[0, m_max]`` that carry vectors."""
        step = Fraction(1, self.den * self.den)
        out = []
        t = Fraction(0)
        while t <= m_max:
            if self.size(t):
                out.append(t)
            t += step
        return out

    def cross(self, a, c) -> dict[Fraction, int]:
        """Ordered-pair counts of ``<x, y>`` for x of norm a and y of norm c."""
        a, c = Fraction(a), Fraction(c)
        key = (a, c)
        if key not in self._cross:
            if (c, a) in self._cross:
                self._cross[key] = self._cross[(c, a)]
            else:
                acc: dict[int, int] = {}
                for ca in self.classes(a):
                    rep = ca.representative()
                    weight = ca.size()
                    for cb in self.classes(c):
                        for t, k in orbit_ip_counts(rep, cb).items():
                            acc[t] = acc.get(t, 0) + weight * k
                d2 = self.den * self.den
                self._cross[key] = {Fraction(t, d2): k for t, k in sorted(acc.items())}
        return self._cross[key]

    def distribution(self, m) -> dict[Fraction, int]:
        return self.cross(m, m)


class ProductModel:
    """Direct product of orbit models (shells of a direct sum, or of a product of shadows)."""

    def __init__(self, parts: Sequence, label: str | None = None):
        if len(parts) != 2:
            head, *tail = parts
            parts = [head, ProductModel(tail)] if len(tail) > 1 else [head, tail[0]]
        self.left, self.right = parts
        self.label = label or f"{self.left.label}+{self.right.label}"
        self._cross: dict = {}
        self._norm_cache: dict = {}

    def _norms(self, model, m_max) -> list[Fraction]:
        key = (id(model), Fraction(m_max))
        if key not in self._norm_cache:
            self._norm_cache[key] = model.norms_upto(m_max)
        return self._norm_cache[key]

    def norms_upto(self, m_max) -> list[Fraction]:
        left = self._norms(self.left, m_max)
        right = self._norms(self.right, m_max)
        return sorted({a + b for a in left for b in right if a + b <= m_max})

    def size(self, m) -> int:
        m = Fraction(m)
        return sum(self.left.size(a) * self.right.size(m - a)
                   for a in self._norms(self.left, m) if self.right.size(m - a))

    def cross(self, m1, m2) -> dict[Fraction, int]:
        m1, m2 = Fraction(m1), Fraction(m2)
        key = (m1, m2)
        if key not in self._cross:
            acc: dict[Fraction, int] = {}
            la_ = [a for a in self._norms(self.left, m1) if self.right.size(m1 - a)]
            lc_ = [c for c in self._norms(self.left, m2) if self.right.size(m2 - c)]
            for a in la_:
                for c in lc_:
                    d1 = self.left.cross(a, c)
                    d2 = self.right.cross(m1 - a, m2 - c)
                    for t1, k1 in d1.items():
                        for t2, k2 in d2.items():
                            t = t1 + t2
                            acc[t] = acc.get(t, 0) + k1 * k2
            self._cross[key] = dict(sorted(acc.items()))
        return self._cross[key]

    def distribution(self, m) -> dict[Fraction, int]:
        return self.cross(m, m)


def lattice_model(lat: Lattice, shadow: bool = False):
    """Orbit model of ``lat`` (or its shadow), splitting direct sums when possible."""
    parts = lat.summands
    if parts:
        return ProductModel([lattice_model(p, shadow) for p in parts], label=lat.name)
    shift = shadow_coset(lat).shift_coords if shadow else None
    return OrbitModel(lat, shift, label=(f"Sh({lat.name})" if shadow else lat.name))
