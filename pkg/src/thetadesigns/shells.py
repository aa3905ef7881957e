"""Exact enumeration of lattice shells, shadow shells and inner products.

The enumerator is a Fincke-Pohst descent over the Gram matrix: floating
point only prunes the search (with a safety margin), the innermost
coordinate is solved from the remaining norm, and every candidate is
re-checked in integer arithmetic before it is emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, ResourceLimitError
from .lattice import Lattice

DEFAULT_CEILING = 10 ** 7
_MARGIN = 1e-9


@dataclass(frozen=True)
class Shell:
    """Vectors of one norm, stored as integer rows over a common denominator.

    Coordinates are ambient coordinates when the lattice has a basis and
    basis coordinates (with ``metric`` the Gram matrix) otherwise.
    """

    lattice_name: str
    norm: Fraction
    ints: np.ndarray
    den: int
    metric: tuple[tuple[int, ...], ...] | None = None
    rank: int | None = None

    def __len__(self) -> int:
        return int(self.ints.shape[0])

    @property
    def dim(self) -> int:
        return int(self.ints.shape[1])

    @property
    def space_rank(self) -> int:
        """Dimension of the space the points span as a lattice shell (the sphere's R^n)."""
        if self.rank is not None:
            return self.rank
        return self.dim if self.metric is None else len(self.metric)

    def vectors_exact(self) -> list[tuple[Fraction, ...]]:
        d = self.den
        return [tuple(Fraction(int(x), d) for x in row) for row in self.ints]

    def inner_ints(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Inner products scaled by den^2 between integer row blocks."""
        if self.metric is None:
            return a @ b.T
        return a @ np.asarray(self.metric, dtype=np.int64) @ b.T

    def to_tsv(self) -> str:
        lines = []
        for v in self.vectors_exact():
            lines.append("\t".join(f"{x.numerator}/{x.denominator}" for x in v))
        return "\n".join(lines) + ("\n" if lines else "")


def _cholesky_form(gram: Sequence[Sequence[int]]):
    g = np.asarray(gram, dtype=float)
    r = np.linalg.cholesky(g).T  # upper triangular, g = r^T r
    n = len(g)
    qd = np.array([r[i, i] ** 2 for i in range(n)])
    mu = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            mu[i, j] = r[i, j] / r[i, i]
    return qd, mu


def _search(gram, m: Fraction, shift: Sequence[Fraction], ceiling: int) -> list[list[int]]:
    """All integer u with (u+shift)^T G (u+shift) = m, as scaled integer rows d*(u+shift)."""
    n = len(gram)
    qd, mu = _cholesky_form(gram)
    s = [float(x) for x in shift]
    bound = float(m) + _MARGIN * max(1.0, float(m))
    x = [0.0] * n          # current x_i = u_i + s_i
    u = [0] * n
    rem = [0.0] * (n + 1)  # remaining budget before choosing level i
    rem[n] = bound
    hits: list[list[int]] = []
    lo = [0] * n
    hi = [0] * n

    def centre(i: int) -> float:
        return -sum(mu[i, j] * x[j] for j in range(i + 1, n))

    def set_range(i: int) -> None:
        c = centre(i)
        r = math.sqrt(max(rem[i + 1], 0.0) / qd[i])
        lo[i] = math.ceil(c - r - s[i] - _MARGIN)
        hi[i] = math.floor(c + r - s[i] + _MARGIN)

    if n == 1:
        r = math.sqrt(bound / qd[0])
        cand = range(math.ceil(-r - s[0] - _MARGIN), math.floor(r - s[0] + _MARGIN) + 1)
        return [[v] for v in cand]

    i = n - 1
    set_range(i)
    u[i] = lo[i] - 1
    while True:
        u[i] += 1
        if u[i] > hi[i]:
            i += 1
            if i == n:
                break
            continue
        x[i] = u[i] + s[i]
        t = x[i] - centre(i)
        rem[i] = rem[i + 1] - qd[i] * t * t
        if rem[i] < -_MARGIN:
            continue
        if i == 1:
            # innermost coordinate: qd0 (x0 - c)^2 = rem  ->  two candidates
            c = centre(0)
            need = float(m) - (bound - rem[1])
            if need < -_MARGIN * max(1.0, float(m)):
                continue
            rt = math.sqrt(max(need, 0.0) / qd[0])
            cands = {round(c + rt - s[0]), round(c - rt - s[0])}
            for v in cands:
                hits.append([v] + u[1:])
            if len(hits) > 4 * ceiling:
                raise ResourceLimitError(f"more than {ceiling} candidate vectors")
            continue
        i -= 1
        set_range(i)
        u[i] = lo[i] - 1
    return hits


def enumerate_shell(lat: Lattice, m, coset_shift: Sequence | None = None,
                    ceiling: int = DEFAULT_CEILING, predicted: int | None = None) -> Shell:
    """The shell ``(shift + L)_m``; ``coset_shift`` is given in basis coordinates."""
    m = Fraction(m)
    if m <= 0:
        raise DomainError("shell norm must be positive")
    if predicted is not None and predicted > ceiling:
        raise ResourceLimitError(f"predicted shell size {predicted} exceeds ceiling {ceiling}")
    n = lat.rank
    shift = [Fraction(x) for x in coset_shift] if coset_shift is not None else [Fraction(0)] * n
    if len(shift) != n:
        raise DomainError("coset shift has the wrong length")
    d = 1
    for x in shift:
        d = d * x.denominator // math.gcd(d, x.denominator)
    cand = _search(lat.gram, m, shift, ceiling)
    g = np.asarray(lat.gram, dtype=np.int64)
    ds = np.array([int(x * d) for x in shift], dtype=np.int64)
    if cand:
        u = np.asarray(cand, dtype=np.int64)
        xs = u * d + ds
        norms = np.einsum("ij,jk,ik->i", xs, g, xs)
        target = m * d * d
        if target.denominator != 1:
            xs = xs[:0]
        else:
            xs = xs[norms == int(target)]
        xs = np.unique(xs, axis=0)
    else:
        xs = np.zeros((0, n), dtype=np.int64)
    if len(xs) > ceiling:
        raise ResourceLimitError(f"shell size {len(xs)} exceeds ceiling {ceiling}")
    if lat.basis is None:
        ints, den, metric = xs, d, tuple(tuple(r) for r in lat.gram)
    else:
        bden = 1
        for row in lat.basis:
            for x in row:
                bden = bden * x.denominator // math.gcd(bden, x.denominator)
        b = np.asarray([[int(x * bden) for x in row] for row in lat.basis], dtype=np.int64)
        ints, den, metric = xs @ b, d * bden, None
        gcd = int(np.gcd.reduce(np.append(ints.ravel(), den))) if ints.size else den
        if gcd > 1:
            ints, den = ints // gcd, den // gcd
    if ints.size:
        order = np.lexsort(ints.T[::-1])
        ints = ints[order]
    return Shell(lat.name, m, np.ascontiguousarray(ints, dtype=np.int64), int(den), metric, lat.rank)


def shell_count(lat: Lattice, m, coset_shift: Sequence | None = None) -> int:
    key = ("count", Fraction(m), None if coset_shift is None else tuple(Fraction(x) for x in coset_shift))
    if key not in lat._cache:
        lat._cache[key] = len(enumerate_shell(lat, m, coset_shift))
    return lat._cache[key]


def enumerate_shadow_shell(lat: Lattice, m, ceiling: int = DEFAULT_CEILING) -> Shell:
    from .lattice import shadow_coset
    sh = shadow_coset(lat)
    return enumerate_shell(lat, m, sh.shift_coords, ceiling)


# ----------------------------------------------------------------------
# inner-product statistics

@dataclass(frozen=True)
class IPDistribution:
    """Ordered-pair counts of inner products ``<x, y>`` over ``X x Y``."""

    counts: dict

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def symmetric(self) -> bool:
        return all(self.counts.get(-t, 0) == c for t, c in self.counts.items())

    def to_json_obj(self) -> dict:
        return {str(t): c for t, c in sorted(self.counts.items())}


def _count_products(a: np.ndarray, b: np.ndarray, metric, budget: int = 1 << 24) -> dict[int, int]:
    out: dict[int, int] = {}
    bm = b if metric is None else b @ np.asarray(metric, dtype=np.int64)
    chunk = max(1, budget // max(1, len(b)))
    for start in range(0, len(a), chunk):
        block = a[start:start + chunk] @ bm.T
        vals, cnt = np.unique(block, return_counts=True)
        for v, c in zip(vals.tolist(), cnt.tolist()):
            out[v] = out.get(v, 0) + c
    return out


def ip_distribution(x: Shell, y: Shell | None = None) -> IPDistribution:
    """Exact inner-product counts over ``X x X`` (or ``X x Y``)."""
    if len(x) == 0:
        raise DomainError("inner-product distribution of an empty shell")
    y = x if y is None else y
    if y.den != x.den or y.metric != x.metric:
        raise DomainError("shells use different coordinate scalings")
    raw = _count_products(x.ints, y.ints, x.metric)
    d2 = x.den * x.den
    return IPDistribution({Fraction(v, d2): c for v, c in sorted(raw.items())})


def ip_distribution_naive(vectors: Sequence[Sequence[Fraction]], inner=None) -> IPDistribution:
    """Double-loop reference for :func:`ip_distribution`."""
    inner = inner or (lambda u, v: sum((a * b for a, b in zip(u, v)), Fraction(0)))
    out: dict = {}
    for u in vectors:
        for v in vectors:
            t = inner(u, v)
            out[t] = out.get(t, 0) + 1
    return IPDistribution(dict(sorted(out.items())))


def per_point_profile(x: Shell, index: int = 0) -> dict[Fraction, int]:
    """Counts ``N_alpha = #{y : <x_i, y> = alpha}`` for one point of the shell."""
    raw = _count_products(x.ints[index:index + 1], x.ints, x.metric)
    d2 = x.den * x.den
    return {Fraction(v, d2): c for v, c in sorted(raw.items())}


def ip_distribution_by_orbits(x: Shell, canon) -> IPDistribution:
    """Inner-product counts using one representative per class of ``canon``.

    ``canon`` maps an integer row to a hashable key that must be constant
    on the orbits of a group of isometries preserving the shell; the pair
    count then equals the class size times the representative's profile.
    """
    if len(x) == 0:
        raise DomainError("inner-product distribution of an empty shell")
    classes: dict = {}
    for i, row in enumerate(x.ints.tolist()):
        key = canon(tuple(row))
        if key in classes:
            classes[key][1] += 1
        else:
            classes[key] = [i, 1]
    out: dict[int, int] = {}
    for i, size in classes.values():
        for v, c in _count_products(x.ints[i:i + 1], x.ints, x.metric).items():
            out[v] = out.get(v, 0) + size * c
    d2 = x.den * x.den
    return IPDistribution({Fraction(v, d2): c for v, c in sorted(out.items())})
