"""Small exact linear algebra over Z, Q and F2 (matrices as lists of rows)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_rational(m: Sequence[Sequence]) -> Fraction:
    den = 1
    for row in m:
        for x in row:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    scaled = [[int(Fraction(x) * den) for x in row] for row in m]
    return Fraction(det_int(scaled), den ** len(m))


def is_positive_definite(g: Sequence[Sequence]) -> bool:
    """Exact test via pivots of symmetric Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in g]
    n = len(a)
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return True


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(c) for c in zip(*a)]


def gram(rows: Sequence[Sequence]) -> Matrix:
    return [[sum(Fraction(x) * Fraction(y) for x, y in zip(r, s)) for s in rows] for r in rows]


def rank_rational(rows: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    rank = 0
    ncols = len(a[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][c] != 0:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == len(a):
            break
    return rank


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique solution of a square system ``a x = b`` or None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n] for row in m]


def inverse_rational(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def hnf_rows(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form; returns the nonzero rows (a Z-basis of the row lattice)."""
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    out: Matrix = []
    col = 0
    while a and col < ncols:
        nz = [r for r in a if r[col] != 0]
        if not nz:
            col += 1
            continue
        # Euclid on column ``col`` among the rows that touch it.
        rest = [r for r in a if r[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            nxt = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                r2 = [x - q * y for x, y in zip(r, p)]
                if r2[col] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = nxt
        p = nz[0]
        if p[col] < 0:
            p = [-x for x in p]
        out.append(p)
        a = rest
        col += 1
    # reduce entries above pivots
    for i, row in enumerate(out):
        pc = next(c for c, x in enumerate(row) if x)
        for k in range(i):
            q = out[k][pc] // row[pc]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], row)]
    return out


def lattice_basis(generators: Sequence[Sequence]) -> list[list[Fraction]]:
    """Z-basis of the lattice spanned by rational generator rows."""
    den = 1
    for row in generators:
        for x in row:
            d = Fraction(x).denominator
            den = den * d // math.gcd(den, d)
    ints = [[int(Fraction(x) * den) for x in row] for row in generators]
    return [[Fraction(x, den) for x in row] for row in hnf_rows(ints)]


def solve_mod2(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Some solution of ``a x = b`` over F2, or None."""
    n = len(a)
    ncols = len(a[0]) if n else 0
    m = [[x & 1 for x in row] + [y & 1] for row, y in zip(a, b)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, n) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(n):
            if i != r and m[i][c]:
                m[i] = [x ^ y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if m[i][ncols]:
            return None
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return x


def rank_mod2(rows: Sequence[Sequence[int]]) -> int:
    basis: list[int] = []
    for row in rows:
        v = 0
        for bit in row:
            v = (v << 1) | (bit & 1)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)
