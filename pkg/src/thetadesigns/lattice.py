"""Integral lattices: constructions, validation, shadows and invariants.

Lattices are given by generator rows in an ambient space (exact rationals)
or directly by an integer Gram matrix.  Vectors of a lattice with an
ambient basis are reported in ambient coordinates; for a lattice built from
a Gram matrix they are reported in basis coordinates together with the
Gram matrix as metric.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .errors import DataError, DomainError, ParseError, ValidationError

Vector = tuple[Fraction, ...]


# ----------------------------------------------------------------------
# binary codes

@dataclass(frozen=True)
class BinaryCode:
    """Binary linear code given by generator rows (tuples of 0/1)."""

    length: int
    generators: tuple[tuple[int, ...], ...]
    name: str = "code"

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.length or any(x not in (0, 1) for x in g):
                raise DomainError("generator rows must be 0/1 vectors of the code length")

    @property
    def dimension(self) -> int:
        return la.rank_mod2(self.generators) if self.generators else 0

    def codewords(self) -> list[tuple[int, ...]]:
        words = {tuple([0] * self.length)}
        for g in self.generators:
            words |= {tuple(x ^ y for x, y in zip(w, g)) for w in words}
        return sorted(words)

    @property
    def weight_enumerator(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for w in self.codewords():
            k = sum(w)
            out[k] = out.get(k, 0) + 1
        return dict(sorted(out.items()))

    @classmethod
    def hamming7(cls) -> "BinaryCode":
        rows = ["1000110", "0100101", "0010011", "0001111"]
        return cls(7, tuple(tuple(int(c) for c in r) for r in rows), "hamming7")

    @classmethod
    def even_weight(cls, n: int) -> "BinaryCode":
        rows = tuple(tuple(int(j in (i, i + 1)) for j in range(n)) for i in range(n - 1))
        return cls(n, rows, f"even{n}")

    @classmethod
    def from_strings(cls, rows: Sequence[str], name: str = "code") -> "BinaryCode":
        rows = [r.strip() for r in rows if r.strip()]
        if not rows:
            raise DomainError("a code needs at least one generator")
        return cls(len(rows[0]), tuple(tuple(int(c) for c in r) for r in rows), name)


# ----------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class Lattice:
    """Integral lattice with validated Gram matrix.

    ``basis`` holds generator rows in ambient coordinates (or None when the
    lattice was given by its Gram matrix).  ``signed_symmetry`` records a
    verified invariance under coordinate permutations and even sign
    changes of the ambient space, which the orbit-compressed shell engine
    exploits.
    """

    name: str
    gram: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[Fraction, ...], ...] | None = None
    signed_symmetry: bool = False
    summands: tuple = field(default=(), compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def dim(self) -> int:
        """Ambient dimension (equals the rank for Gram-defined lattices)."""
        return len(self.basis[0]) if self.basis else self.rank

    @property
    def det(self) -> int:
        if "det" not in self._cache:
            self._cache["det"] = la.det_int(self.gram)
        return self._cache["det"]

    @property
    def selfdual(self) -> bool:
        return self.det == 1

    @property
    def parity(self) -> str:
        return "even" if all(self.gram[i][i] % 2 == 0 for i in range(self.rank)) else "odd"

    @property
    def is_even(self) -> bool:
        return self.parity == "even"

    def to_ambient(self, coords: Sequence) -> Vector:
        """Ambient vector with the given basis coordinates."""
        if self.basis is None:
            return tuple(Fraction(c) for c in coords)
        return tuple(sum((Fraction(c) * b[k] for c, b in zip(coords, self.basis)), Fraction(0))
                     for k in range(self.dim))

    def coordinates(self, v: Sequence) -> list[Fraction] | None:
        """Basis coordinates of an ambient vector in the span, or None if outside it."""
        if self.basis is None:
            return [Fraction(x) for x in v]
        if self.rank == self.dim:
            if "basis_inverse" not in self._cache:
                self._cache["basis_inverse"] = la.inverse_rational([list(r) for r in self.basis])
            inv = self._cache["basis_inverse"]
            vs = [Fraction(x) for x in v]
            return [sum((x * inv[i][j] for i, x in enumerate(vs) if x), Fraction(0)) for j in range(self.rank)]
        b = [list(r) for r in self.basis]
        gram_b = la.gram(b)
        rhs = [sum(Fraction(x) * y for x, y in zip(v, r)) for r in b]
        c = la.solve_rational(gram_b, rhs)
        if c is None:
            return None
        if tuple(v) != self.to_ambient(c):
            return None
        return c

    def contains(self, v: Sequence) -> bool:
        c = self.coordinates(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        """Inner product of two vectors in this lattice's reporting coordinates."""
        if self.basis is not None:
            return sum((Fraction(x) * Fraction(y) for x, y in zip(u, v)), Fraction(0))
        return sum((Fraction(u[i]) * self.gram[i][j] * Fraction(v[j])
                    for i in range(self.rank) for j in range(self.rank)), Fraction(0))

    def metric(self) -> list[list[int]] | None:
        """Gram matrix to use on reporting coordinates (None means the identity)."""
        return None if self.basis is not None else [list(r) for r in self.gram]


def _validated(name: str, gram: Sequence[Sequence], basis=None, check_symmetry: bool = False) -> Lattice:
    g = [[Fraction(x) for x in row] for row in gram]
    n = len(g)
    if n == 0:
        raise ValidationError("empty lattice")
    for i in range(n):
        if len(g[i]) != n:
            raise ValidationError("Gram matrix is not square")
        for j in range(n):
            if g[i][j] != g[j][i]:
                raise ValidationError("Gram matrix is not symmetric")
            if g[i][j].denominator != 1:
                raise ValidationError(f"{name}: Gram entry ({i},{j}) = {g[i][j]} is not an integer")
    if not la.is_positive_definite(g):
        raise ValidationError(f"{name}: Gram matrix is not positive definite")
    gi = tuple(tuple(int(x) for x in row) for row in g)
    b = tuple(tuple(Fraction(x) for x in row) for row in basis) if basis is not None else None
    lat = Lattice(name, gi, b)
    if check_symmetry and b is not None and len(b) == len(b[0]):
        lat = Lattice(name, gi, b, signed_symmetry=_has_signed_symmetry(lat))
    return lat


def _has_signed_symmetry(lat: Lattice) -> bool:
    """Invariance under a transposition, an n-cycle and a double sign change."""
    n = lat.dim
    if n < 2:
        maps = [lambda v: tuple(-x for x in v)]
    else:
        maps = [
            lambda v: (v[1], v[0]) + tuple(v[2:]),
            lambda v: tuple(v[1:]) + (v[0],),
            lambda v: (-v[0], -v[1]) + tuple(v[2:]),
        ]
    return all(lat.contains(f(row)) for f in maps for row in lat.basis)


def from_basis(name: str, rows: Sequence[Sequence], check_symmetry: bool = True) -> Lattice:
    rows = [[Fraction(x) for x in r] for r in rows]
    if la.rank_rational(rows) != len(rows):
        raise ValidationError(f"{name}: basis rows are linearly dependent")
    return _validated(name, la.gram(rows), rows, check_symmetry)


def from_generators(name: str, gens: Sequence[Sequence], check_symmetry: bool = True) -> Lattice:
    return from_basis(name, la.lattice_basis(gens), check_symmetry)


def from_gram(matrix: Sequence[Sequence], name: str = "gram") -> Lattice:
    return _validated(name, matrix)


def zn(n: int) -> Lattice:
    if n < 1:
        raise DomainError("Z^n needs n >= 1")
    return from_basis(f"Z{n}", [[int(i == j) for j in range(n)] for i in range(n)])


def _dn_generators(n: int) -> list[list[int]]:
    gens = [[2 * int(j == 0) for j in range(n)]]
    for i in range(n - 1):
        gens.append([int(j == i) - int(j == i + 1) for j in range(n)])
        gens.append([int(j == i) + int(j == i + 1) for j in range(n)])
    return gens


def dn(n: int) -> Lattice:
    if n < 1:
        raise DomainError("D_n needs n >= 1")
    return from_generators(f"D{n}", _dn_generators(n))


def an(n: int) -> Lattice:
    if n < 1:
        raise DomainError("A_n needs n >= 1")
    rows = [[int(j == i) - int(j == i + 1) for j in range(n + 1)] for i in range(n)]
    return from_basis(f"A{n}", rows, check_symmetry=False)


_H = Fraction(1, 2)
_E8_SIMPLE = [
    [_H, -_H, -_H, -_H, -_H, -_H, -_H, _H],
    [1, 1, 0, 0, 0, 0, 0, 0],
    [-1, 1, 0, 0, 0, 0, 0, 0],
    [0, -1, 1, 0, 0, 0, 0, 0],
    [0, 0, -1, 1, 0, 0, 0, 0],
    [0, 0, 0, -1, 1, 0, 0, 0],
    [0, 0, 0, 0, -1, 1, 0, 0],
    [0, 0, 0, 0, 0, -1, 1, 0],
]


def e_lattice(n: int) -> Lattice:
    """E6, E7 or E8 spanned by the first ``n`` standard simple roots in R^8."""
    if n not in (6, 7, 8):
        raise DomainError("E_n is defined here for n in {6, 7, 8}")
    return from_basis(f"E{n}", _E8_SIMPLE[:n], check_symmetry=False)


def witt(n: int) -> Lattice:
    """D_n together with the glue vector (1/2, ..., 1/2); n must be a multiple of 4."""
    if n < 4 or n % 4:
        raise DomainError(f"Witt lattice needs n a positive multiple of 4, got {n}")
    gens = _dn_generators(n) + [[_H] * n]
    return from_generators(f"W{n}", gens)


def construction_a(code: BinaryCode) -> Lattice:
    """Preimage of the code under reduction mod 2 (unscaled)."""
    n = code.length
    gens = [list(g) for g in code.generators] + [[2 * int(i == j) for j in range(n)] for i in range(n)]
    return from_generators(f"A({code.name})", gens)


def direct_sum(parts: Sequence[Lattice], name: str | None = None) -> Lattice:
    if not parts:
        raise DomainError("empty direct sum")
    label = name or "+".join(p.name for p in parts)
    if all(p.basis is not None for p in parts):
        dims = [p.dim for p in parts]
        rows = []
        off = 0
        for p, d in zip(parts, dims):
            for r in p.basis:
                rows.append([Fraction(0)] * off + list(r) + [Fraction(0)] * (sum(dims) - off - d))
            off += d
        return replace(from_basis(label, rows, check_symmetry=False), summands=tuple(parts))
    n = sum(p.rank for p in parts)
    g = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                g[off + i][off + j] = p.gram[i][j]
        off += p.rank
    return replace(from_gram(g, label), summands=tuple(parts))


# ----------------------------------------------------------------------
# textual descriptions, e.g. "Z:4", "Witt:12+Witt:12", "CA:even:4"

def parse_gram_text(text: str) -> list[list[int]]:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    try:
        return [[int(x) for x in r] for r in rows]
    except ValueError as exc:
        raise ParseError(f"Gram text must be whitespace-separated integers: {exc}") from None


def build(spec: str) -> Lattice:
    """Build a lattice from a short textual description.

    Grammar: summands joined by ``+``; each summand is one of ``Z:n``,
    ``D:n``, ``A:n``, ``E6``/``E7``/``E8``, ``Witt:n``, ``CA:even:n``,
    ``CA:hamming7``, ``CA:<row>,<row>,...`` (rows of 0/1 digits) or
    ``gram:<path>``.
    """
    parts = [s.strip() for s in spec.split("+") if s.strip()]
    if not parts:
        raise ParseError("empty lattice description")
    built = [_build_one(p) for p in parts]
    return built[0] if len(built) == 1 else direct_sum(built, name=spec.replace(" ", ""))


def _build_one(spec: str) -> Lattice:
    m = re.fullmatch(r"(Z|D|A|Witt|W):(\d+)", spec)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return {"Z": zn, "D": dn, "A": an, "Witt": witt, "W": witt}[kind](n)
    if spec in ("E6", "E7", "E8"):
        return e_lattice(int(spec[1]))
    if spec.startswith("CA:"):
        arg = spec[3:]
        if arg == "hamming7":
            return construction_a(BinaryCode.hamming7())
        m = re.fullmatch(r"even:(\d+)", arg)
        if m:
            return construction_a(BinaryCode.even_weight(int(m.group(1))))
        rows = arg.split(",")
        if rows and all(re.fullmatch(r"[01]+", r) for r in rows) and len({len(r) for r in rows}) == 1:
            return construction_a(BinaryCode.from_strings(rows))
        raise ParseError(f"bad code description {arg!r}")
    if spec.startswith("gram:"):
        path = spec[5:]
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise DataError(f"cannot read Gram file {path!r}: {exc}") from None
        return from_gram(parse_gram_text(text), name=path)
    raise ParseError(f"unknown lattice description {spec!r}")


# ----------------------------------------------------------------------
# shadows

@dataclass(frozen=True)
class ShadowCoset:
    """The shadow ``shift + L`` of a selfdual lattice ``L``.

    ``shift`` is half a characteristic vector, given both in basis
    coordinates and in reporting coordinates.  For even ``L`` the shift
    is zero and the shadow is ``L`` itself.
    """

    lattice: Lattice
    shift_coords: tuple[Fraction, ...]
    shift: tuple[Fraction, ...]

    @property
    def trivial(self) -> bool:
        return not any(self.shift_coords)

    def norm_residue(self) -> Fraction:
        """Shadow norms are congruent to n/4 modulo 2."""
        return Fraction(self.lattice.rank, 4) % 2


def characteristic_coords(lat: Lattice) -> list[int]:
    """Basis coordinates u of a characteristic vector: G u = diag(G) mod 2."""
    g = lat.gram
    u = la.solve_mod2(g, [g[i][i] for i in range(lat.rank)])
    if u is None:
        raise DomainError(f"{lat.name}: no characteristic vector mod 2")
    return u


def shadow_coset(lat: Lattice) -> ShadowCoset:
    if not lat.selfdual:
        raise DomainError(f"{lat.name} is not selfdual (det {lat.det}); shadows need det 1")
    u = characteristic_coords(lat)
    coords = tuple(Fraction(x, 2) for x in u)
    return ShadowCoset(lat, coords, lat.to_ambient(coords))


# ----------------------------------------------------------------------
# invariants

@dataclass(frozen=True)
class Invariants:
    selfdual: bool
    parity: str
    det: int
    sigma: int | None
    min_norm: int
    p: int
    root_system: str

    def to_json_obj(self) -> dict:
        return {
            "selfdual": self.selfdual, "parity": self.parity, "det": self.det,
            "sigma": self.sigma, "min_norm": self.min_norm, "p": self.p,
            "root_system": self.root_system,
        }


def min_norm(lat: Lattice) -> int:
    from .shells import shell_count
    if "min_norm" not in lat._cache:
        m = 1
        while shell_count(lat, m) == 0:
            m += 1
        lat._cache["min_norm"] = m
    return lat._cache["min_norm"]


def min_shadow_norm(lat: Lattice) -> Fraction:
    from .shells import shell_count
    if "min_shadow" not in lat._cache:
        sh = shadow_coset(lat)
        m = sh.norm_residue()
        while True:
            if m == 0:
                if sh.trivial:
                    break
            elif shell_count(lat, m, sh.shift_coords) > 0:
                break
            m += 2
        lat._cache["min_shadow"] = m
    return lat._cache["min_shadow"]


def sigma(lat: Lattice) -> int:
    """Four times the minimal shadow norm."""
    return int(4 * min_shadow_norm(lat))


def root_system_of(lat: Lattice) -> str:
    """Root system of the norm-2 vectors orthogonal to all norm-1 vectors."""
    from .rootsys import identify_shell_roots
    from .shells import enumerate_shell
    ones = enumerate_shell(lat, 1)
    p = len(ones) // 2
    return identify_shell_roots(enumerate_shell(lat, 2), lat.rank - p, ones.ints).label


def invariants(lat: Lattice) -> Invariants:
    from .shells import shell_count
    sd = lat.selfdual
    return Invariants(
        selfdual=sd,
        parity=lat.parity,
        det=lat.det,
        sigma=sigma(lat) if sd else None,
        min_norm=min_norm(lat),
        p=shell_count(lat, 1) // 2,
        root_system=root_system_of(lat),
    )
