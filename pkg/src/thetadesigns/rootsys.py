"""Norm-2 root systems: catalog, strong eutaxy and the degree conditions.

A strongly eutactic root system of rank n has all irreducible components
of one Coxeter number h, and then |R| = n h.  For such a system the
condition that R is a spherical design up to degree 2j reduces to the
vanishing of

    2 Q(1) + (4h - 8) Q(1/2) + (nh - 4h + 6) Q(0),   Q = Q^(2j) on R^n,

which :func:`condition_value` evaluates exactly.  The factored
polynomials in ``DISPLAYED_CONDITIONS`` are kept as independent data and
are only used to cross-check that expression.
"""

from __future__ import annotations

import ast
import json
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Iterable, Sequence

from . import _linalg as la
from .designs import gegenbauer_explicit
from .errors import DataError, DomainError, ParseError

CATALOG_ENV = "THETADESIGNS_CATALOG"
FAMILY_ORDER = {"A": 0, "D": 1, "E": 2, "O": 3}


@dataclass(frozen=True, order=True)
class IrreducibleComponent:
    """One of A_r (r >= 1), D_r (r >= 4), E6, E7, E8, or the empty system O_r."""

    family: str
    rank: int

    def __post_init__(self):
        ok = {
            "A": self.rank >= 1,
            "D": self.rank >= 4,
            "E": self.rank in (6, 7, 8),
            "O": self.rank >= 0,
        }.get(self.family, False)
        if not ok:
            raise DomainError(f"no irreducible root system {self.family}{self.rank}")

    @property
    def coxeter(self) -> int:
        if self.family == "A":
            return self.rank + 1
        if self.family == "D":
            return 2 * (self.rank - 1)
        if self.family == "E":
            return {6: 12, 7: 18, 8: 30}[self.rank]
        return 0

    @property
    def size(self) -> int:
        return self.rank * self.coxeter

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def _sort_key(c: IrreducibleComponent):
    return (FAMILY_ORDER[c.family], -c.rank)


@dataclass(frozen=True)
class RootSystem:
    """A multiset of components; O parts only record extra ambient rank."""

    components: tuple[IrreducibleComponent, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(self.components, key=_sort_key)))

    @property
    def roots(self) -> tuple[IrreducibleComponent, ...]:
        return tuple(c for c in self.components if c.family != "O")

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def size(self) -> int:
        return sum(c.size for c in self.components)

    @property
    def coxeter_numbers(self) -> tuple[int, ...]:
        return tuple(sorted({c.coxeter for c in self.roots}))

    @property
    def strongly_eutactic(self) -> bool:
        hs = self.coxeter_numbers
        if not hs:
            return True
        # an O part adds rank without roots, which breaks |R| = n h
        return len(hs) == 1 and all(c.family != "O" or c.rank == 0 for c in self.components)

    @property
    def h(self) -> int | None:
        if not self.strongly_eutactic:
            return None
        hs = self.coxeter_numbers
        return hs[0] if hs else 0

    @property
    def label(self) -> str:
        if not self.roots:
            return f"O{self.rank}"
        counts = Counter(self.roots)
        parts = []
        for comp in sorted(counts, key=_sort_key):
            k = counts[comp]
            parts.append(f"{k if k > 1 else ''}{comp}")
        extra = self.rank - sum(c.rank for c in self.roots)
        if extra:
            parts.append(f"O{extra}")
        return "+".join(parts)

    def __str__(self) -> str:
        return self.label


_PART = re.compile(r"^(\d*)([ADEO])(\d+)$")


def parse_root_system(text: str) -> RootSystem:
    """Parse labels like ``"4A5+D4"``, ``"O24"`` or ``"A11 + D7 + E6"``."""
    comps: list[IrreducibleComponent] = []
    for raw in text.replace(" ", "").replace("_", "").split("+"):
        mt = _PART.match(raw)
        if not mt:
            raise ParseError(f"cannot parse root-system part {raw!r}")
        mult = int(mt.group(1)) if mt.group(1) else 1
        comp = IrreducibleComponent(mt.group(2), int(mt.group(3)))
        if comp.family == "O":
            comps.append(IrreducibleComponent("O", comp.rank * mult))
        else:
            comps.extend([comp] * mult)
    return RootSystem(tuple(comps))


@dataclass(frozen=True)
class CoxeterProfile:
    strongly_eutactic: bool
    h: int | None
    component_h: tuple[int, ...]

    def to_json_obj(self) -> dict:
        return {"strongly_eutactic": self.strongly_eutactic, "h": self.h,
                "component_h": list(self.component_h)}


def coxeter_profile(r: RootSystem | str) -> CoxeterProfile:
    if isinstance(r, str):
        r = parse_root_system(r)
    return CoxeterProfile(r.strongly_eutactic, r.h, tuple(c.coxeter for c in r.roots))


# ----------------------------------------------------------------------
# the degree conditions

def condition_value(n: int, h: int, degree: int) -> Fraction:
    """Kernel expression whose vanishing is condition (C_degree) for parameters (n, h)."""
    if n < 1 or h < 0 or degree < 2 or degree % 2:
        raise DomainError("need n >= 1, h >= 0 and an even degree >= 2")
    q = gegenbauer_explicit(n, degree)
    return 2 * q(1) + (4 * h - 8) * q(Fraction(1, 2)) + (n * h - 4 * h + 6) * q(0)


# The factored forms of the conditions for degrees 2..12, as printed.
DISPLAYED_CONDITIONS: dict[int, str] = {
    2: "0",
    4: "n*(n+4)*(n+6)*((n-10)*h+6*(n+2))",
    6: "n*(n+2)*(n+6)*(n+10)*((n**2-48*n+272)*h+30*(n-4)*(n+4))",
    8: "n*(n+2)*(n+4)*(n+8)*(n+14)*((n-4)*(n-30)*(n-50)*h+42*(n+6)*(3*n**2-14*n+40))",
    10: "(n-2)*n*(n+2)*(n+4)*(n+6)*(n+10)*(n+18)"
        "*((n-24)*(n-28)*(n-76)*h+30*(n+8)*(17*n**2-8*n+336))",
    12: "n*(n+2)*(n+4)*(n+6)*(n+8)*(n+12)*(n+22)"
        "*((n**5-186*n**4+10852*n**3-228504*n**2+1659232*n-967680)*h"
        "+66*n*(n-2)*(n+10)*(31*n**2+130*n+1144))",
}


def _compile_polynomial(text: str) -> Callable[[int, int], int]:
    """Integer polynomial in n and h from a restricted arithmetic expression."""
    tree = ast.parse(text, mode="eval")
    allowed = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult, ast.Pow,
               ast.USub, ast.Constant, ast.Name, ast.Load)
    for node in ast.walk(tree):
        if not isinstance(node, allowed):
            raise ParseError(f"unsupported syntax {type(node).__name__} in {text!r}")
        if isinstance(node, ast.Name) and node.id not in ("n", "h"):
            raise ParseError(f"unknown variable {node.id!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise ParseError("only integer constants are allowed")
    code = compile(tree, "<condition>", "eval")
    return lambda n, h: eval(code, {"__builtins__": {}}, {"n": n, "h": h})


@lru_cache(maxsize=None)
def displayed_condition(degree: int) -> Callable[[int, int], int]:
    if degree not in DISPLAYED_CONDITIONS:
        raise DomainError(f"no displayed condition for degree {degree}")
    return _compile_polynomial(DISPLAYED_CONDITIONS[degree])


# ----------------------------------------------------------------------
# classification

def systems_with(n: int, h: int) -> list[RootSystem]:
    """Every strongly eutactic root system of rank n and Coxeter number h > 0."""
    if h <= 0:
        return []
    pool: list[IrreducibleComponent] = []
    if h - 1 >= 1:
        pool.append(IrreducibleComponent("A", h - 1))
    if h % 2 == 0 and h // 2 + 1 >= 4:
        pool.append(IrreducibleComponent("D", h // 2 + 1))
    for r, hh in ((6, 12), (7, 18), (8, 30)):
        if hh == h:
            pool.append(IrreducibleComponent("E", r))
    out: list[RootSystem] = []

    def rec(i: int, left: int, chosen: list[IrreducibleComponent]) -> None:
        if left == 0:
            out.append(RootSystem(tuple(chosen)))
            return
        if i == len(pool):
            return
        c = pool[i]
        for k in range(left // c.rank, -1, -1):
            rec(i + 1, left - k * c.rank, chosen + [c] * k)

    rec(0, n, [])
    return sorted(out, key=lambda r: r.label)


@dataclass(frozen=True)
class Classification:
    degree: int
    n_max: int
    solutions: tuple[tuple[int, int, tuple[str, ...]], ...]

    @property
    def systems(self) -> list[str]:
        return [s for _, _, systems in self.solutions for s in systems]

    def to_json_obj(self) -> dict:
        return {
            "degree": self.degree, "n_max": self.n_max,
            "solutions": [{"n": n, "h": h, "systems": list(s)} for n, h, s in self.solutions],
        }

    def to_text(self) -> str:
        lines = [f"(C{self.degree})  n <= {self.n_max}", f"{'n':>4} {'h':>6}  systems"]
        for n, h, s in self.solutions:
            lines.append(f"{n:>4} {h:>6}  {', '.join(s) if s else '-'}")
        return "\n".join(lines) + "\n"


def classify(degree: int, n_max: int = 100) -> Classification:
    """All positive integral (n, h) with condition_value = 0, with their systems."""
    if degree < 4 or degree % 2:
        raise DomainError("classification needs an even degree >= 4")
    found = []
    for n in range(1, n_max + 1):
        # the expression is affine in h
        a = condition_value(n, 0, degree)
        b = condition_value(n, 1, degree) - a
        if b == 0:
            if a == 0:
                # every h solves the condition; keep those carried by some system
                for h in range(1, 2 * n + 31):
                    systems = systems_with(n, h)
                    if systems:
                        found.append((n, h, tuple(r.label for r in systems)))
            continue
        h = -a / b
        if h.denominator == 1 and h > 0:
            found.append((n, int(h), tuple(r.label for r in systems_with(n, int(h)))))
    return Classification(degree, n_max, tuple(found))


# ----------------------------------------------------------------------
# identification of enumerated roots

def identify_roots(roots: Sequence[Sequence], inner: Callable, ambient_rank: int | None = None) -> RootSystem:
    """Split roots into orthogonal components and name each by (rank, size)."""
    roots = [tuple(r) for r in roots]
    index = {r: i for i, r in enumerate(roots)}
    if len(index) != len(roots):
        raise DomainError("repeated roots")
    for r in roots:
        if tuple(-x for x in r) not in index:
            raise DomainError("root set is not closed under negation")
        if inner(r, r) != 2:
            raise DomainError("roots must have norm 2")
    seen = [False] * len(roots)
    comps: list[IrreducibleComponent] = []
    for start in range(len(roots)):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            i = stack.pop()
            members.append(roots[i])
            for j in range(len(roots)):
                if not seen[j] and inner(roots[i], roots[j]) != 0:
                    seen[j] = True
                    stack.append(j)
        rank = la.rank_rational(members)
        comps.append(_name_component(rank, len(members)))
    total = sum(c.rank for c in comps)
    if ambient_rank is not None and ambient_rank > total:
        comps.append(IrreducibleComponent("O", ambient_rank - total))
    return RootSystem(tuple(comps))


def identify_shell_roots(shell, ambient_rank: int | None = None, exclude=None) -> RootSystem:
    """:func:`identify_roots` for a norm-2 :class:`~thetadesigns.shells.Shell`, vectorised.

    ``exclude`` is an optional integer row block (same scaling); roots not
    orthogonal to all of its rows are dropped first.
    """
    import numpy as np

    if shell.norm != 2:
        raise DomainError("roots must have norm 2")
    rows = shell.ints
    if exclude is not None and len(exclude) and len(rows):
        keep = ~np.any(shell.inner_ints(rows, exclude) != 0, axis=1)
        rows = rows[keep]
    comps: list[IrreducibleComponent] = []
    if len(rows):
        adj = shell.inner_ints(rows, rows) != 0
        seen = np.zeros(len(rows), dtype=bool)
        for start in range(len(rows)):
            if seen[start]:
                continue
            member = np.zeros(len(rows), dtype=bool)
            member[start] = True
            frontier = member.copy()
            while frontier.any():
                reach = adj[frontier].any(axis=0) & ~member
                member |= reach
                frontier = reach
            seen |= member
            block = rows[member]
            rank = la.rank_rational(block.tolist())
            comps.append(_name_component(rank, int(member.sum())))
    total = sum(c.rank for c in comps)
    if ambient_rank is not None and ambient_rank > total:
        comps.append(IrreducibleComponent("O", ambient_rank - total))
    return RootSystem(tuple(comps))


def _name_component(rank: int, size: int) -> IrreducibleComponent:
    candidates = [IrreducibleComponent("A", rank)]
    if rank >= 4:
        candidates.append(IrreducibleComponent("D", rank))
    if rank in (6, 7, 8):
        candidates.append(IrreducibleComponent("E", rank))
    for c in candidates:
        if c.size == size:
            return c
    raise AssertionError(f"no irreducible root system of rank {rank} with {size} roots")


# ----------------------------------------------------------------------
# catalog data

def load_catalog(path: str | None = None) -> dict:
    """Catalog of named systems; ``$THETADESIGNS_CATALOG`` overrides the packaged file."""
    path = path or os.environ.get(CATALOG_ENV)
    try:
        if path:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        else:
            data = json.loads(resources.files("thetadesigns").joinpath("data/catalog.json").read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read catalog: {exc}") from exc
    for key in ("niemeier", "long_shadow", "odd24_pairs"):
        if key not in data:
            raise DataError(f"catalog lacks section {key!r}")
    return data


def catalog_systems(catalog: dict | None = None) -> list[RootSystem]:
    """Named strongly eutactic systems from the catalog plus the irreducible ones up to rank 24."""
    catalog = catalog or load_catalog()
    seen: dict[str, RootSystem] = {}
    for rec in catalog["niemeier"] + catalog["long_shadow"]:
        r = parse_root_system(rec["roots"])
        seen[r.label] = r
    for pair in catalog["odd24_pairs"]:
        for key in ("R", "S"):
            r = parse_root_system(pair[key])
            seen[r.label] = r
    for r in range(1, 25):
        for fam in "ADE":
            try:
                c = IrreducibleComponent(fam, r)
            except DomainError:
                continue
            seen.setdefault(str(c), RootSystem((c,)))
    return sorted(seen.values(), key=lambda s: (s.rank, s.label))


def catalog_inclusions(catalog: dict | None = None) -> set[tuple[str, str]]:
    catalog = catalog or load_catalog()
    out = set()
    for pair in catalog["odd24_pairs"]:
        out.add((parse_root_system(pair["R"]).label, parse_root_system(pair["S"]).label))
    return out


# ----------------------------------------------------------------------
# rank-24 triples

@dataclass(frozen=True)
class TripleReport:
    valid: bool
    h_r: Fraction
    h_s: int
    h_t: int
    residual: Fraction
    shadow_count: Fraction
    shadow_count_expected: Fraction
    diagnostics: tuple[str, ...] = field(default=())

    def to_json_obj(self) -> dict:
        return {
            "valid": self.valid, "h_R": str(self.h_r), "h_S": self.h_s, "h_T": self.h_t,
            "residual": str(self.residual), "shadow_count": str(self.shadow_count),
            "shadow_count_expected": str(self.shadow_count_expected),
            "diagnostics": list(self.diagnostics),
        }


def validate_triple(r: RootSystem | str, s: RootSystem | str, t: RootSystem | str,
                    vectors: dict | None = None, catalog: dict | None = None) -> TripleReport:
    """Check ``h_S + h_T = 3 h_R + 2`` and the norm-2 shadow count for a rank-24 triple.

    ``vectors`` may carry ``{"s": s, "R": [...], "T": [...], "inner": f}`` with
    ``s`` in S minus R; the mutual inner-product counts are then compared
    with their predicted values and any mismatch is listed in diagnostics.
    """
    r, s, t = (parse_root_system(x) if isinstance(x, str) else x for x in (r, s, t))
    for name, x in (("S", s), ("T", t)):
        if not x.strongly_eutactic:
            raise DomainError(f"{name} = {x.label} is not strongly eutactic")
    inclusions = catalog_inclusions(catalog)
    for name, x in (("S", s), ("T", t)):
        if x.label != r.label and (r.label, x.label) not in inclusions:
            raise DataError(f"inclusion {r.label} in {x.label} ({name}) is not in the catalog")
    n = 24
    h_r = Fraction(r.size, n)
    h_s, h_t = s.h, t.h
    residual = h_s + h_t - (3 * h_r + 2)
    shadow_count = 24 * (h_s + h_t - 2 * h_r)
    # c_2 = (h - 46 + 2N) N with N = 24 is the norm-2 shadow count
    expected = (h_r - 46 + 2 * n) * n
    diags: list[str] = []
    if residual:
        diags.append(f"h_S + h_T - 3 h_R - 2 = {residual}")
    if shadow_count != expected:
        diags.append(f"24(h_S + h_T - 2 h_R) = {shadow_count} but c_2 = {expected}")
    if vectors is not None:
        diags.extend(_check_mutual_counts(vectors, h_r, h_s, h_t))
    return TripleReport(not diags, h_r, h_s, h_t, residual, shadow_count, expected, tuple(diags))


def _check_mutual_counts(vectors: dict, h_r, h_s, h_t) -> list[str]:
    inner = vectors["inner"]
    sv = vectors["s"]
    on_r = Counter(inner(sv, x) for x in vectors["R"])
    on_t = Counter(inner(sv, x) for x in vectors["T"])
    half = Fraction(1, 2)
    checks = [
        ("N_1^{s,R}", on_r[1], h_s - 2),
        ("N_-1^{s,R}", on_r[-1], h_s - 2),
        ("N_1^{s,T}", on_t[1], 3 * h_r - h_t),
        ("N_1/2^{s,T}", on_t[half], 12 * (h_t - h_r)),
        ("N_-1/2^{s,T}", on_t[-half], 12 * (h_t - h_r)),
        ("N_0^{s,R}", on_r[0], 8 * h_t + 6 * h_s - 12),
        ("N_0^{s,T}", on_t[0], 8 * h_t + 6 * h_s - 12),
    ]
    return [f"{name} = {got}, predicted {want}" for name, got, want in checks if got != want]


def n_profile(roots: Sequence[Sequence], inner: Callable, index: int = 0) -> dict:
    """``N_alpha`` for one root: counts of roots with each inner product."""
    x = roots[index]
    return dict(sorted(Counter(inner(x, y) for y in roots).items()))
