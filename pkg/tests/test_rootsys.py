from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thetadesigns.designs import kernel_sum
from thetadesigns.errors import DataError, DomainError
from thetadesigns.lattice import build
from thetadesigns.rootsys import (CATALOG_ENV, catalog_systems, classify, condition_value, coxeter_profile,
                                  displayed_condition, identify_roots, identify_shell_roots, load_catalog,
                                  n_profile, parse_root_system, systems_with, validate_triple)
from thetadesigns.shells import enumerate_shell

# Systems satisfying (C_2j), transcribed from the published classification.
PUBLISHED = {
    4: ["A1", "A2", "D4", "E6", "E7", "E8"],
    6: ["A1", "2A1", "E8", "2E8", "D16"],
    8: ["A1", "A2"],
    10: ["A1", "2A1", "A2", "D4", "E8"],
    12: ["A1"],
}


@pytest.mark.parametrize("degree", sorted(PUBLISHED))
def test_classification(degree):
    assert sorted(classify(degree).systems) == sorted(PUBLISHED[degree])


@pytest.mark.parametrize("degree", [4, 6, 8, 10, 12])
def test_displayed_polynomials_share_the_vanishing_locus(degree):
    shown = displayed_condition(degree)
    for n in range(1, 61):
        for h in range(0, 61):
            assert (condition_value(n, h, degree) == 0) == (shown(n, h) == 0), (n, h)


def test_degree_two_always_holds():
    assert all(condition_value(n, h, 2) == 0 for n in range(1, 30) for h in range(30))


def _spec(system) -> str:
    parts = []
    for c in system.roots:
        parts.append({"A": f"A:{c.rank}", "D": f"D:{c.rank}", "E": f"E{c.rank}"}[c.family])
    return "+".join(parts)


CONSTRUCTIBLE = [r for r in catalog_systems() if r.strongly_eutactic and r.h and r.rank <= 16]


@pytest.mark.parametrize("system", CONSTRUCTIBLE, ids=lambda r: r.label)
def test_kernel_agreement(system):
    roots = enumerate_shell(build(_spec(system)), 2)
    assert len(roots) == system.size
    n, h = system.rank, system.h
    for degree in range(4, 13, 2):
        assert (kernel_sum(roots, degree) == 0) == (condition_value(n, h, degree) == 0)


@pytest.mark.parametrize("spec, label", [("E8", "E8"), ("D:5", "D5"), ("A:3+A:3", "2A3"), ("E7", "E7"),
                                         ("Witt:12", "D12"), ("D:4+A:2", "A2+D4")])
def test_identify_enumerated_roots(spec, label):
    shell = enumerate_shell(build(spec), 2)
    assert identify_shell_roots(shell).label == label
    if len(shell) < 200:
        pts = shell.vectors_exact()
        inner = lambda u, v: sum((a * b for a, b in zip(u, v)), Fraction(0))  # noqa: E731
        assert identify_roots(pts, inner).label == label


@pytest.mark.parametrize("spec", ["A:4", "D:6", "E6", "E8", "A:2+A:2"])
def test_n_profile(spec):
    shell = enumerate_shell(build(spec), 2)
    system = identify_shell_roots(shell)
    pts = shell.vectors_exact()
    inner = lambda u, v: sum((a * b for a, b in zip(u, v)), Fraction(0))  # noqa: E731
    for i in (0, len(pts) // 3):
        prof = n_profile(pts, inner, i)
        assert prof[1] == 2 * system.h - 4 == prof[-1]
        assert prof[0] + 2 * prof[1] + 2 * prof[2] == system.rank * system.h


def test_parse_and_profiles():
    r = parse_root_system("4A5+D4")
    assert (r.rank, r.size, r.label) == (24, 144, "4A5+D4")
    assert coxeter_profile("4A5+D4").strongly_eutactic
    assert not coxeter_profile("A1+A2").strongly_eutactic
    with pytest.raises(DomainError):
        parse_root_system("D3")


@given(st.integers(1, 24), st.integers(1, 40))
def test_systems_with_are_strongly_eutactic(n, h):
    for r in systems_with(n, h):
        assert r.rank == n and r.h == h and r.size == n * h


def test_triples():
    assert validate_triple("O24", "24A1", "O24").valid
    bad = validate_triple("O24", "24A1", "24A1")
    assert not bad.valid and bad.diagnostics
    with pytest.raises(DataError):
        validate_triple("O24", "6D4", "6D4")


def test_catalog_override(tmp_path, monkeypatch):
    data = load_catalog()
    data["niemeier"] = data["niemeier"][:2]
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(data))
    monkeypatch.setenv(CATALOG_ENV, str(path))
    assert len(load_catalog()["niemeier"]) == 2
    path.write_text("{}")
    with pytest.raises(DataError):
        load_catalog()
