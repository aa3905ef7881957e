from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from thetadesigns.errors import DomainError, ResourceLimitError
from thetadesigns.lattice import build, shadow_coset
from thetadesigns.modforms import TH2, TH3, TH4, expand_to, shadow
from thetadesigns.shells import (enumerate_shadow_shell, enumerate_shell, ip_distribution,
                                 ip_distribution_by_orbits, ip_distribution_naive, per_point_profile)
from thetadesigns.symmetric import lattice_model


def witt_theta(n: int):
    return Fraction(1, 2) * (TH2 ** n + TH3 ** n + TH4 ** n)


@pytest.mark.parametrize("n", range(1, 9))
def test_zn_counts_match_theta(n):
    lat = build(f"Z:{n}")
    theta = expand_to(TH3 ** n, 20)
    assert [len(enumerate_shell(lat, m)) for m in range(1, 21)] == [theta.at(m) for m in range(1, 21)]


@pytest.mark.parametrize("n, top", [(8, 8), (12, 7), (16, 4)])
def test_witt_counts_match_theta(n, top):
    lat = build(f"Witt:{n}")
    theta = expand_to(witt_theta(n), top)
    assert [len(enumerate_shell(lat, m)) for m in range(1, top + 1)] == [theta.at(m) for m in range(1, top + 1)]


@pytest.mark.parametrize("n", [3, 5, 7])
def test_zn_shadow_counts_match_shadow_theta(n):
    lat = build(f"Z:{n}")
    theta = expand_to(shadow(TH3 ** n), 20)
    m = Fraction(n, 4)
    while m <= 20:
        assert len(enumerate_shadow_shell(lat, m)) == theta.at(m)
        m += 2
    # nothing off the residue grid
    assert all((4 * Fraction(e, 8) - n) % 8 == 0 for e, _ in theta.terms())


def test_witt12_shadow_counts():
    lat = build("Witt:12")
    theta = expand_to(shadow(witt_theta(12)), 7)
    assert [len(enumerate_shadow_shell(lat, m)) for m in (1, 3, 5, 7)] == [theta.at(m) for m in (1, 3, 5, 7)]


@pytest.mark.parametrize("spec, m", [("Z:4", 3), ("Witt:12", 4), ("E8", 4), ("Z:1+E8", 2)])
def test_shells_are_antipodal_exact_and_sorted(spec, m):
    shell = enumerate_shell(build(spec), m)
    rows = shell.ints
    assert {tuple(r) for r in rows.tolist()} == {tuple(-x for x in r) for r in rows.tolist()}
    assert np.all(np.einsum("ij,ij->i", rows, rows) == m * shell.den ** 2)
    assert rows.tolist() == sorted(rows.tolist())


def test_ceiling_is_enforced():
    with pytest.raises(ResourceLimitError):
        enumerate_shell(build("Z:8"), 4, ceiling=100)
    with pytest.raises(ResourceLimitError):
        enumerate_shell(build("Z:8"), 4, predicted=10 ** 9)


def test_nonpositive_norm_is_rejected():
    with pytest.raises(DomainError):
        enumerate_shell(build("Z:3"), 0)


def test_tsv_export_round_trips():
    shell = enumerate_shadow_shell(build("Z:3"), Fraction(3, 4))
    lines = shell.to_tsv().splitlines()
    assert len(lines) == 8
    back = {tuple(Fraction(x) for x in line.split("\t")) for line in lines}
    assert back == set(shell.vectors_exact())


@pytest.mark.parametrize("spec, m", [("Z:3", 3), ("Z:4", 2), ("E8", 2), ("Witt:12", 2)])
def test_distribution_matches_double_loop(spec, m):
    shell = enumerate_shell(build(spec), m)
    fast = ip_distribution(shell)
    slow = ip_distribution_naive(shell.vectors_exact())
    assert fast == slow and fast.total == len(shell) ** 2 and fast.symmetric()


def test_profile_of_e8_roots():
    shell = enumerate_shell(build("E8"), 2)
    assert per_point_profile(shell) == {-2: 1, -1: 56, 0: 126, 1: 56, 2: 1}


def _signed_perm_key(row):
    return tuple(sorted(abs(x) for x in row))


@pytest.mark.parametrize("spec, m", [("Z:5", 6), ("Z:7", 12)])
def test_orbit_distribution_matches_direct(spec, m):
    # rows of a Z^n shell with equal sorted absolute values lie in one orbit
    shell = enumerate_shell(build(spec), m)
    assert ip_distribution_by_orbits(shell, _signed_perm_key) == ip_distribution(shell)


@pytest.mark.parametrize("spec, shadow_side, m", [("Z:6", False, 5), ("Z:5", True, Fraction(21, 4)),
                                                  ("Witt:12", False, 4), ("Witt:12", True, 3),
                                                  ("Witt:12+Witt:12", False, 2)])
def test_orbit_model_matches_enumeration(spec, shadow_side, m):
    lat = build(spec)
    model = lattice_model(lat, shadow_side)
    shift = shadow_coset(lat).shift_coords if shadow_side else None
    shell = enumerate_shell(lat, m, shift)
    assert model.size(m) == len(shell)
    assert model.distribution(m) == ip_distribution(shell).counts


@given(st.integers(1, 6), st.integers(1, 12))
def test_shell_size_matches_theta_property(n, m):
    assert len(enumerate_shell(build(f"Z:{n}"), m)) == expand_to(TH3 ** n, m).at(m)
