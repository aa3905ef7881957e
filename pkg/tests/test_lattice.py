from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thetadesigns.errors import DomainError, ValidationError
from thetadesigns.lattice import (BinaryCode, build, construction_a, from_gram, invariants, min_shadow_norm,
                                  shadow_coset, sigma, witt)
from thetadesigns.shells import enumerate_shadow_shell


@pytest.mark.parametrize("spec", [f"Z:{n}" for n in range(1, 9)] + [f"Witt:{n}" for n in (8, 12, 16, 20, 24)]
                         + ["E8", "Witt:12+Witt:12", "Z:1+E8"])
def test_selfdual_members_are_unimodular(spec):
    lat = build(spec)
    assert lat.det == 1 and lat.selfdual


@pytest.mark.parametrize("n", [4, 8, 12, 16, 20, 24, 28, 32])
def test_witt_parity(n):
    assert witt(n).is_even == (n % 8 == 0)


@pytest.mark.parametrize("spec, k", [("CA:even:4", 3), ("CA:even:6", 5), ("CA:hamming7", 4),
                                     ("CA:1100,0011", 2)])
def test_construction_a_index(spec, k):
    lat = build(spec)
    n = lat.rank
    # |Z^n / L| = 2^(n-k), so det of the Gram matrix is its square
    assert lat.det == 4 ** (n - k)


def test_code_weight_enumerators():
    assert BinaryCode.hamming7().weight_enumerator == {0: 1, 3: 7, 4: 7, 7: 1}
    assert BinaryCode.even_weight(4).weight_enumerator == {0: 1, 2: 6, 4: 1}


@pytest.mark.parametrize("n", range(1, 9))
def test_sigma_of_zn(n):
    assert sigma(build(f"Z:{n}")) == n


@pytest.mark.parametrize("spec, n", [("Witt:12", 12), ("Z:1+E8", 9), ("Witt:12+Witt:12", 24)])
def test_sigma_of_long_shadow_members(spec, n):
    # Witt(12)^2 has shadow length 8, one step shorter than long
    expect = {"Witt:12": 4, "Z:1+E8": 1, "Witt:12+Witt:12": 8}[spec]
    assert sigma(build(spec)) == expect
    if spec != "Witt:12+Witt:12":
        assert expect == n - 8


@pytest.mark.parametrize("spec", ["Z:3", "Z:5", "Witt:12", "Witt:12+Witt:12", "Z:1+E8"])
def test_shadow_norm_residue(spec):
    lat = build(spec)
    n = lat.rank
    m = min_shadow_norm(lat)
    for k in range(3 if n < 20 else 1):  # the rank-24 shadow grows past 10^6 by norm 6
        shell = enumerate_shadow_shell(lat, m + 2 * k)
        d2 = shell.den * shell.den
        norms = {Fraction(int(v), d2) for v in (shell.ints * shell.ints).sum(axis=1)}
        assert norms == {m + 2 * k}
        assert all((4 * x - n) % 8 == 0 for x in norms)


def test_even_shadow_is_the_lattice():
    sh = shadow_coset(build("E8"))
    assert sh.trivial


def test_invariants_of_witt12():
    inv = invariants(build("Witt:12"))
    assert (inv.min_norm, inv.p, inv.root_system, inv.sigma) == (2, 0, "D12", 4)


def test_shadow_requires_selfdual():
    with pytest.raises(DomainError):
        shadow_coset(build("D:4"))


@pytest.mark.parametrize("spec", ["Z:0", "Witt:6", "Q:3", "CA:012", "", "E9"])
def test_bad_specs(spec):
    with pytest.raises(DomainError):
        build(spec)


def test_gram_validation():
    with pytest.raises(ValidationError):
        from_gram([[1, 2], [2, 1]])  # indefinite
    with pytest.raises(ValidationError):
        from_gram([[2, 1], [0, 2]])  # not symmetric


@given(st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5), min_size=1, max_size=4))
def test_construction_a_det_property(rows):
    code = BinaryCode(5, tuple(tuple(r) for r in rows))
    lat = construction_a(code)
    assert lat.det == 4 ** (5 - code.dimension)
