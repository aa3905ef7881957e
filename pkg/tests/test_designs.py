from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import example, given, settings, strategies as st

from thetadesigns.designs import (WeightedSet, assemble_verdict, code_orbit_weights, dim_harmonic, gegenbauer,
                                  gegenbauer_closed_form, gegenbauer_explicit, kernel_from_distribution, kernel_sum, orbit_lambda,
                                  orbit_lambda_by_counting, strength)
from thetadesigns.errors import DomainError
from thetadesigns.lattice import BinaryCode, build
from thetadesigns.modforms import DE8, PHI, TH3, expand_to
from thetadesigns.shells import enumerate_shell
from thetadesigns.symmetric import lattice_model


@pytest.mark.parametrize("n", [2, 3, 4, 7, 12, 24])
def test_gegenbauer_routes_agree(n):
    for j in range(5):
        rec, closed = gegenbauer(n, j), gegenbauer_closed_form(n, j)
        for t in (Fraction(-1), Fraction(-1, 3), Fraction(0), Fraction(2, 5), Fraction(1)):
            assert rec(t) == closed(t)
    for j in range(13):
        assert gegenbauer(n, j) == gegenbauer_explicit(n, j)
        assert gegenbauer(n, j)(1) == dim_harmonic(n, j)


def test_dim_harmonic_small_cases():
    assert [dim_harmonic(3, j) for j in range(5)] == [1, 3, 5, 7, 9]
    assert [dim_harmonic(2, j) for j in range(4)] == [1, 2, 2, 2]
    assert dim_harmonic(1, 2) == 0


def test_z4_roots():
    v = strength(enumerate_shell(build("Z:4"), 2), 8)
    assert v.label == "5" and v.exact
    assert [d for d, _ in v.failing] == [6, 8]


def test_e8_roots_are_a_seven_and_a_half_design():
    v = strength(enumerate_shell(build("E8"), 2), 16)
    assert v.label == "7.5" and v.exact


@pytest.mark.parametrize("spec, m", [("Z:3", 5), ("Z:5", 3), ("E8", 4), ("Witt:12", 2), ("Z:2", 25)])
def test_kernel_sums_are_nonnegative(spec, m):
    shell = enumerate_shell(build(spec), m)
    for j in range(1, 13):
        assert kernel_sum(shell, j) >= 0


@given(st.lists(st.integers(1, 5), min_size=6, max_size=6))
def test_weighted_kernel_sums_are_nonnegative(raw):
    shell = enumerate_shell(build("Z:3"), 1)
    total = sum(raw)
    weights = tuple(Fraction(r, total) for r in raw)
    for j in (2, 4, 6):
        assert kernel_sum(WeightedSet(shell, weights), j) >= 0


@pytest.mark.parametrize("spec, m", [("Z:7", 3), ("Z:4", 2), ("E8", 2)])
def test_uniform_weights_change_nothing(spec, m):
    shell = enumerate_shell(build(spec), m)
    uniform = WeightedSet(shell, tuple([Fraction(1, len(shell))] * len(shell)))
    assert strength(uniform, 12) == strength(shell, 12)


def _p4(x):
    return x[0] ** 4 + x[1] ** 4 - 6 * x[0] ** 2 * x[1] ** 2


def _q6(x):
    a, b, c = (v * v for v in x[:3])
    return (a ** 3 + b ** 3 + c ** 3) - 15 * (a * a * b + b * b * c + c * c * a) + 90 * a * b * c


@pytest.mark.parametrize("n", range(3, 9))
def test_moments_against_kernel_sums(n):
    # kernel sums from the orbit model keep the larger shells of Z^8 cheap
    lat = build(f"Z:{n}")
    model = lattice_model(lat)
    for m in range(1, 21):
        pts = enumerate_shell(lat, m).ints.tolist()
        if not pts:
            continue
        dist = model.distribution(m)
        assert (sum(_p4(x) for x in pts) == 0) == (kernel_from_distribution(dist, m, n, 4) == 0)
        assert (sum(_q6(x) for x in pts) == 0) == (kernel_from_distribution(dist, m, n, 6) == 0)


@pytest.mark.parametrize("n", [4, 7])
def test_weighted_theta_witness(n):
    lat = build(f"Z:{n}")
    p_series = expand_to(4 * DE8 * TH3 ** n, 20)
    q_series = expand_to(6 * PHI * DE8 * TH3 ** n, 20)
    for m in range(1, 21):
        pts = enumerate_shell(lat, m).ints.tolist()
        assert sum(_p4(x) for x in pts) == p_series.at(m)
        assert sum(_q6(x) for x in pts) == q_series.at(m)


def test_assemble_verdict_semantics():
    assert assemble_verdict({2: True, 4: False, 6: True}, 6).label == "3.5"
    assert assemble_verdict({2: True, 4: False, 6: False}, 6).label == "3"
    v = assemble_verdict({2: True, 4: True, 6: None}, 8)
    assert v.label == "5" and not v.exact
    v = assemble_verdict({2: True, 4: True}, 4)
    assert v.label == "5" and not v.exact
    calls = []
    assemble_verdict(lambda d: calls.append(d) or d < 4, 16)
    assert calls == [2, 4, 6]


def test_weight_validation():
    shell = enumerate_shell(build("Z:2"), 1)
    with pytest.raises(DomainError):
        WeightedSet(shell, (Fraction(1, 2), Fraction(1, 2), 0, Fraction(1, 2)))
    with pytest.raises(DomainError):
        WeightedSet(shell, (Fraction(1), Fraction(1), Fraction(-1), 0))


# -- the Hamming-code construction on Z^7 --------------------------------------

HAMMING = BinaryCode.hamming7()


def test_hamming_lambda_table():
    table = [orbit_lambda(HAMMING, w) for w in range(8)]
    assert table == [1, 0, 0, Fraction(1, 5), Fraction(1, 5), 0, 0, 1]


@pytest.mark.parametrize("m", [3, 4, 7])
def test_lambda_closed_form_against_orbit_counting(m):
    shell = enumerate_shell(build("Z:7"), m)
    seen = set()
    for row in shell.ints.tolist():
        key = tuple(sorted(abs(x) for x in row))
        if key in seen:
            continue
        seen.add(key)
        w = sum(1 for x in row if x % 2)
        assert orbit_lambda_by_counting(HAMMING, row) == orbit_lambda(HAMMING, w)


@pytest.mark.parametrize("m", [7, 8, 12, 15])
def test_hamming_weights_give_five_designs(m):
    weighted = code_orbit_weights(HAMMING, enumerate_shell(build("Z:7"), m))
    assert all(kernel_sum(weighted, j) == 0 for j in range(1, 6))


@pytest.mark.parametrize("m", [3, 11, 12])
def test_unweighted_five_designs(m):
    assert strength(enumerate_shell(build("Z:7"), m), 8).label == "5"


@settings(max_examples=6)
@example(Fraction(0))
@example(Fraction(1))
@given(st.fractions(min_value=0, max_value=1, max_denominator=50))
def test_convex_combinations_stay_designs(lam):
    shell = enumerate_shell(build("Z:7"), 12)
    coded = code_orbit_weights(HAMMING, shell).weights
    uniform = [Fraction(1, len(shell))] * len(shell)
    mixed = WeightedSet(shell, tuple(lam * a + (1 - lam) * b for a, b in zip(coded, uniform)))
    assert kernel_sum(mixed, 2) == 0 and kernel_sum(mixed, 4) == 0


def test_signed_permutation_count():
    # the group behind orbit_lambda_by_counting has 7! 2^7 elements
    assert sum(1 for _ in itertools.permutations(range(7))) * 2 ** 7 == 645120
