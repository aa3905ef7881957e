from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thetadesigns.errors import CutoffError
from thetadesigns.qseries import QSeries, naive_mul, power, qsum, to_eighths, from_eighths

CUT = 96  # twelve integer q-steps


def series(cutoff: int = CUT):
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=6)
    return st.dictionaries(st.integers(0, cutoff), coeff, max_size=12).map(
        lambda d: QSeries.from_terms(d, cutoff))


def test_eighths_round_trip():
    assert to_eighths(Fraction(7, 4)) == 14
    assert from_eighths(14) == Fraction(7, 4)
    with pytest.raises(Exception):
        to_eighths(Fraction(1, 3))


def test_coefficients_and_truncation():
    s = QSeries.from_terms({0: 1, 8: -3, 16: Fraction(1, 2)}, 16)
    assert s.at(1) == -3 and s.coeff(16) == Fraction(1, 2) and s.coeff(4) == 0
    assert s.truncate(8) == QSeries.from_terms({0: 1, 8: -3}, 8)
    with pytest.raises(CutoffError):
        QSeries.from_terms({24: 1}, 16)
    with pytest.raises(CutoffError):
        s.require(24)


def test_binary_ops_take_the_smaller_cutoff():
    a = QSeries.from_terms({0: 1, 8: 1}, 8)
    b = QSeries.from_terms({0: 1, 8: 1, 16: 1}, 16)
    assert (a * b).cutoff == 8
    assert (a + b).cutoff == 8


@given(series(), series())
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(series(), series(), series())
def test_mul_associates(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(series(), series(), series())
def test_mul_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(series(), series())
def test_mul_matches_double_loop(a, b):
    expect: dict[int, Fraction] = {}
    for e1, c1 in a.terms():
        for e2, c2 in b.terms():
            if e1 + e2 <= CUT:
                expect[e1 + e2] = expect.get(e1 + e2, Fraction(0)) + c1 * c2
    got = a * b
    assert all(got.coeff(e) == expect.get(e, 0) for e in range(CUT + 1))
    assert got == naive_mul(a, b)


@given(series(48), st.integers(0, 8))
def test_power_is_repeated_mul(a, k):
    acc = QSeries.one(48)
    for _ in range(k):
        acc = acc * a
    assert power(a, k) == acc


@given(series(), st.integers(1, 4))
def test_dissect_partitions(a, modulus):
    # residues run over the whole eighth grid of one period
    parts = [a.dissect(Fraction(r, 8), modulus) for r in range(8 * modulus)]
    supports = [{e for e, _ in p.terms()} for p in parts]
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            assert not supports[i] & supports[j]
    assert qsum(parts) == a


def test_large_products_agree_with_naive():
    a = QSeries.from_terms({8 * k: (-1) ** k * (k + 1) for k in range(200)}, 1600)
    b = QSeries.from_terms({8 * k * k: 2 for k in range(1, 15)} | {0: 1}, 1600)
    assert a * b == naive_mul(a, b)


def test_json_round_trip():
    s = QSeries.from_terms({2: Fraction(-1, 16), 18: 5}, 40)
    assert QSeries.from_json(s.to_json()) == s
