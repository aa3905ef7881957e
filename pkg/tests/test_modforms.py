from __future__ import annotations

import math
import time
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thetadesigns.errors import ParseError, UnsupportedShadowError
from thetadesigns.modforms import (DE8, DE24, PHI, Q, R, TH2, TH3, TH4, ThetaPolynomial, ThetaWord,
                                   expand, expand_to, parse_form, shadow, theta_constant, translate,
                                   verify_identity)
from thetadesigns.qseries import DEFAULT_CUTOFF_EIGHTHS, EIGHTHS, QSeries

FULL = DEFAULT_CUTOFF_EIGHTHS


def head(p: ThetaPolynomial, top: int) -> list[Fraction]:
    s = expand_to(p, top)
    return [s.at(m) for m in range(top + 1)]


# -- catalog coefficients ---------------------------------------------------

CATALOG = [
    (DE8, [0, 1, -8, 28]),
    (PHI, [1, -24, 24, -96]),
    (Q, [1, 0, 240, 0, 2160]),
    (R, [1, 0, -504]),
    (DE24, [0, 0, 1, 0, -24, 0, 252]),
    (shadow(DE8), [Fraction(-1, 16), 0, 1, 0, -7]),
    (shadow(PHI), [2, 0, 48, 0, 48]),
]


@pytest.mark.parametrize("form, coeffs", CATALOG, ids=["De8", "Phi", "Q", "R", "De24", "ShDe8", "ShPhi"])
def test_catalog_heads(form, coeffs):
    assert head(form, len(coeffs) - 1) == [Fraction(c) for c in coeffs]


def test_catalog_expansions_are_fast():
    from thetadesigns.modforms import _expand_cached, _theta_power, expand_word, theta_constant as tc
    for cache in (_expand_cached, _theta_power, expand_word, tc):
        cache.cache_clear()
    start = time.perf_counter()
    for form, _ in CATALOG:
        expand(form, FULL)
    assert time.perf_counter() - start < 1.0


# -- identities ---------------------------------------------------------------

IDENTITIES = [
    (TH2 ** 4 + TH4 ** 4, TH3 ** 4),
    (Q, TH3 ** 8 - 16 * DE8),
    (DE24, TH3 ** 8 * DE8 ** 2),
    (shadow(Q), Q),
    (shadow(R), -R),
    (shadow(DE24), DE24),
]


@pytest.mark.parametrize("lhs, rhs", IDENTITIES,
                         ids=["jacobi", "Q", "De24", "ShQ", "ShR", "ShDe24"])
def test_identities_to_full_cutoff(lhs, rhs):
    assert verify_identity(lhs, rhs, FULL).holds


def test_identity_report_names_first_difference():
    rep = verify_identity(TH3 ** 4, TH4 ** 4, 80)
    assert not rep.holds and rep.first_difference == 8
    assert (rep.lhs_coeff, rep.rhs_coeff) == (8, -8)


# -- defining sums --------------------------------------------------------------

def test_theta_constants_from_defining_sums():
    cut = 400 * EIGHTHS
    th3, th4, th2 = (theta_constant(i, cut) for i in (3, 4, 2))
    for m in range(401):
        r = math.isqrt(m)
        square = r * r == m
        assert th3.at(m) == (1 if m == 0 else 2 * square)
        assert th4.at(m) == (1 if m == 0 else 2 * square * (-1) ** r)
    # Th2 = sum over half-integers k/2 of q^(k^2/4)
    expect = {}
    for k in range(-41, 42, 2):
        e = Fraction(k * k, 4)
        if e <= 400:
            expect[e] = expect.get(e, 0) + 1
    assert {Fraction(e, 8): c for e, c in th2.terms()} == expect


def test_delta24_support_is_even():
    s = expand(DE24, FULL)
    assert all(e % 16 == 0 and e >= 16 for e, _ in s.terms())


# -- algebra ---------------------------------------------------------------------

def admissible_words():
    return st.builds(ThetaWord, st.integers(0, 2).map(lambda k: 4 * k), st.integers(0, 8), st.integers(0, 8))


def admissible_polys():
    term = st.tuples(admissible_words(), st.fractions(min_value=-5, max_value=5, max_denominator=4))
    return st.lists(term, min_size=1, max_size=3).map(ThetaPolynomial)


@given(admissible_polys(), admissible_polys())
def test_shadow_is_multiplicative(f, g):
    assert shadow(f * g) == shadow(f) * shadow(g)


@given(admissible_polys(), admissible_polys())
def test_shadow_multiplicative_on_expansions(f, g):
    cut = 64
    assert expand(shadow(f * g), cut) == expand(shadow(f), cut) * expand(shadow(g), cut)


@given(admissible_words(), admissible_words())
def test_word_weights_add(u, v):
    assert (u * v).weight == u.weight + v.weight
    p = ThetaPolynomial([(u, 1)]) * ThetaPolynomial([(v, 2)])
    assert p.homogeneous and p.weight == u.weight + v.weight


def test_shadow_needs_theta2_power_divisible_by_four():
    with pytest.raises(UnsupportedShadowError):
        shadow(TH2 ** 2)
    with pytest.raises(UnsupportedShadowError):
        translate(TH2)


def test_translate_twice_is_identity_up_to_sign():
    p = TH3 ** 5 * DE8
    assert translate(translate(p)) == p


# -- grammar ------------------------------------------------------------------------

def test_parse_named_and_composite_forms():
    assert parse_form("Th3^7*De8") == TH3 ** 7 * DE8
    assert parse_form("Sh(Phi*Th3^4)") == shadow(PHI * TH3 ** 4)
    assert parse_form("1/2*(Th2^8+Th3^8+Th4^8)") == Fraction(1, 2) * (TH2 ** 8 + TH3 ** 8 + TH4 ** 8)
    assert parse_form("-Q + Q") == ThetaPolynomial()


@pytest.mark.parametrize("text", ["Th5", "Th3^", "(Th3", "1/0", "Th3 $ Th4", ""])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_form(text)
