"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

from __future__ import annotations

import random
import time
from fractions import Fraction

from conftest import record_acceptance

from thetadesigns import modforms
from thetadesigns.designs import WeightedSet, code_orbit_weights, kernel_sum, orbit_lambda, strength
from thetadesigns.lattice import BinaryCode, build
from thetadesigns.modforms import DE8, DE24, PHI, Q, R, TH2, TH3, TH4, expand, expand_to, shadow, verify_identity
from thetadesigns.qseries import DEFAULT_CUTOFF_EIGHTHS, QSeries
from thetadesigns.rootsys import classify, condition_value, displayed_condition
from thetadesigns.shells import enumerate_shell
from thetadesigns.strength import (LEMMA_ZEROS, THEOREMS, compare_with_kernel, family_for, growth_certificate,
                                   lemma_scan, shadow_growth_inputs, tau_scan, theorem_report)

FULL = DEFAULT_CUTOFF_EIGHTHS


def _clear_expansion_caches() -> None:
    for cache in (modforms._expand_cached, modforms._theta_power, modforms.expand_word, modforms.theta_constant):
        cache.cache_clear()


def test_criterion_1_catalog_expansions():
    table = [
        (DE8, [0, 1, -8, 28]), (PHI, [1, -24, 24, -96]), (Q, [1, 0, 240, 0, 2160]), (R, [1, 0, -504]),
        (DE24, [0, 0, 1, 0, -24, 0, 252]), (shadow(DE8), [Fraction(-1, 16), 0, 1, 0, -7]),
        (shadow(PHI), [2, 0, 48, 0, 48]),
    ]
    _clear_expansion_caches()
    start = time.perf_counter()
    series = [expand(f, FULL) for f, _ in table]
    elapsed = time.perf_counter() - start
    heads = all([s.at(m) for m in range(len(c))] == [Fraction(x) for x in c] for s, (_, c) in zip(series, table))
    ok = heads and elapsed < 1.0
    record_acceptance(1, ok, f"7 forms to q^1200 in {elapsed:.2f} s")
    assert ok


def test_criterion_2_identities():
    pairs = [(TH2 ** 4 + TH4 ** 4, TH3 ** 4), (Q, TH3 ** 8 - 16 * DE8), (DE24, TH3 ** 8 * DE8 ** 2),
             (shadow(Q), Q), (shadow(R), -R), (shadow(DE24), DE24)]
    held = [verify_identity(a, b, FULL).holds for a, b in pairs]
    record_acceptance(2, all(held), f"{sum(held)}/6 identities to q^1200")
    assert all(held)


INSTANCES = [f"Z:{n}" for n in range(1, 9)] + ["Witt:8", "Witt:12", "Witt:16", "CA:even:4", "Witt:12+Witt:12"]


def test_criterion_3_oracle_equivalence():
    start = time.perf_counter()
    rows = []
    for spec in INSTANCES:
        sides = (False, True) if family_for(spec).has_shadow else (False,)
        for side in sides:
            rows += [(spec, r) for r in compare_with_kernel(spec, 20, side)]
    elapsed = time.perf_counter() - start
    bad = [(spec, r.to_json_obj()) for spec, r in rows if not (r.count_ok and r.verdict_ok)]
    enumerated = sum(1 for _, r in rows if r.enumerated_size is not None)
    ok = not bad and elapsed < 300
    record_acceptance(3, ok, f"{len(rows)} shells, {enumerated} also enumerated, {len(bad)} mismatches, "
                             f"{elapsed:.0f} s")
    assert ok, bad[:5]


def test_criterion_4_theorem_tables():
    reports = {name: theorem_report(name, 1200) for name in THEOREMS}
    failed = [name for name, rep in reports.items() if not rep.passed]
    record_acceptance(4, not failed, f"{len(reports)} tables at cutoff 1200, failing: {failed or 'none'}")
    assert not failed, "\n".join(reports[n].to_text() for n in failed)


def test_criterion_5_zero_scans():
    start = time.perf_counter()
    results = lemma_scan(1200, 36, 3)
    elapsed = time.perf_counter() - start
    by_form = {r.form: r for r in results}
    lemma_ok = all(by_form[e.expression].passed for e in LEMMA_ZEROS)
    bad = [r.form for r in results if not r.passed]
    ok = lemma_ok and not bad and elapsed < 600
    record_acceptance(5, ok, f"{len(LEMMA_ZEROS)} lemma entries and {len(results)} monomials to 1200, "
                             f"{len(bad)} with unexpected zeros, {elapsed:.0f} s")
    assert ok, bad[:5]


def test_criterion_6_tau():
    rep = tau_scan(1200)
    injected = tau_scan(20, {5: 0})
    (c,) = injected.consequences
    wired = injected.wiring_mismatches == () and (c["E8"], c["rank16"]) == ("11", "7")
    ok = rep.nonvanishing and rep.wiring_mismatches == () and wired
    record_acceptance(6, ok, "tau(m) != 0 for m <= 1200; injected tau(5) = 0 gives E8 norm 10 strength "
                             f"{c['E8']}, rank-16 strength {c['rank16']}")
    assert ok


def test_criterion_7_classification():
    expected = {4: {"A1", "A2", "D4", "E6", "E7", "E8"}, 6: {"A1", "2A1", "E8", "2E8", "D16"},
                8: {"A1", "A2"}, 10: {"A1", "2A1", "A2", "D4", "E8"}, 12: {"A1"}}
    lists = all(set(classify(d).systems) == s and len(classify(d).systems) == len(s) for d, s in expected.items())
    grid = all((condition_value(n, h, d) == 0) == (displayed_condition(d)(n, h) == 0)
               for d in expected for n in range(1, 61) for h in range(0, 61))
    ok = lists and grid
    record_acceptance(7, ok, "lists for degrees 4..12; vanishing loci agree on n, h <= 60")
    assert ok


def test_criterion_8_growth():
    cubic = growth_certificate(expand_to(DE8, 1200), expand_to(TH3, 1200), 408, 1200)
    phi0, psi = shadow_growth_inputs(600)
    sh = growth_certificate(phi0, psi, 426, 600)
    rng = random.Random(8)
    monotone = True
    for _ in range(60):
        a = [rng.randint(1, 5)] + [rng.randint(-4, 6) for _ in range(rng.randint(0, 6))]
        b = [rng.randint(1, 4), rng.randint(1, 4)] + [rng.randint(0, 4) for _ in range(rng.randint(0, 5))]
        cert = growth_certificate(QSeries.from_terms({8 * (i + 1): c for i, c in enumerate(a)}, 400),
                                  QSeries.from_terms({8 * i: c for i, c in enumerate(b)}, 400),
                                  rng.randint(0, 20), 50)
        monotone &= cert.monotone
    ok = cubic.certified and sh.certified and cubic.monotone and sh.monotone and monotone
    record_acceptance(8, ok, f"M_408 >= {cubic.bound}, shadow M_426 >= {sh.bound}, 60 random inputs monotone")
    assert ok


def test_criterion_9_appendix():
    code = BinaryCode.hamming7()
    table = [orbit_lambda(code, w) for w in range(8)]
    closed = [Fraction(code.weight_enumerator.get(w, 0), c) for w, c in
              enumerate([1, 7, 21, 35, 35, 21, 7, 1])]
    z7 = build("Z:7")
    weighted = all(kernel_sum(code_orbit_weights(code, enumerate_shell(z7, m)), j) == 0
                   for m in (7, 8, 12, 15) for j in range(1, 6))
    unweighted = all(strength(enumerate_shell(z7, m), 8).label == "5" for m in (3, 11, 12))
    shell = enumerate_shell(z7, 12)
    coded = code_orbit_weights(code, shell).weights
    uniform = [Fraction(1, len(shell))] * len(shell)
    convex = True
    for lam in (Fraction(1, 3), Fraction(3, 4)):
        mixed = WeightedSet(shell, tuple(lam * a + (1 - lam) * b for a, b in zip(coded, uniform)))
        convex &= kernel_sum(mixed, 2) == 0 and kernel_sum(mixed, 4) == 0
    ok = table == closed and weighted and unweighted and convex
    record_acceptance(9, ok, "lambda table, weighted 5-designs at 7, 8, 12, 15, unweighted at 3, 11, 12, "
                             "convex mixtures at 12")
    assert ok
