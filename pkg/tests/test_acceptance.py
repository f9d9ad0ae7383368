"""Acceptance criteria, each at its pinned tolerance.

Every test records one pass/fail line; the lines are printed in the
terminal summary (and directly when run with -s).
"""
import json
import math

import numpy as np
import pytest

from acceptance_log import record
from conftest import PRIME_CUTOFF
from dedekind_residue import explicit_formula as ef
from dedekind_residue.bounds import (
    THM1_CONSTANT, TABLE1_FORBIDDEN, TABLE1_PUBLISHED, BoundInputs, corollary_bound, optimal_sigma, table1,
    thm1_bound, thm2_bound, thm2_delta)
from dedekind_residue.cli import main
from dedekind_residue.estimators import f_estimator
from dedekind_residue.numfield import make_field
from dedekind_residue.oracle import is_fundamental, quadratic_polynomial, true_log_kappa
from dedekind_residue.splitting import dedekind_index_test, split_table


def _say(criterion, ok, detail):
    record(criterion, ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def test_criterion_1_table1():
    rows = {e: tuple(c) for e, c in table1()}
    values = sum(v is not None for r in TABLE1_PUBLISHED.values() for v in r)
    dashes = {(e, n) for e, r in rows.items() for n, v in zip((2, 6, 10, 20, 50), r) if v is None}
    ok = rows == TABLE1_PUBLISHED and dashes == set(TABLE1_FORBIDDEN)
    stated = {e: tuple(c) for e, c in table1(constant=THM1_CONSTANT)}
    n_stated = sum(a == b for e in rows for a, b in zip(stated[e], TABLE1_PUBLISHED[e]) if b is not None)
    _say(1, ok, f"{values} values and {len(dashes)} dashes match exactly "
                f"(leading constant 2.325; 2.324 matches {n_stated}/{values})")
    assert ok


CONTAINMENT_DISCS = (-3, -4, -7, -8, -23, -84, -163, -1155, -4004, -9995,
                     5, 8, 12, 13, 229, 1009, 3329, 4001, 7960, 9997)


@pytest.fixture(scope="module")
def truths():
    return {d: true_log_kappa(d).log_kappa for d in CONTAINMENT_DISCS}


def test_criterion_2_certified_containment(truths):
    assert all(is_fundamental(d) and abs(d) <= 10**4 for d in CONTAINMENT_DISCS)
    assert sum(d < 0 for d in CONTAINMENT_DISCS) == 10
    worst, failures = 0.0, []
    for d in CONTAINMENT_DISCS:
        K = make_field(quadratic_polynomial(d))
        table = split_table(K, 1e5)
        for X in (1e4, 1e5):
            err = abs(f_estimator(K, X, table=table).value - truths[d])
            b = thm1_bound(K.log_delta_upper, 2, X, include_beta=True)
            worst = max(worst, err / b)
            if err > b:
                failures.append((d, X))
    ok = not failures
    _say(2, ok, f"40 cases, worst error/bound = {worst:.3g}" + (f", failures {failures}" if failures else ""))
    assert ok


GRID = [(L, n, r1, X)
        for L, n, r1 in [(math.log(3), 2, 0), (math.log(5), 2, 2), (10.0, 3, 1), (23.0, 4, 0), (50.0, 6, 2),
                         (115.13, 10, 2), (230.26, 20, 0), (460.5, 50, 10), (2.0, 2, 2), (80.0, 8, 8)]
        for X in (100.0, 1e5)]


def test_criterion_3a_thm2_dominates_thm1():
    ratios = [thm2_bound(BoundInputs(L, n, X, r1, optimal_sigma(L), 0.0)) / thm1_bound(L, n, X)
              for L, n, r1, X in GRID]
    ok = max(ratios) <= 1.0
    _say("3a", ok, f"20 grid points, max thm2/thm1 = {max(ratios):.4f}")
    assert ok


def test_criterion_3b_corollary_is_thm2_at_sigma_1_5():
    rel = [abs(corollary_bound(L, n, r1, X, 0.0) - thm2_bound(BoundInputs(L, n, X, r1, 1.5, 0.0)))
           / thm2_bound(BoundInputs(L, n, X, r1, 1.5, 0.0)) for L, n, r1, X in GRID]
    ok = max(rel) <= 1e-12
    const = thm2_delta(0.0, 0, 0, 1.5, 0.0)
    n_coef = thm2_delta(0.0, 1, 0, 1.5, 0.0) - const
    r_coef = thm2_delta(0.0, 0, 1, 1.5, 0.0) - const
    _say("3b", ok, f"max relative gap = {max(rel):.3g} (tolerance 1e-12); sigma=1.5 gives "
                   f"{const:.4f} {n_coef:+.4f} n {r_coef:+.4f} r1 against 3.35 - 1.801 n - 0.619 r1")
    assert ok


@pytest.mark.parametrize("X", [20.0, 50.0])
def test_criterion_4_weil_residual(X, zeros1000, zeros100, big_primes):
    P = ef.TestFunctionParams(1.5, X)
    r = ef.weil_residual(zeros1000, P, PRIME_CUTOFF, big_primes)
    r100 = ef.weil_residual(zeros100, P, PRIME_CUTOFF, big_primes)
    ok = abs(r.residual) <= r.tail_estimate and abs(r.residual) < abs(r100.residual)
    _say(f"4 (X={X:g})", ok, f"|residual| {abs(r.residual):.3g} <= budget {r.tail_estimate:.3g}; "
                             f"100 zeros: {abs(r100.residual):.3g}")
    assert ok


def test_criterion_5_zero_sum_and_stark(zeros1000, big_primes):
    z = ef.zeta_zero_sum_constant(zeros1000)
    s = ef.stark_sum_check(zeros1000, 2.0, PRIME_CUTOFF, big_primes)
    ok = z.passed and s.passed
    _say(5, ok, f"0.023095 in [{z.partial_sum:.6f}, {z.partial_sum + z.tail_bound:.6f}]; "
                f"Stark residual {s.residual:.3g} in [0, {s.tail_estimate:.3g}]")
    assert ok


@pytest.mark.slow
def test_criterion_6_splitting_cross_validation():
    discs = [d for d in range(-9999, 10000) if is_fundamental(d)]
    mismatches, bad_sum = [], []
    for d in discs:
        K = make_field(quadratic_polynomial(d))
        a = split_table(K, 1e4, method="kronecker")
        b = split_table(K, 1e4, method="polynomial", strict=False)
        if not (np.array_equal(a.offsets, b.offsets) and np.array_equal(a.degrees, b.degrees)
                and np.array_equal(a.ramification, b.ramification)):
            mismatches.append(d)
        efsum = np.add.reduceat(a.degrees * a.ramification, a.offsets[:-1])
        if np.any(efsum[~a.index_divisor] != 2):
            bad_sum.append(d)
    dedekind = dedekind_index_test((3, 0, 1), 2) is True and dedekind_index_test((1, 0, 1), 2) is False
    ok = not mismatches and not bad_sum and dedekind
    _say(6, ok, f"{len(discs)} fields x 1229 primes, {len(mismatches)} mismatches, "
                f"{len(bad_sum)} bad degree sums, Dedekind examples {'ok' if dedekind else 'wrong'}")
    assert ok


def _json_out(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    try:
        rep = json.loads(out)
        rep.pop("wall_time", None)
        return code, rep
    except json.JSONDecodeError:
        return code, out


def test_criterion_7_thread_determinism(capsys):
    cmds = [
        ["estimate", "--poly=-1,-1,0,1", "--x", "150000"],
        ["estimate", "--poly", "1,0,1", "--x", "150000", "--method", "g"],
        ["estimate", "--poly", "1,0,1", "--x", "150000", "--method", "a"],
        ["estimate", "--poly", "2,0,1", "--x", "100000", "--bound", "thm2"],
        ["split", "--poly", "1,1,1", "--x", "100000"],
        ["split", "--poly", "1,1,1", "--x", "100000", "--format", "tsv"],
        ["validate", "--d", "229", "--x", "100000"],
        ["minimal-x", "--log10-disc", "20", "--degree", "6"],
        ["table1"],
        ["verify", "--check", "zerosum"],
    ]
    varying = []
    for argv in cmds:
        one = _json_out(capsys, argv + ["--threads", "1"])
        many = [_json_out(capsys, argv + ["--threads", t]) for t in ("2", "7")]
        if any(m != one for m in many):
            varying.append(argv[0])
    ok = not varying
    _say(7, ok, f"{len(cmds)} invocations at threads 1/2/7" + (f", differ: {varying}" if varying else ""))
    assert ok


def test_criterion_8_asymptotic_constant():
    L = 100 * math.log(10)
    ratios = [thm1_bound(L, 2, X) / (L / (math.sqrt(X) * math.log(3 * X))) for X in np.geomspace(1e6, 1e300, 30)]
    limit = ratios[-1]
    decreasing = all(a > b for a, b in zip(ratios, ratios[1:]))
    expected = THM1_CONSTANT * (1 + 2 / math.sqrt(L)) ** 2
    ok = decreasing and limit < 2.35
    _say(8, ok, f"ratio {limit:.4f} at X=1e300, decreasing to 2.324(1+2/sqrt(log Delta))^2 = {expected:.4f}; "
                f"required < 2.35")
    assert ok
