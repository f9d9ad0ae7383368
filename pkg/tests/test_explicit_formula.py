import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from dedekind_residue import explicit_formula as ef
from dedekind_residue.bounds import EULER_C, ZETA_Q_ZERO_SUM, digamma
from dedekind_residue.explicit_formula import TestFunctionParams as Params

from conftest import PRIME_CUTOFF


def test_load_zeros_small(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("14.134725\n21.022040\n25.010858\n")
    assert ef.load_zeros(p).count == 3


@pytest.mark.parametrize("body, where", [
    ("", "no zeros"),
    ("21.022040\n25.010858\n", "first ordinate"),
    ("14.134725\n14.134725\n", "ascending"),
    ("14.134725\n21.022040\n20.0\n", ":3:"),
    ("14.134725\nabc\n", ":2:"),
    ("14.134725\n-3\n", ":2:"),
])
def test_load_zeros_rejects(tmp_path, body, where):
    p = tmp_path / "z.txt"
    p.write_text(body)
    with pytest.raises(ef.ZeroFileError, match=where):
        ef.load_zeros(p)


def test_bundled_zeros(zeros):
    assert zeros.count == 2000
    assert zeros.gammas[0] == pytest.approx(14.134725141734693, abs=1e-12)
    for k in (10, 500, 2000):
        assert zeros.gammas[k - 1] == pytest.approx(float(mpmath.zetazero(k).imag), abs=1e-9)


def test_aux_F():
    P = Params(1.5, 20.0)
    T, h = P.T, P.h
    assert ef.aux_F(0.0, P) == 1.0
    assert ef.aux_F(T, P) == 1.0
    assert ef.aux_F(T * (1 + 1e-12), P) == pytest.approx(1.0, abs=1e-10)
    assert ef.aux_F(2 * T, P) == pytest.approx(0.5 * math.exp(-h * T), rel=1e-15)
    assert ef.aux_F(-2 * T, P) == ef.aux_F(2 * T, P)


def _fhat_direct(gamma, P):
    """Integrate F(t) cos(gamma t) straight from the definition in mpmath."""
    T, h = mpmath.mpf(P.T), mpmath.mpf(P.h)
    g = mpmath.mpf(gamma)
    head = 2 * mpmath.sin(g * T) / g if gamma else 2 * T
    # e^{-h t} decay: stopping at T + 60/h drops less than e^{-60}
    upper = T + 60 / h
    pts = mpmath.linspace(T, upper, int(max(40, gamma * (upper - T))) + 1)
    tail = mpmath.quad(lambda t: (T / t) * mpmath.exp(-h * (t - T)) * mpmath.cos(g * t), pts)
    return float(head + 2 * tail)


@pytest.mark.parametrize("s, X", [(1.5, 20.0), (1.25, 50.0), (2.0, math.e ** 3), (0.9, 100.0)])
@pytest.mark.parametrize("gamma", [0.0, 1e-6, 1e-3, 0.3, 0.999, 1.0, 14.134725, 100.0])
def test_fhat_matches_direct_transform(s, X, gamma):
    P = Params(s, X)
    assert ef.fhat(gamma, P) == pytest.approx(_fhat_direct(gamma, P), abs=1e-8)


def test_fhat_even_and_decaying():
    P = Params(1.5, 20.0)
    for g in (0.5, 7.0, 33.3):
        assert ef.fhat(g, P) == ef.fhat(-g, P)
    scaled = [abs(ef.fhat(g, P)) * g * g for g in np.geomspace(10, 1e4, 25)]
    assert max(scaled) < 10.0


def test_fhat_continuous_at_zero():
    # tiny and subnormal frequencies once returned a jump or crashed the integrator
    P = Params(1.5, 20.0)
    f0 = ef.fhat(0.0, P)
    for g in (5e-324, 1e-300, 1e-10, 1e-7):
        assert ef.fhat(g, P) == pytest.approx(f0, abs=1e-9)


def test_fhat_quadrature_tolerance_stable():
    P = Params(1.5, 50.0)
    for g in (0.0, 21.02, 500.0):
        assert ef.fhat(g, P, eps=1e-12) == pytest.approx(ef.fhat(g, P, eps=1e-14), abs=1e-8)


def test_fhat_needs_positive_h():
    with pytest.raises(ValueError):
        ef.fhat(1.0, Params(0.5, 20.0))


@pytest.mark.parametrize("s", [1.25, 1.5, 2.0])
@pytest.mark.parametrize("X", [math.e ** 3, 20.0, 50.0])
def test_weil_containment(zeros1000, big_primes, s, X):
    r = ef.weil_residual(zeros1000, Params(s, X), PRIME_CUTOFF, big_primes)
    assert abs(r.residual) <= r.tail_estimate


def test_weil_residual_shrinks(zeros, zeros1000, zeros100, big_primes):
    P = Params(1.5, 20.0)
    r100 = ef.weil_residual(zeros100, P, PRIME_CUTOFF, big_primes)
    r1000 = ef.weil_residual(zeros1000, P, PRIME_CUTOFF, big_primes)
    assert abs(r1000.residual) < abs(r100.residual)


def test_weil_rejects_small_s(zeros100):
    with pytest.raises(ValueError):
        ef.weil_residual(zeros100, Params(1.0, 20.0))


def test_weil_step_like_function_finite(zeros100):
    # a long plateau: the tail sits far beyond any zero, the prime sum is all plateau
    r = ef.weil_residual(zeros100, Params(1.5, 1e4), prime_cutoff=10**5)
    assert all(math.isfinite(v) for v in r)


def test_neg_log_deriv_zeta(big_primes):
    val, err = ef._neg_log_deriv_zeta(2.0, PRIME_CUTOFF, big_primes)
    with mpmath.workdps(30):
        ref = float(-mpmath.zeta(2, derivative=1) / mpmath.zeta(2))
    assert abs(val - ref) <= err
    assert val == pytest.approx(0.5699609, abs=1e-6)


def test_stark_at_two(zeros1000, big_primes):
    r = ef.stark_sum_check(zeros1000, 2.0, PRIME_CUTOFF, big_primes)
    assert r.passed
    # closed form: 1/s + 1/(s-1) - log(pi)/2 + Psi(s/2)/2 + zeta'/zeta(s)
    with mpmath.workdps(30):
        s = mpmath.mpf(2)
        ref = 1 / s + 1 / (s - 1) - mpmath.log(mpmath.pi) / 2 + mpmath.digamma(s / 2) / 2 \
            + mpmath.zeta(s, derivative=1) / mpmath.zeta(s)
    assert r.rhs == pytest.approx(float(ref), abs=1e-9)


def test_stark_rhs_continuous(zeros100, big_primes):
    grid = np.linspace(1.1, 3.0, 20)
    vals = [ef.stark_sum_check(zeros100, s, 10**6, big_primes).rhs for s in grid]
    assert all(math.isfinite(v) for v in vals)
    assert max(abs(a - b) for a, b in zip(vals, vals[1:])) < 1.0


def test_stark_lhs_grows(zeros, zeros100, big_primes):
    a = ef.stark_sum_check(zeros100, 2.0, 10**6, big_primes).lhs
    b = ef.stark_sum_check(zeros, 2.0, 10**6, big_primes).lhs
    assert b > a


def test_stark_range():
    z = ef.ZeroDataset(np.array([14.134725]))
    for s in (1.0, 3.5):
        with pytest.raises(ValueError):
            ef.stark_sum_check(z, s)


def test_zero_sum_constant(zeros1000, zeros):
    assert ZETA_Q_ZERO_SUM == pytest.approx(EULER_C / 2 + 1 - math.log(4 * math.pi) / 2)
    r = ef.zeta_zero_sum_constant(zeros1000)
    assert r.partial_sum <= ZETA_Q_ZERO_SUM <= r.partial_sum + r.tail_bound
    assert ef.zeta_zero_sum_constant(zeros).partial_sum > r.partial_sum
    # the sum over +-gamma is twice the constant, as the Hadamard product identity says
    assert 2 * (r.partial_sum + 0.5 * r.tail_bound) == pytest.approx(2 * ZETA_Q_ZERO_SUM, rel=1e-3)


def test_zero_sum_is_real_part_of_reciprocals(zeros1000):
    # sum_rho Re(1/rho) over gamma > 0 and its mirror equals sum_{gamma > 0} 1/(1/4 + gamma^2)
    g = zeros1000.gammas
    re = sum(2 * 0.5 / (0.25 + x * x) for x in g)
    assert re == pytest.approx(ef.zeta_zero_sum_constant(zeros1000).partial_sum, rel=1e-14)
