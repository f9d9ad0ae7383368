"""Numerical checks of the explicit-formula machinery for zeta_Q.

Everything here is for K = Q (Delta = 1, n = r = 1) and uses a file of
ordinates gamma > 0 of nontrivial Riemann zeros.  Sums over zeros range
over both gamma and -gamma.

Prime sums are cut at ``prime_cutoff``; the remainder is replaced by its
prime-number-theorem main term and bounded using Schoenfeld's RH form
``|psi(x) - x| < sqrt(x) log(x)^2 / (8 pi)`` (x >= 73.2).  Zero sums are cut
at the last ordinate in the file; their tail is bounded with the local
zero density ``log(gamma / 2 pi) / (2 pi)`` and a safety factor of 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import kernels
from .bounds import EULER_C, ZETA_Q_ZERO_SUM, digamma
from .splitting import sieve_primes

__all__ = [
    "ZeroDataset",
    "TestFunctionParams",
    "load_zeros",
    "bundled_zeros_path",
    "aux_F",
    "fhat",
    "weil_residual",
    "stark_sum_check",
    "zeta_zero_sum_constant",
    "mangoldt_sum",
]

FIRST_ZERO = 14.134725141734693
DENSITY_SAFETY = 2.0
DEFAULT_PRIME_CUTOFF = 10**7
QUAD_EPS = 1e-12
QAWF_MIN_GAMMA = 1.0


class ZeroFileError(ValueError):
    pass


@dataclass(frozen=True)
class ZeroDataset:
    gammas: np.ndarray

    @property
    def count(self) -> int:
        return len(self.gammas)

    @property
    def max_gamma(self) -> float:
        return float(self.gammas[-1])

    def head(self, k: int) -> "ZeroDataset":
        return ZeroDataset(self.gammas[:k])


def bundled_zeros_path() -> Path:
    return Path(__file__).with_name("data") / "zeros_2000.txt"


def load_zeros(path) -> ZeroDataset:
    """One positive ordinate per line, strictly ascending."""
    vals = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                v = float(line)
            except ValueError:
                raise ZeroFileError(f"{path}:{lineno}: not a number: {line!r}") from None
            if not v > 0 or not math.isfinite(v):
                raise ZeroFileError(f"{path}:{lineno}: ordinate must be positive")
            if vals and v <= vals[-1]:
                raise ZeroFileError(f"{path}:{lineno}: ordinates must be strictly ascending")
            vals.append(v)
    if not vals:
        raise ZeroFileError(f"{path}: no zeros")
    if abs(vals[0] - FIRST_ZERO) > 1e-4:
        raise ZeroFileError(f"{path}: first ordinate {vals[0]} is not 14.134725...")
    return ZeroDataset(np.array(vals))


@dataclass(frozen=True)
class TestFunctionParams:
    """Plateau test function: F = 1 on |t| <= T, (T/|t|) e^{-h(|t|-T)} beyond."""

    __test__ = False  # not a pytest class

    s: float
    X: float

    def __post_init__(self):
        if not self.X > 1:
            raise ValueError("X must exceed 1")

    @property
    def h(self) -> float:
        return self.s - 0.5

    @property
    def T(self) -> float:
        return math.log(self.X)


def aux_F(t, params: TestFunctionParams):
    t = np.abs(np.asarray(t, dtype=float))
    T, h = params.T, params.h
    with np.errstate(divide="ignore", over="ignore"):
        tail = (T / t) * np.exp(-h * (t - T))
    out = np.where(t <= T, 1.0, tail)
    return float(out) if out.ndim == 0 else out


def _tail_kernel(params):
    T, h = params.T, params.h
    return lambda t: (T / t) * math.exp(-h * (t - T)) * (h * t + 1.0) / (t * t)


def _tail_integral(gamma, params, eps=QUAD_EPS):
    g = _tail_kernel(params)
    # QAWF cycles have length pi/gamma: below gamma ~ 1e-3 it silently returns
    # about 0 and subnormal gamma crashes it, so small gamma integrates directly.
    if gamma < QAWF_MIN_GAMMA:
        val, _ = integrate.quad(lambda t: g(t) * math.cos(gamma * t), params.T, np.inf,
                                epsabs=eps, epsrel=0, limit=200)
    else:
        val, _ = integrate.quad(g, params.T, np.inf, weight="cos", wvar=gamma,
                                epsabs=eps, limlst=200)
    return val


def fhat(gamma, params: TestFunctionParams, eps=QUAD_EPS) -> float:
    """Fourier transform of the plateau test function at ``gamma``."""
    h, T = params.h, params.T
    if not h > 0:
        raise ValueError("need s > 1/2")
    gamma = abs(float(gamma))
    den = h * h + gamma * gamma
    x = gamma * T
    sinc = 1.0 - x * x / 6.0 if x < 1e-6 else math.sin(x) / x
    first = 2 * h * h * T * sinc / den
    second = 2 * (h + 1 / T) * math.cos(gamma * T) / den
    return first + second - 4.0 / den * _tail_integral(gamma, params, eps)


# -- prime side ---------------------------------------------------------------

def _schoenfeld(x):
    return math.sqrt(x) * math.log(x) ** 2 / (8 * math.pi)


def mangoldt_sum(exact: float, cutoff: int, main_density, err_density, boundary: float):
    """Complete a truncated sum of Lambda(n) w(n) with its tail beyond ``cutoff``.

    ``exact`` is the sum over n <= cutoff.  In the variable u = log t,
    ``main_density(u) = w(e^u) e^u`` and
    ``err_density(u) = eps(e^u) |w'(e^u)| e^u`` with eps the RH error in psi;
    ``boundary`` is eps(cutoff) w(cutoff).  Returns (value, error bound).
    """
    L = math.log(cutoff)
    main, _ = integrate.quad(main_density, L, np.inf, epsabs=1e-15, limit=200)
    err_int, _ = integrate.quad(err_density, L, np.inf, epsabs=1e-15, limit=200)
    return exact + main, boundary + err_int


def _primes_to(cutoff, primes):
    if primes is None or (len(primes) and primes[-1] < cutoff and cutoff - primes[-1] > 1000):
        primes = sieve_primes(cutoff + 1)
    return primes


class WeilResult(NamedTuple):
    lhs: float
    rhs: float
    residual: float
    tail_estimate: float

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.tail_estimate


def _zero_tail_bound(G, envelope):
    """2 * sum_{gamma > G} envelope(gamma), via the zero density, times the safety factor."""
    dens = lambda g: math.log(g / (2 * math.pi)) / (2 * math.pi)
    val, _ = integrate.quad(lambda g: dens(g) * envelope(g), G, np.inf, limit=200)
    return DENSITY_SAFETY * 2.0 * val


def weil_residual(zeros: ZeroDataset, params: TestFunctionParams,
                  prime_cutoff: int = DEFAULT_PRIME_CUTOFF, primes=None) -> WeilResult:
    """Both sides of the explicit formula for zeta_Q with the plateau test function."""
    s, h, T, X = params.s, params.h, params.T, params.X
    if not s > 1:
        raise ValueError("the explicit formula needs s > 1 for this test function")
    prime_cutoff = int(prime_cutoff)
    if prime_cutoff < max(X, 74):
        raise ValueError("prime cutoff must exceed X and 73")
    lhs = 2.0 * math.fsum(fhat(g, params) for g in zeros.gammas)

    primes = _primes_to(prime_cutoff, primes)
    exact = kernels.mangoldt_plateau_sum(primes, prime_cutoff, T, h)
    # w(t) = T X^h t^{-h-1/2} / log t beyond the cutoff
    a = h + 0.5
    XT = T * math.exp(h * T)
    L = math.log(prime_cutoff)
    psum, perr = mangoldt_sum(
        exact, prime_cutoff,
        lambda u: XT * math.exp((0.5 - h) * u) / u,
        lambda u: XT * (a * u + 1) * math.exp(-h * u) / (8 * math.pi),
        _schoenfeld(prime_cutoff) * XT * math.exp(-a * L) / L)

    f = lambda x: (T / x) * math.exp(-h * (x - T))
    f_cosh = lambda x: 0.5 * (T / x) * (math.exp((0.5 - h) * x + h * T) + math.exp(h * T - (h + 0.5) * x))
    cosh_tail, _ = integrate.quad(f_cosh, T, np.inf, epsabs=1e-13, limit=200)
    sinh_part, _ = integrate.quad(lambda x: (1 - f(x)) * math.exp(-x / 2) / (1 - math.exp(-x)),
                                  T, np.inf, epsabs=1e-13, limit=200)
    cosh_part, _ = integrate.quad(lambda x: (1 - f(x)) * math.exp(-x / 2) / (1 + math.exp(-x)),
                                  T, np.inf, epsabs=1e-13, limit=200)
    rhs = (-2.0 * psum
           + 8.0 * math.sinh(T / 2) + 4.0 * cosh_tail
           + (-EULER_C - math.log(8 * math.pi) - math.pi / 2)
           + sinh_part + cosh_part)

    tail_abs = _tail_integral(0.0, params)
    envelope = lambda g: (2 * h * h / g + 2 * (h + 1 / T) + 4 * tail_abs) / (h * h + g * g)
    budget = _zero_tail_bound(zeros.max_gamma, envelope) + 2.0 * DENSITY_SAFETY * perr
    budget += 2e-10 * zeros.count
    return WeilResult(lhs, rhs, lhs - rhs, budget)


class StarkResult(NamedTuple):
    lhs: float
    rhs: float
    residual: float
    tail_estimate: float

    @property
    def passed(self) -> bool:
        # every omitted zero term is positive
        return -1e-9 <= self.residual <= self.tail_estimate


def _neg_log_deriv_zeta(sigma, cutoff, primes):
    exact = kernels.mangoldt_power_sum(primes, cutoff, sigma)
    L = math.log(cutoff)
    return mangoldt_sum(
        exact, cutoff,
        lambda u: math.exp((1 - sigma) * u),
        lambda u: sigma * u * u * math.exp((0.5 - sigma) * u) / (8 * math.pi),
        _schoenfeld(cutoff) * math.exp(-sigma * L))


def stark_sum_check(zeros: ZeroDataset, sigma: float,
                    prime_cutoff: int = DEFAULT_PRIME_CUTOFF, primes=None) -> StarkResult:
    """sum_rho 1/(sigma - rho) against its closed form for zeta_Q.

    The closed form is 1/(sigma-1) - d/2 with
    d = -2 zeta'/zeta(sigma) + log(2 pi) - Psi(sigma)
        + (Psi((sigma+1)/2) - Psi(sigma/2))/2 - 2/sigma.
    ``residual`` is rhs minus the partial zero sum; it must lie in
    [0, tail_estimate].
    """
    if not 1 < sigma <= 3:
        raise ValueError("sigma must lie in (1, 3]")
    h = sigma - 0.5
    g = zeros.gammas
    lhs = math.fsum(2 * h / (h * h + g * g))
    primes = _primes_to(int(prime_cutoff), primes)
    lz, lerr = _neg_log_deriv_zeta(sigma, int(prime_cutoff), primes)
    d = (2 * lz + math.log(2 * math.pi) - digamma(sigma)
         + (digamma((sigma + 1) / 2) - digamma(sigma / 2)) / 2 - 2 / sigma)
    rhs = 1 / (sigma - 1) - d / 2
    tail = _zero_tail_bound(zeros.max_gamma, lambda x: h / (h * h + x * x)) + DENSITY_SAFETY * lerr
    return StarkResult(lhs, rhs, rhs - lhs, tail)


class ZeroSumResult(NamedTuple):
    partial_sum: float
    tail_bound: float
    target: float

    @property
    def passed(self) -> bool:
        return self.partial_sum <= self.target <= self.partial_sum + self.tail_bound


def zeta_zero_sum_constant(zeros: ZeroDataset) -> ZeroSumResult:
    """sum_{gamma > 0} 1/(1/4 + gamma^2), which equals C/2 + 1 - log(4 pi)/2.

    (That is sum_rho Re(1/rho); the sum over all rho is twice as large.)
    """
    if zeros.count == 0:
        raise ValueError("empty zero set")
    g = zeros.gammas
    partial = math.fsum(1.0 / (0.25 + g * g))
    tail = _zero_tail_bound(zeros.max_gamma, lambda x: 1.0 / (0.25 + x * x)) / 2.0
    return ZeroSumResult(partial, tail, ZETA_Q_ZERO_SUM)
