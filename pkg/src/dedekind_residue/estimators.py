"""Prime-splitting approximations to log kappa_K.

Three estimators share one splitting table:

* ``f`` -- the two-cutoff Weil-formula estimator
  ``3 (B(X) - B(X/9)) / (2 sqrt(X) log 3X)``;
* ``a`` -- Schoof's truncated Euler product;
* ``g`` -- Bach's weighted average of Schoof products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .numfield import NumberFieldProfile
from .splitting import SplittingTable, split_table, strict_limit

__all__ = [
    "EstimateResult",
    "b_sum",
    "b_sum_pair",
    "f_estimator",
    "schoof_estimator",
    "bach_estimator",
    "bach_weights",
    "prime_zeta_log_sum",
    "estimate",
]


@dataclass(frozen=True)
class EstimateResult:
    method: str
    X: float
    value: float
    terms_used: int
    field_ref: NumberFieldProfile

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ArithmeticError(f"non-finite {self.method}-estimate at X={self.X}")


def _table(field, X, table, overrides, threads):
    if table is None:
        return split_table(field, X, overrides, threads)
    return table


def _b_scale(X):
    return math.sqrt(X) * math.log(X)


def b_sum_pair(field, X, Y, table: Optional[SplittingTable] = None, overrides=None, threads=1):
    """(B_K(X), B_K(Y)) from one splitting pass over primes below max(X, Y)."""
    T = max(X, Y)
    table = _table(field, T, table, overrides, threads)
    limits = np.array([max(strict_limit(X), 0), max(strict_limit(Y), 0)], dtype=np.int64)
    scales = np.array([_b_scale(X) if X > 1 else 0.0, _b_scale(Y) if Y > 1 else 0.0])
    out = kernels.bsum_pair(table.primes, table.offsets, table.degrees, limits, scales)
    return float(out[0]), float(out[1])


def b_sum(field, X, table=None, overrides=None, threads=1) -> float:
    """B_K(X): the K - Q difference of the weighted prime-power sums below X."""
    if X <= 1:
        raise ValueError("B_K needs X > 1")
    return b_sum_pair(field, X, X, table, overrides, threads)[0]


def _count_terms(table, limit):
    n = 0
    for i in range(len(table)):
        p = int(table.primes[i])
        if p > limit:
            break
        for f in table.degrees[table.offsets[i]:table.offsets[i + 1]]:
            q = p ** int(f)
            norm = q
            while norm <= limit:
                n += 1
                norm *= q
    return n


def f_estimator(field, X, table=None, overrides=None, threads=1) -> EstimateResult:
    if not X > 9:
        raise ValueError("the f-estimator needs X > 9")
    table = _table(field, X, table, overrides, threads)
    bx, bx9 = b_sum_pair(field, X, X / 9.0, table)
    value = 3.0 * (bx - bx9) / (2.0 * math.sqrt(X) * math.log(3.0 * X))
    return EstimateResult("f", X, value, _count_terms(table, strict_limit(X)), field)


def schoof_estimator(field, X, table=None, overrides=None, threads=1) -> EstimateResult:
    """A_K(X) = sum_{p<X} [log(1 - 1/p) - sum_{P|p, NP<X} log(1 - 1/NP)]."""
    if not X > 2:
        raise ValueError("Schoof's product needs X > 2")
    table = _table(field, X, table, overrides, threads)
    limit = strict_limit(X)
    value = kernels.schoof_sum(table.primes, table.offsets, table.degrees, limit)
    used = int(np.sum(table.primes <= limit))
    return EstimateResult("a", X, float(value), used, field)


def bach_weights(X: int) -> np.ndarray:
    """a_i = (x+i) log(x+i) / sum_j (x+j) log(x+j), i = 0..x-1, x = X/2."""
    x = X // 2
    y = np.arange(x, X, dtype=float)
    w = y * np.log(y)
    return w / math.fsum(w)


def bach_estimator(field, X, table=None, overrides=None, threads=1) -> EstimateResult:
    """g_K(X) = sum_i a_i A_K(x + i) for even X."""
    if X != int(X) or int(X) % 2 or X < 4:
        raise ValueError("Bach's estimator needs an even integer X >= 4")
    X = int(X)
    x = X // 2
    table = _table(field, X, table, overrides, threads)
    limit = X - 2  # A_K(y) for y <= X - 1 only sees norms <= X - 2
    delta = np.zeros(X, dtype=float)
    kernels.schoof_events(table.primes, table.offsets, table.degrees, limit, delta)
    running = kernels.kahan_cumsum(delta)
    A = running[x - 1:X - 1]  # A_K(y) = sum of events with norm <= y - 1
    value = math.fsum(bach_weights(X) * A)
    return EstimateResult("g", X, value, int(np.sum(table.primes <= limit)), field)


def prime_zeta_log_sum(field, X, sigma, minus_one=True, table=None, overrides=None, threads=1) -> float:
    """sum_{NP < X} log NP / (NP^sigma - 1), or with ``minus_one=False`` the
    plain sum of log NP / NP^sigma."""
    table = _table(field, X, table, overrides, threads)
    return float(kernels.ideal_log_sum(table.primes, table.offsets, table.degrees,
                                       strict_limit(X), float(sigma), 1.0 if minus_one else 0.0))


_METHODS = {"f": f_estimator, "a": schoof_estimator, "g": bach_estimator}


def estimate(field, X, method="f", table=None, overrides=None, threads=1) -> EstimateResult:
    try:
        fn = _METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    return fn(field, X, table, overrides, threads)
