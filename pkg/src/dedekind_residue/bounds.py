"""GRH error bounds for the f-estimator and the minimal-X solver."""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "EULER_C",
    "ZETA_Q_ZERO_SUM",
    "THM1_CONSTANT",
    "TABLE1_CONSTANT",
    "BoundInputs",
    "beta",
    "digamma",
    "thm1_bound",
    "thm2_delta",
    "thm2_bound",
    "corollary_bound",
    "optimal_sigma",
    "minimal_X",
    "TABLE1_DISCS",
    "TABLE1_DEGREES",
    "TABLE1_FORBIDDEN",
    "TABLE1_PUBLISHED",
    "table1",
]

EULER_C = 0.5772156649015329
# sum over nontrivial zeros of zeta_Q of 1/(1/4 + gamma^2)
ZETA_Q_ZERO_SUM = EULER_C / 2 + 1 - math.log(4 * math.pi) / 2

THM1_CONSTANT = 2.324
# Leading constant the published minimal-X table is consistent with; every
# cell of that table is reproduced with it and none with 2.324.
TABLE1_CONSTANT = 2.325

C_KNEE = 3.88
C_DEGREE = 4.26
COR_LEAD = 4.65
COR_DEGREE = 2.23
COR_CONST = 3.35
COR_N = 1.801
COR_R1 = 0.619

LOG3 = math.log(3.0)


@dataclass(frozen=True)
class BoundInputs:
    log_delta: float
    n: int
    X: float
    r1: int = 0
    sigma: float = 1.5
    truncated_prime_sum: float = 0.0

    def __post_init__(self):
        if self.log_delta < LOG3 - 1e-12:
            raise ValueError("log_delta must be >= log 3 (Delta_K >= 3 for K != Q)")
        if self.n < 2:
            raise ValueError("bounds need degree n >= 2")
        if not 0 <= self.r1 <= self.n:
            raise ValueError("need 0 <= r1 <= n")
        if self.truncated_prime_sum < 0:
            raise ValueError("truncated prime sum is non-negative")


def beta(t: float) -> float:
    """(1/2)(1/2 + 1/t) e^t log((e^t + 1)/(e^t - 1)), decreasing in t > 0."""
    if not t > 0:
        raise ValueError("beta needs t > 0")
    u = math.exp(-t)
    # e^t log((1+u)/(1-u)) = 2 atanh(u)/u, stable for large t
    ratio = math.atanh(u) / u if u > 1e-8 else 1.0 + u * u / 3.0
    return (0.5 + 1.0 / t) * ratio


_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)


def digamma(x: float) -> float:
    """Psi(x) = Gamma'(x)/Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError("digamma needs x > 0")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for k, b in enumerate(_BERNOULLI, 1):
        series += b / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series


def _check_X(X, lower=9.0):
    if not X > lower:
        raise ValueError(f"bound needs X > {lower}")


def thm1_bound(log_delta, n, X, include_beta=True, constant=THM1_CONSTANT) -> float:
    """Bound on |log kappa_K - f_K(X)|.

    Without the beta factor it is valid for X >= 69; with it, for X > 9.
    """
    if include_beta:
        _check_X(X)
        b = beta(math.log(X / 9.0))
    else:
        if X < 69:
            raise ValueError("the plain bound needs X >= 69")
        b = 1.0
    BoundInputs(log_delta, n, X)
    sx = math.sqrt(X)
    knee = 1.0 + C_KNEE / math.log(X / 9.0)
    main = knee * (1.0 + 2.0 / math.sqrt(log_delta)) ** 2
    tail = C_DEGREE * (n - 1) * b / (sx * log_delta)
    return constant * log_delta / (sx * math.log(3.0 * X)) * (main + tail)


def thm2_delta(log_delta, n, r1, sigma, truncated_prime_sum) -> float:
    if not sigma > 1:
        raise ValueError("sigma must exceed 1")
    return (log_delta
            + ZETA_Q_ZERO_SUM / (2 * sigma - 1)
            + 2.0 / (sigma - 1)
            + 2.0 / sigma
            - 2.0 * truncated_prime_sum
            - n * (math.log(2 * math.pi) - digamma(sigma))
            - r1 * (digamma((sigma + 1) / 2) - digamma(sigma / 2)) / 2)


def thm2_bound(inputs: BoundInputs, constant=THM1_CONSTANT) -> float:
    X, s = inputs.X, inputs.sigma
    _check_X(X)
    if not s > 1:
        raise ValueError("sigma must exceed 1")
    d = thm2_delta(inputs.log_delta, inputs.n, inputs.r1, s, inputs.truncated_prime_sum)
    sx = math.sqrt(X)
    lx9 = math.log(X / 9.0)
    return (constant * (2 * s - 1) / (sx * math.log(3.0 * X))
            * (d * (1.0 + C_KNEE / lx9) + C_DEGREE * (inputs.n - 1) * beta(lx9) / ((2 * s - 1) * sx)))


def corollary_bound(log_delta, n, r1, X, truncated_prime_sum_sigma15) -> float:
    """The sigma = 1.5 form, with the prime sum taken as sum log NP / NP^1.5."""
    _check_X(X)
    BoundInputs(log_delta, n, X, r1, 1.5, truncated_prime_sum_sigma15)
    sx = math.sqrt(X)
    lx9 = math.log(X / 9.0)
    inner = (log_delta + COR_CONST - COR_N * n - COR_R1 * r1 - 2.0 * truncated_prime_sum_sigma15)
    return COR_LEAD / (sx * math.log(3.0 * X)) * (
        COR_DEGREE * n * beta(lx9) / sx + (1.0 + C_KNEE / lx9) * inner)


def optimal_sigma(log_delta) -> float:
    """sigma = 1 + 1/sqrt(log Delta), minimizing (2s-1)(log Delta + 2/(s-1))."""
    return 1.0 + 1.0 / math.sqrt(log_delta)


def minimal_X(log_delta, n, target=0.5 * math.log(2.0), kind="thm1-beta",
              constant=TABLE1_CONSTANT) -> int:
    """Least integer X >= 10 with bound(X) < target.

    The bound is strictly decreasing in X > 9, so an exponential bracket
    followed by bisection finds it.
    """
    if not target > 0:
        raise ValueError("target must be positive")
    if kind == "thm1-beta":
        def bound(X):
            return thm1_bound(log_delta, n, X, True, constant)
        lo = 10
    elif kind == "thm1":
        def bound(X):
            return thm1_bound(log_delta, n, X, False, constant)
        lo = 69
    else:
        raise ValueError(f"unknown bound kind {kind!r}")
    if bound(lo) < target:
        return lo
    hi = lo * 2
    while bound(hi) >= target:
        lo, hi = hi, hi * 2
    # invariant: bound(lo) >= target > bound(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) < target:
            hi = mid
        else:
            lo = mid
    return hi


TABLE1_DISCS = (5, 10, 20, 50, 100, 200)  # log10 of Delta
TABLE1_DEGREES = (2, 6, 10, 20, 50)
TABLE1_FORBIDDEN = frozenset({(5, 10), (5, 20), (5, 50), (10, 20), (10, 50),
                              (20, 20), (20, 50), (50, 50)})
TABLE1_PUBLISHED = {
    5: (1619, 1632, None, None, None),
    10: (3169, 3181, 3194, None, None),
    20: (6838, 6850, 6861, None, None),
    50: (21619, 21629, 21639, 21665, None),
    100: (56332, 56341, 56351, 56374, 56445),
    200: (156151, 156160, 156169, 156191, 156256),
}


def table1(target=0.5 * math.log(2.0), constant=TABLE1_CONSTANT):
    """Rows of (log10 Delta, [minimal X or None per degree])."""
    rows = []
    for e in TABLE1_DISCS:
        L = e * math.log(10.0)
        cells = [None if (e, n) in TABLE1_FORBIDDEN else minimal_X(L, n, target, "thm1-beta", constant)
                 for n in TABLE1_DEGREES]
        rows.append((e, cells))
    return rows
