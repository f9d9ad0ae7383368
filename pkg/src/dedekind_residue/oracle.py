"""Ground-truth log kappa_K for quadratic fields via the class number formula.

This module is deliberately independent of the estimator code paths: class
numbers come from reduced forms or character sums, regulators from
continued fractions in exact integer arithmetic, and the final assembly
runs in 50-digit mpmath.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from . import kernels
from .bounds import thm1_bound
from .numfield import NumberFieldProfile, make_field
from .estimators import estimate

__all__ = [
    "QuadraticInvariants",
    "ValidationReport",
    "kronecker",
    "is_fundamental",
    "quadratic_polynomial",
    "class_number_imaginary",
    "fundamental_unit",
    "regulator_real",
    "l_one_chi",
    "class_number_real",
    "true_log_kappa",
    "validate",
]

DPS = 50


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _squarefree(m: int) -> bool:
    m = abs(m)
    q = 2
    while q * q <= m:
        if m % (q * q) == 0:
            return False
        q += 1
    return True


def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def quadratic_polynomial(d: int):
    """Monic generator of the maximal order of Q(sqrt d): x^2 - x + (1-d)/4 or x^2 - d/4."""
    if d % 4 == 1:
        return ((1 - d) // 4, -1, 1)
    return (-(d // 4), 0, 1)


def _require_fundamental(d):
    if not is_fundamental(d):
        raise ValueError(f"{d} is not a fundamental discriminant")


def class_number_imaginary(d: int) -> int:
    """Count reduced primitive forms (a, b, c) of discriminant d < 0."""
    _require_fundamental(d)
    if d >= 0:
        raise ValueError("need d < 0")
    h = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def fundamental_unit(d: int):
    """(x, y) with eps = (x + y sqrt d)/2 the fundamental unit, x^2 - d y^2 = +-4.

    Walks the continued fraction of omega = (1 + sqrt d)/2 (d = 1 mod 4) or
    sqrt(d/4); the first convergent p/q whose p - q*omega is a unit gives it.
    """
    _require_fundamental(d)
    if d < 0:
        raise ValueError("need d > 0")
    if d % 4 == 1:
        D, P, Q = d, 1, 2
        trace, normc = 1, (1 - d) // 4  # omega: x^2 - x + (1-d)/4
    else:
        D, P, Q = d // 4, 0, 1
        trace, normc = 0, -(d // 4)
    r = math.isqrt(D)
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for _ in range(10 * D + 100):
        assert Q > 0
        a = (P + r) // Q
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        # Norm(p - q omega) = p^2 - trace p q + normc q^2
        nrm = p_cur * p_cur - trace * p_cur * q_cur + normc * q_cur * q_cur
        if abs(nrm) == 1:
            # eps = p - q omega' with omega' the conjugate
            if d % 4 == 1:
                return 2 * p_cur - q_cur, q_cur
            return 2 * p_cur, q_cur
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError(f"no unit found for d={d}")


def regulator_real(d: int) -> float:
    x, y = fundamental_unit(d)
    with mpmath.workdps(DPS):
        return float(mpmath.log((mpmath.mpf(x) + mpmath.mpf(y) * mpmath.sqrt(d)) / 2))


def _regulator_mp(d: int):
    x, y = fundamental_unit(d)
    return mpmath.log((mpmath.mpf(x) + mpmath.mpf(y) * mpmath.sqrt(d)) / 2)


def _char_table(d: int) -> np.ndarray:
    q = abs(d)
    return np.array([kronecker(d, n) for n in range(q)], dtype=float)


def l_one_chi(d: int, nterms: int = 10**7) -> float:
    """L(1, chi_d) from a truncated character sum plus a first-order tail.

    The cut N is a multiple of |d|, so the partial sums of chi vanish there
    and the tail is -sum_a a chi(a) / (|d| N) up to O(|d|^1.5 / N^2).
    """
    _require_fundamental(d)
    table = _char_table(d)
    q = len(table)
    N = max(nterms // q, 1) * q
    s = kernels.periodic_harmonic_sum(table, N)
    s1 = math.fsum(a * table[a] for a in range(q))
    return s - s1 / (q * N)


def class_number_real(d: int, nterms: int = 10**7) -> int:
    """h = sqrt(d) L(1, chi_d) / (2 R), rounded; the residual must be < 0.1."""
    _require_fundamental(d)
    if d < 0:
        raise ValueError("need d > 0")
    val = math.sqrt(d) * l_one_chi(d, nterms) / (2 * regulator_real(d))
    h = round(val)
    if h < 1 or abs(val - h) >= 0.1:
        raise ArithmeticError(f"class number for d={d} not resolved: {val}")
    return h


@dataclass(frozen=True)
class QuadraticInvariants:
    d: int
    h: int
    regulator: float
    w: int
    kappa: float
    log_kappa: float


def true_log_kappa(d: int) -> QuadraticInvariants:
    _require_fundamental(d)
    with mpmath.workdps(DPS):
        if d < 0:
            h = class_number_imaginary(d)
            w = {-4: 4, -3: 6}.get(d, 2)
            kappa = 2 * mpmath.pi * h / (w * mpmath.sqrt(-d))
            reg = 0.0
        else:
            h = class_number_real(d)
            w = 2
            R = _regulator_mp(d)
            kappa = 2 * h * R / mpmath.sqrt(d)
            reg = float(R)
        return QuadraticInvariants(d, h, reg, w, float(kappa), float(mpmath.log(kappa)))


@dataclass(frozen=True)
class ValidationReport:
    d: int
    method: str
    X: float
    estimate: float
    truth: float
    error: float
    certified_bound: Optional[float]
    passed: Optional[bool]


def validate(field: NumberFieldProfile | int, X, method="f", table=None, threads=1) -> ValidationReport:
    """Compare an estimate with the class-number-formula truth.

    Only the f-estimator has a certified bound here (the beta variant of the
    main bound); for ``a`` and ``g`` the error is reported with
    ``passed=None``.
    """
    if isinstance(field, int):
        field = make_field(quadratic_polynomial(field))
    if field.n != 2 or field.fundamental_disc is None:
        raise ValueError("validation needs a quadratic field")
    d = field.fundamental_disc
    truth = true_log_kappa(d).log_kappa
    est = estimate(field, X, method, table=table, threads=threads).value
    err = abs(est - truth)
    if method == "f":
        b = thm1_bound(field.log_delta_upper, field.n, X, include_beta=True)
        return ValidationReport(d, method, X, est, truth, err, b, err <= b)
    return ValidationReport(d, method, X, est, truth, err, None, None)
