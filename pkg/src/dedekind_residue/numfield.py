"""Number fields given by a monic irreducible integer polynomial."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from sympy import factorint

__all__ = [
    "IntPolynomial",
    "NumberFieldProfile",
    "InvalidFieldError",
    "make_field",
    "rationals",
    "parse_poly",
    "log_abs",
    "poly_discriminant",
    "real_root_count",
    "fundamental_discriminant",
]


class InvalidFieldError(ValueError):
    """The polynomial does not define a number field we can work with."""


@dataclass(frozen=True)
class IntPolynomial:
    """Monic integer polynomial, coefficients in ascending degree."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if len(c) < 2:
            raise InvalidFieldError("polynomial must have degree >= 1")
        if c[-1] != 1:
            raise InvalidFieldError("polynomial must be monic")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self) -> tuple:
        return tuple(i * a for i, a in enumerate(self.coeffs))[1:]

    def __str__(self):
        return ",".join(str(a) for a in self.coeffs)


def parse_poly(text: str) -> IntPolynomial:
    """Parse ``"1,0,1"`` (ascending coefficients) into x^2 + 1."""
    try:
        coeffs = [int(tok) for tok in text.replace(" ", "").split(",") if tok != ""]
    except ValueError as exc:
        raise InvalidFieldError(f"bad polynomial {text!r}: {exc}") from None
    return IntPolynomial(tuple(coeffs))


def log_abs(value: int) -> float:
    """Natural log of ``|value|`` for integers of any size."""
    value = abs(int(value))
    if value == 0:
        raise ValueError("log of zero")
    shift = max(value.bit_length() - 60, 0)
    return math.log(value >> shift) + shift * math.log(2.0)


# -- exact polynomial arithmetic over Q ------------------------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _rem(a, b):
    a = [Fraction(x) for x in a]
    b = _trim(b)
    lb = Fraction(b[-1])
    while len(a) >= len(b) and a:
        c = a[-1] / lb
        s = len(a) - len(b)
        for j, bj in enumerate(b):
            a[s + j] -= c * bj
        a = _trim(a)
    return a


def _resultant(f, g):
    f, g = _trim(f), _trim(g)
    if not f or not g:
        return Fraction(0)
    df, dg = len(f) - 1, len(g) - 1
    if dg == 0:
        return Fraction(g[0]) ** df
    if df == 0:
        return Fraction(f[0]) ** dg
    r = _rem(f, g)
    if not r:
        return Fraction(0)
    dr = len(r) - 1
    # Res(f, g) = (-1)^(df dg) Res(g, f),  Res(g, f) = lc(g)^(df - dr) Res(g, r)
    sign = -1 if (df * dg) % 2 else 1
    return sign * Fraction(g[-1]) ** (df - dr) * _resultant(g, r)


def poly_discriminant(poly: IntPolynomial) -> int:
    n = poly.degree
    if n == 1:
        return 1
    res = _resultant(list(poly.coeffs), list(poly.derivative()))
    assert res.denominator == 1
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * int(res)


def _sign_changes(values):
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_root_count(poly: IntPolynomial) -> int:
    """Number of distinct real roots, by Sturm's theorem in exact arithmetic."""
    seq = [[Fraction(a) for a in poly.coeffs], [Fraction(a) for a in poly.derivative()]]
    while True:
        r = _rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-a for a in r])
    at_pos = [s[-1] for s in seq]
    at_neg = [s[-1] * (-1 if (len(s) - 1) % 2 else 1) for s in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def fundamental_discriminant(disc: int) -> int:
    """Discriminant of the quadratic field Q(sqrt(disc))."""
    if disc == 0:
        raise ValueError("zero discriminant")
    core = -1 if disc < 0 else 1
    for q, e in factorint(abs(disc)).items():
        if e % 2:
            core *= q
    if core == 1:
        raise InvalidFieldError(f"{disc} is a square: polynomial is reducible")
    return core if core % 4 == 1 else 4 * core


def _is_square(v: int) -> bool:
    return v >= 0 and math.isqrt(v) ** 2 == v


# -- profile ---------------------------------------------------------------

@dataclass(frozen=True)
class NumberFieldProfile:
    poly: IntPolynomial
    n: int
    r1: int
    r2: int
    disc_poly: int
    fundamental_disc: Optional[int]
    log_delta_upper: float
    irreducible_certified: bool = field(default=True, compare=False)

    @property
    def is_rational(self) -> bool:
        return self.n == 1

    @property
    def is_quadratic(self) -> bool:
        return self.n == 2


def _first_primes(count):
    out, k = [], 2
    while len(out) < count:
        if all(k % q for q in out if q * q <= k):
            out.append(k)
        k += 1
    return out


def _irreducible_mod_some_prime(poly: IntPolynomial, disc: int, tries: int = 100) -> bool:
    from .kernels import ddf_counts

    n = poly.degree
    ps = np.array([p for p in _first_primes(tries) if disc % p], dtype=np.int64)
    if ps.size == 0:
        return False
    rows = np.array([[a % int(p) for a in poly.coeffs] for p in ps], dtype=np.int64)
    counts = ddf_counts(rows, ps)
    return bool(np.any(counts[:, n] == 1))


def make_field(poly: IntPolynomial | Sequence[int], field_disc: Optional[int] = None) -> NumberFieldProfile:
    """Characterize the field defined by ``poly``.

    ``field_disc`` optionally supplies the exact field discriminant; it must
    divide the polynomial discriminant with a square quotient.
    """
    if not isinstance(poly, IntPolynomial):
        poly = IntPolynomial(tuple(poly))
    n = poly.degree
    if n == 1:
        return NumberFieldProfile(poly, 1, 1, 0, 1, 1, 0.0)
    disc = poly_discriminant(poly)
    if disc == 0:
        raise InvalidFieldError("polynomial is not squarefree (zero discriminant)")
    r1 = real_root_count(poly)
    r2, odd = divmod(n - r1, 2)
    assert odd == 0
    fd = fundamental_discriminant(disc) if n == 2 else None
    if field_disc is not None:
        field_disc = int(field_disc)
        if field_disc == 0 or (field_disc < 0) != (disc < 0):
            raise InvalidFieldError("field discriminant has the wrong sign")
        q, rem = divmod(abs(disc), abs(field_disc))
        if rem or not _is_square(q):
            raise InvalidFieldError(
                f"{field_disc} does not divide {disc} with square quotient")
        if fd is not None and fd != field_disc:
            raise InvalidFieldError(f"quadratic field discriminant is {fd}, not {field_disc}")
        fd = field_disc
    certified = n == 2 or _irreducible_mod_some_prime(poly, disc)
    if not certified:
        warnings.warn(f"could not certify irreducibility of {poly}; assuming it", stacklevel=2)
    log_delta = log_abs(fd) if fd is not None else log_abs(disc)
    return NumberFieldProfile(poly, n, r1, r2, disc, fd, log_delta, certified)


def rationals() -> NumberFieldProfile:
    return make_field(IntPolynomial((0, 1)))
