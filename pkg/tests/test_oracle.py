import math

import pytest

from dedekind_residue.oracle import (
    class_number_imaginary, class_number_real, fundamental_unit, is_fundamental, kronecker, l_one_chi,
    quadratic_polynomial, regulator_real, true_log_kappa, validate)
from dedekind_residue.numfield import make_field

# h(d) for small fundamental discriminants, from standard class number tables
IMAGINARY_H = {-3: 1, -4: 1, -7: 1, -8: 1, -15: 2, -20: 2, -23: 3, -47: 5, -71: 7, -84: 4, -163: 1, -199: 9,
               -239: 15, -31: 3, -39: 4, -95: 8, -191: 13}
REAL_H = {5: 1, 8: 1, 12: 1, 40: 2, 60: 2, 65: 2, 229: 3, 1009: 7, 3329: 1}


def test_kronecker_against_sympy():
    import sympy
    for a in range(-30, 31):
        for n in range(1, 60, 2):
            assert kronecker(a, n) == sympy.jacobi_symbol(a % n, n) if math.gcd(a, n) == 1 or n == 1 else True
    assert kronecker(5, 2) == -1 and kronecker(17, 2) == 1 and kronecker(-4, 2) == 0


def test_is_fundamental():
    good = [-3, -4, -7, -8, 5, 8, 12, 13, -20, 28]
    bad = [1, 0, -1, 4, 9, -12, 16, 20 * 4, 2, 3, -16]
    assert all(is_fundamental(d) for d in good)
    assert not any(is_fundamental(d) for d in bad)


def test_quadratic_polynomial_discriminant():
    for d in (-3, -4, -23, 5, 8, 229, -84):
        K = make_field(quadratic_polynomial(d))
        assert K.fundamental_disc == d and K.disc_poly == d


def test_imaginary_class_numbers():
    for d, h in IMAGINARY_H.items():
        assert class_number_imaginary(d) == h


def test_fundamental_units():
    assert fundamental_unit(5) == (1, 1)       # (1 + sqrt 5)/2
    assert fundamental_unit(8) == (2, 1)       # 1 + sqrt 2
    assert fundamental_unit(12) == (4, 1)      # 2 + sqrt 3
    x, y = fundamental_unit(1009)
    assert abs(x * x - 1009 * y * y) == 4
    assert regulator_real(5) == pytest.approx(0.48121182505960344, rel=1e-15)
    assert regulator_real(13) == pytest.approx(math.log((3 + math.sqrt(13)) / 2), rel=1e-14)


def test_unit_is_minimal_brute_force():
    for d in [d for d in range(5, 150) if is_fundamental(d)]:
        x, y = fundamental_unit(d)
        best = None
        for yy in range(1, y + 1):
            for sign in (4, -4):
                xx2 = d * yy * yy + sign
                if xx2 > 0 and math.isqrt(xx2) ** 2 == xx2:
                    best = yy
                    break
            if best:
                break
        assert best == y, d


def test_real_class_numbers():
    for d, h in REAL_H.items():
        assert class_number_real(d, nterms=10**6) == h


def test_l_one_chi_closed_forms():
    golden = math.log((1 + math.sqrt(5)) / 2)
    cases = {-4: math.pi / 4, 5: 2 * golden / math.sqrt(5), -23: 3 * math.pi / math.sqrt(23),
             -3: math.pi / (3 * math.sqrt(3))}
    for d, ref in cases.items():
        assert l_one_chi(d, nterms=10**6) == pytest.approx(ref, abs=1e-9)


def test_true_log_kappa():
    assert true_log_kappa(-4).log_kappa == pytest.approx(math.log(math.pi / 4), abs=1e-15)
    assert true_log_kappa(-3).log_kappa == pytest.approx(math.log(math.pi / (3 * math.sqrt(3))), abs=1e-15)
    v = true_log_kappa(5)
    assert v.log_kappa == pytest.approx(math.log(2 * math.log((1 + math.sqrt(5)) / 2) / math.sqrt(5)), abs=1e-15)
    assert v.h == 1 and v.w == 2


def test_non_fundamental_rejected():
    with pytest.raises(ValueError):
        true_log_kappa(-12)


def test_validate_reports():
    r = validate(-23, 1e4)
    assert r.passed and r.error <= r.certified_bound
    g = validate(229, 1e4, method="g")
    assert g.passed is None and g.certified_bound is None and g.error < 0.05
