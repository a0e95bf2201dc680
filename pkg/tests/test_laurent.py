import math
import random
from fractions import Fraction

import pytest

from rankinlab.laurent import (SYMMETRY_BREAKERS, CubicPolynomial, LambdaPoly,
                               LaurentSeries2, break_one_symmetry, four_term_combination,
                               ls_from_rational, ls_inverse_regular, pole_factor_series,
                               random_simple_pole_coeffs, random_symmetric_quadruple)
from rankinlab.localdata import PlaceData, Shift, zeta_local
from rankinlab.scalars import Scalar


def _poly_series(coeffs, poles=(0, 0, 0, 0)):
    return LaurentSeries2.from_coeffs(
        {m: Scalar.exact(v) for m, v in coeffs.items()}, poles)


def test_unit_series_from_rational():
    place = PlaceData(2, 1)
    f = zeta_local(place, Shift.of(1, 2, 0))
    # exact log surrogate keeps the whole expansion in rational arithmetic,
    # so the cancellation is exact term by term
    one = ls_from_rational(f * f.inverse(), 8, log_p=Scalar.exact(Fraction(7, 10)))
    assert one.poles == (0, 0, 0, 0)
    assert one.coeff(0, 0).coeff(0) == Scalar.exact(1)
    assert all(m == (0, 0) for m in one.num)


def test_simple_pole_along_diagonal_direction():
    # zeta_v(2z+2w) = (1 - exp(-2(z+w) log 2))**(-1) has a simple pole
    # along z+w with leading coefficient 1/(2 log 2)
    place = PlaceData(2, 1)
    ser = ls_from_rational(zeta_local(place, Shift.of(0, 2, 2)), 8)
    assert ser.poles == (0, 0, 1, 0)
    lead = ser.coeff(0, 0).coeff(0).to_complex()
    assert abs(lead - 1 / (2 * math.log(2))) < 1e-14


def test_regular_expansion_coefficients():
    place = PlaceData(2, 1)
    ser = ls_from_rational(zeta_local(place, Shift.of(1, 2, 0)).inverse(), 8)
    assert ser.poles == (0, 0, 0, 0)
    assert abs(ser.coeff(0, 0).coeff(0).to_complex() - 0.5) < 1e-15
    assert abs(ser.coeff(1, 0).coeff(0).to_complex() - math.log(2)) < 1e-14


def test_non_divisor_denominator_rejected():
    # denominator vanishing at T1 = 1 only through (1 - T1**2) factors is fine;
    # 2 - T1 - T2 vanishes at the origin along z+w... but (2 - 3*T1 + T2**2)
    # vanishes at the origin in a non-divisor direction
    from rankinlab.exactalg import Poly2, RationalFunction2
    bad = RationalFunction2.from_poly(Poly2.const(1), 2).with_factor(
        Poly2.const(2) - Poly2.monomial(1, 0, 3) + Poly2.monomial(0, 2))
    with pytest.raises((ValueError, ZeroDivisionError)):
        ls_from_rational(bad, 8)


def test_mul_and_add_pole_bookkeeping():
    a = _poly_series({(0, 0): Fraction(1)}, (1, 0, 0, 0))  # 1/z
    b = _poly_series({(0, 0): Fraction(1)}, (0, 1, 0, 0))  # 1/w
    prod = a * b
    assert prod.poles == (1, 1, 0, 0)
    x = _poly_series({(0, 0): Fraction(1)}, (1, 1, 1, 0))
    assert (x - x).is_zero()
    c = _poly_series({(1, 0): Fraction(2)})
    assert (c * LaurentSeries2.one()).num == c.num


def test_flip_involution_and_signs():
    base = _poly_series({(0, 0): Fraction(1)}, (1, 1, 1, 0))  # 1/(zw(z+w))
    both = base.flip(True, True)
    assert both.poles == (1, 1, 1, 0)
    assert both.coeff(0, 0).coeff(0) == Scalar.exact(-1)
    assert base.flip(True, False).flip(True, False).num == base.num
    # single flip swaps the z+w and z-w divisors
    zw = _poly_series({(0, 0): Fraction(1)}, (0, 0, 0, 1))  # 1/(z-w)
    assert zw.flip(False, True).poles == (0, 0, 1, 0)
    assert zw.flip(False, True).coeff(0, 0).coeff(0) == Scalar.exact(1)


def test_singular_part_cases():
    regular = _poly_series({(0, 0): Fraction(3), (1, 1): Fraction(2)})
    assert regular.singular_part().is_zero()
    s = _poly_series({(0, 0): Fraction(1), (1, 0): Fraction(5)}, (1, 0, 0, 0))
    reg, sing, _ = s.split_singular()
    assert sing.poles == (1, 0, 0, 0) and sing.coeff(0, 0).coeff(0) == Scalar.exact(1)
    assert reg.coeff(0, 0).coeff(0) == Scalar.exact(5)


def test_model_four_term_combination_vanishes():
    base = _poly_series({(0, 0): Fraction(1)}, (1, 1, 1, 0))
    combo = (base + base.flip(True, False) + base.flip(False, True)
             + base.flip(True, True))
    assert combo.singular_part().is_zero()
    assert combo.constant_term().is_zero()


def test_constant_term_and_cubic():
    assert LaurentSeries2.one().constant_term().coeff(0) == Scalar.exact(1)
    lam3 = LambdaPoly.lam(Fraction(1, 24), 3)
    lone = LaurentSeries2.from_coeffs(
        {(m, 3 - m): lam3.scale(math.comb(3, m)) for m in range(4)}, (1, 1, 1, 0))
    with pytest.raises(ValueError):
        lone.constant_term()
    sym = (lone + lone.flip(True, False) + lone.flip(False, True)
           + lone.flip(True, True))
    ct = sym.constant_term()
    assert ct.coeff(3) == Scalar.exact(Fraction(1, 3))
    cubic = CubicPolynomial.from_lambda_poly(ct)
    assert cubic.c3 == Scalar.exact(Fraction(1, 3)) and cubic.c0.is_zero()


def test_depth_truncation_guards_certificates():
    # terms beyond the declared validity window are dropped at construction
    s = LaurentSeries2.from_coeffs({(0, 0): Fraction(1), (5, 5): Fraction(7)},
                                   depth=4)
    assert (5, 5) not in s.num


def test_eval_matches_rational_function():
    place = PlaceData(3, 1)
    f = zeta_local(place, Shift.of(1, 2, 0)).inverse() * zeta_local(place, Shift.of(2, 2, 2))
    ser = ls_from_rational(f, 8)
    z, w = 1e-4, 2e-4
    lhs = ser.eval(z, w)
    rhs = f.eval_zw(Scalar.numeric(z), Scalar.numeric(w)).to_complex()
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_series_inverse_round_trip():
    s = _poly_series({(0, 0): Fraction(2), (1, 0): Fraction(1, 3), (0, 2): Fraction(-1)})
    s = LaurentSeries2(s.num, s.poles, 8)
    inv = ls_inverse_regular(s)
    prod = s * inv
    assert prod.coeff(0, 0).coeff(0) == Scalar.exact(1)
    assert all(v.is_zero() for m, v in prod.num.items() if m != (0, 0))


def test_random_quadruples_cancel():
    rng = random.Random(99)
    for _ in range(25):
        g = pole_factor_series(random_simple_pole_coeffs(rng, 8),
                               random_simple_pole_coeffs(rng, 8), 8)
        quadruple = random_symmetric_quadruple(rng)
        assert four_term_combination(g, quadruple, 8).singular_part().is_zero()


@pytest.mark.parametrize("constraint", sorted(SYMMETRY_BREAKERS))
def test_single_broken_constraint_is_detected(constraint):
    rng = random.Random(hash(constraint) % (2 ** 31))
    quadruple = break_one_symmetry(random_symmetric_quadruple(rng), constraint, rng)
    g = pole_factor_series(random_simple_pole_coeffs(rng, 8),
                           random_simple_pole_coeffs(rng, 8), 8)
    assert not four_term_combination(g, quadruple, 8).singular_part().is_zero()


def test_from_rational_depth_guard():
    # three pole directions need depth >= 6
    place = PlaceData(2, 1)
    f = (zeta_local(place, Shift.of(0, 2, 0)) * zeta_local(place, Shift.of(0, 0, 2))
         * zeta_local(place, Shift.of(0, 2, 2)))
    with pytest.raises(ValueError, match="too shallow"):
        ls_from_rational(f, 4)
    ser = ls_from_rational(f, 6)
    assert ser.poles == (1, 1, 1, 0)


def test_flip_agrees_with_argument_substitution():
    # evaluating a flipped series equals evaluating the original at the
    # sign-flipped arguments, for every flip combination and pole pattern
    rng = random.Random(31)
    z, w = 0.013, -0.019
    for _ in range(20):
        coeffs = {(rng.randrange(3), rng.randrange(3)):
                  Fraction(rng.randrange(-5, 6), rng.randrange(1, 4)) for _ in range(4)}
        poles = (rng.randrange(2), rng.randrange(2), rng.randrange(2), rng.randrange(2))
        s = _poly_series({m: v for m, v in coeffs.items() if v}, poles)
        if s.is_zero():
            continue
        base = s.eval(z, w)
        for fz in (False, True):
            for fw in (False, True):
                flipped = s.flip(fz, fw)
                direct = s.eval(-z if fz else z, -w if fw else w)
                assert abs(flipped.eval(z, w) - direct) <= 1e-12 * max(1.0, abs(base))


def test_insufficient_depth_is_an_error():
    shallow = LaurentSeries2.from_coeffs(
        {(0, 0): Fraction(1), (1, 1): Fraction(1)}, (1, 1, 1, 0), depth=2)
    with pytest.raises(ValueError, match="insufficient truncation depth"):
        shallow.split_singular()
