import cmath
import random
from fractions import Fraction

import pytest

from rankinlab.exactalg import PoleError, RationalFunction2, rf_equal
from rankinlab.localdata import PlaceData, Shift, zeta_scalar
from rankinlab.scalars import Scalar
from rankinlab.whittaker import SatakeParams, rankin_selberg_self_l
from rankinlab.zetaint import (BruhatPoint, correction_factor_rf, f_eval, ftilde_eval,
                               h_local, local_pole_factor, psi_closed, psi_oracle,
                               reg_local_bound, reg_local_closed, reg_local_closed_s_form,
                               reg_local_oracle, rs_local_oracle, rs_local_value)

PLACE = PlaceData(2, 1)
PI0_11 = SatakeParams.unramified_unitary(Scalar.exact(1), Scalar.exact(1))
S_HALF_Z = Shift.of(Fraction(1, 2), 1, 0)


def test_f_eval_indicator():
    assert f_eval(PLACE, BruhatPoint(0, 0), S_HALF_Z).eval_zw(0, 0) == Scalar.exact(1)
    assert f_eval(PLACE, BruhatPoint(0, -1), S_HALF_Z).is_zero()
    assert f_eval(PLACE, BruhatPoint(0, None), S_HALF_Z).eval_zw(0, 0) == Scalar.exact(1)
    # |pi**2|**(1/2+z) = (p**(-1/2-z))**2 = p**(-1) T1**2
    val = f_eval(PLACE, BruhatPoint(2, 0), S_HALF_Z)
    expected = RationalFunction2.monomial(2, 0, Fraction(1, 2), 2)
    assert rf_equal(val, expected)


def test_ftilde_branches():
    # integral c at the symmetric point: zeta(2(1-s))/zeta(1) = 1 at s = 1/2
    flat = ftilde_eval(PLACE, BruhatPoint(0, 0), Shift.of(Fraction(1, 2)))
    assert flat.eval_zw(0, 0) == Scalar.exact(1)
    # c = 0 falls into the integral branch
    assert rf_equal(ftilde_eval(PLACE, BruhatPoint(0, None), S_HALF_Z),
                    ftilde_eval(PLACE, BruhatPoint(0, 7), S_HALF_Z))
    # the non-integral branch carries |c|**(-2(1-s)) = p**(-2*2*(1-s)) at val_c = -2,
    # i.e. the generic-shift identity ratio against val_c = -1 is p**(-2(1-s))
    v1 = ftilde_eval(PLACE, BruhatPoint(0, -1), S_HALF_Z)
    v2 = ftilde_eval(PLACE, BruhatPoint(0, -2), S_HALF_Z)
    # (1-s) = 1/2 - z, so p**(-2(1-s)) = p**(-1) * T1**(-2)
    factor = RationalFunction2.monomial(-2, 0, Fraction(1, 2), 2)
    assert rf_equal(v2, v1 * factor)


def test_psi_values_at_origin():
    # the first integral at the origin is L(1, pi0 x conj pi0)/zeta(2) = 12
    val = psi_closed("i", PLACE, PI0_11).value.eval_zw(0, 0)
    assert val == Scalar.exact(12)
    assert psi_closed("ii", PLACE, PI0_11).value.eval_zw(0, 0) == Scalar.exact(12)
    l_over_zeta = rankin_selberg_self_l(PI0_11, Scalar.exact(Fraction(1, 2))) \
        / zeta_scalar(PLACE, 2)
    assert val == l_over_zeta


def test_psi_closed_factors_structurally():
    sign_map = {"i": (1, 1), "ii": (-1, 1), "iii": (1, -1)}
    for kind, (sz, sw) in sign_map.items():
        which = {"i": 1, "ii": 2, "iii": 3}[kind]
        product = local_pole_factor(PLACE, PI0_11, sz, sw) * h_local(which, PLACE)
        assert rf_equal(psi_closed(kind, PLACE, PI0_11).value, product)
    base = local_pole_factor(PLACE, PI0_11, -1, -1) * h_local(4, PLACE)
    corrected = base * (RationalFunction2.const(1, 2) - correction_factor_rf(PLACE))
    assert rf_equal(psi_closed("iv", PLACE, PI0_11).value, corrected)


@pytest.mark.parametrize("kind", ("i", "ii", "iii", "iv"))
@pytest.mark.parametrize("p,r", ((2, 1), (3, 2), (9, 1)))
def test_psi_oracle_equals_closed(kind, p, r):
    place = PlaceData(p, r)
    for a in (Fraction(1), Fraction(2), Fraction(3, 2)):
        pi0 = SatakeParams.unramified_unitary(Scalar.exact(a))
        closed = psi_closed(kind, place, pi0)
        oracle = psi_oracle(kind, place, pi0)
        assert closed.provenance == "closed-form" and oracle.provenance == "oracle"
        assert rf_equal(closed.value, oracle.value)


def test_psi_oracle_cutoff_validation():
    with pytest.raises(ValueError):
        psi_oracle("i", PLACE, PI0_11, cutoff=2)
    # any admissible cutoff reproduces the same rational function
    a = psi_oracle("iv", PLACE, PI0_11, cutoff=3)
    b = psi_oracle("iv", PLACE, PI0_11, cutoff=9)
    assert rf_equal(a.value, b.value)


def test_psi_requires_dividing_place():
    with pytest.raises(ValueError):
        psi_closed("i", PlaceData(2, 0), PI0_11)


def test_rs_local_value_cases():
    # ramified first argument: numerator 1, plain product of two factors
    ram = SatakeParams.make_ramified(Scalar.exact(1))
    place = PlaceData(4, 1)
    val = rs_local_value(ram, PI0_11, place)
    assert val == (Scalar.exact(1) - Scalar.root(Fraction(1, 4))) ** (-2)
    # all-ones parameters at residue cardinality 4: (1 - 1/4)/(1 - 1/2)**4 = 12
    assert rs_local_value(PI0_11, PI0_11, place) == Scalar.exact(12)


def test_rs_local_oracle_agreement():
    rng = random.Random(3)
    for _ in range(15):
        phi1, phi2 = rng.uniform(0, 2 * cmath.pi), rng.uniform(0, 2 * cmath.pi)
        pi = SatakeParams.unramified_unitary(Scalar.numeric(cmath.exp(1j * phi1)))
        pi0 = SatakeParams.unramified_unitary(Scalar.numeric(cmath.exp(1j * phi2)))
        place = PlaceData(rng.choice((2, 3, 5)), 1)
        closed = rs_local_value(pi, pi0, place).to_complex()
        oracle = rs_local_oracle(pi, pi0, place, terms=10_000).to_complex()
        assert abs(closed - oracle) <= 1e-10 * max(1.0, abs(closed))


def test_reg_local_forms_agree_exactly():
    rng = random.Random(8)
    done = 0
    while done < 30:
        a = Fraction(rng.randrange(1, 7), rng.randrange(1, 7))
        p = rng.choice((2, 3, 5, 9))
        r = rng.randrange(0, 5)
        zf = Fraction(rng.choice((0, 1, 2)), 2)
        if max(a, 1 / a) ** 2 >= Fraction(p) ** (1 + 2 * zf):
            continue
        done += 1
        pi = SatakeParams.unramified_unitary(Scalar.exact(a))
        place = PlaceData(p, r)
        assert reg_local_closed(pi, place, Scalar.exact(zf)) \
            == reg_local_closed_s_form(pi, place, Scalar.exact(zf))


def test_reg_local_degenerate_and_oracle():
    # alpha = (1,1), p=2, r=1, z=0: S(n) = n path
    val = reg_local_closed(PI0_11, PLACE, Scalar.exact(0))
    assert val == reg_local_closed_s_form(PI0_11, PLACE, Scalar.exact(0))
    oracle = reg_local_oracle(PI0_11, PLACE, Scalar.exact(0), terms=5_000)
    assert abs(val.to_complex() - oracle.to_complex()) <= 1e-9


def test_reg_local_r_zero_boundary():
    # at r=0 the boundary term uses W(pi**(-1)) = 0
    pi = SatakeParams.unramified_unitary(Scalar.exact(Fraction(1, 2)))
    place = PlaceData(5, 0)
    closed = reg_local_closed(pi, place, Scalar.exact(Fraction(1, 2)))
    oracle = reg_local_oracle(pi, place, Scalar.exact(Fraction(1, 2)), terms=3_000)
    assert abs(closed.to_complex() - oracle.to_complex()) <= 1e-10


def test_reg_local_ramified_is_single_geometric():
    ram = SatakeParams.make_ramified(Scalar.exact(Fraction(1, 3)))
    place = PlaceData(3, 2)
    closed = reg_local_closed(ram, place, Scalar.exact(0))
    s_form = reg_local_closed_s_form(ram, place, Scalar.exact(0))
    oracle = reg_local_oracle(ram, place, Scalar.exact(0), terms=3_000)
    assert closed == s_form
    assert abs(closed.to_complex() - oracle.to_complex()) <= 1e-10


def test_reg_local_bound_envelope():
    rng = random.Random(23)
    for _ in range(40):
        pi = SatakeParams.unramified_unitary(
            Scalar.numeric(cmath.exp(1j * rng.uniform(0, 2 * cmath.pi))))
        place = PlaceData(rng.choice((2, 3, 5)), rng.randrange(1, 7))
        z = Scalar.numeric(rng.uniform(0, 0.3))
        value = abs(reg_local_closed(pi, place, z).to_complex())
        assert value <= 4.0 * reg_local_bound(pi, place, z)


def test_reg_local_pole_detection():
    # alpha1 = p**(1/2+z) makes the closed form blow up
    pi = SatakeParams.unramified_unitary(Scalar.exact(2))
    with pytest.raises(PoleError):
        reg_local_closed(pi, PlaceData(2, 1), Scalar.exact(Fraction(1, 2)))


def test_psi_rejects_ramified_fixed_representation():
    ram = SatakeParams.make_ramified(Scalar.exact(1))
    with pytest.raises(ValueError, match="unramified"):
        psi_closed("i", PLACE, ram)
    with pytest.raises(ValueError, match="unramified"):
        psi_oracle("ii", PLACE, ram)


def test_rs_local_value_pole():
    # alpha_i * beta_j = p**(1/2) puts a factor exactly on its pole
    pi = SatakeParams.unramified_unitary(Scalar.exact(2))
    pi0 = SatakeParams.unramified_unitary(Scalar.exact(1), Scalar.exact(1))
    with pytest.raises(PoleError):
        rs_local_value(pi, pi0, PlaceData(4, 1))


def test_canonical_form_of_psi_round_trips():
    place = PlaceData(3, 1)
    pi0 = SatakeParams.unramified_unitary(Scalar.exact(Fraction(3, 2)))
    val = psi_closed("iv", place, pi0).value
    num, den = val.canonical()
    rebuilt = RationalFunction2.from_poly(num, 3).with_factor(den)
    assert rf_equal(rebuilt, val)
