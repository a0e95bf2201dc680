"""Non-archimedean Whittaker newvector values, norms, and weighted integrals.

Values on the diagonal are ``W(diag(pi_v**n)) = p**(-n/2) * S(n+1)`` with
``S(n) = (alpha1**n - alpha2**n)/(alpha1 - alpha2)``; the ``alpha1 == alpha2``
degeneracy is resolved by the limit ``S(n) = n*alpha**(n-1)``.  Half-integer
powers of p stay exact through the quadratic extension in :class:`Scalar`.

The weighted integral ``integral of |W|**2(y) |y|**s  d*y`` has the closed
form ``(1 - |alpha1*alpha2|**2 x**2) / prod_{i,j}(1 - alpha_i*conj(alpha_j)*x)``
with ``x = p**(-1-s)`` (the two-variable Cauchy identity for complete
homogeneous sums); a truncated-sum oracle provides the independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import PoleError, power_of_p
from .localdata import PlaceData, zeta_scalar
from .scalars import SC_ONE, SC_ZERO, Scalar, ScalarLike

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class SatakeParams:
    """Local Satake data (alpha1, alpha2), ramified flag, temperedness bound."""

    alpha1: Scalar
    alpha2: Scalar
    ramified: bool = False
    theta: Fraction = Fraction(7, 64)

    @classmethod
    def unramified_unitary(cls, alpha1: ScalarLike, alpha2: ScalarLike | None = None,
                           theta: Fraction = Fraction(7, 64)) -> "SatakeParams":
        """Unramified with trivial central character: alpha1*alpha2 = 1 enforced."""
        a1 = Scalar.wrap(alpha1)
        a2 = a1.inverse() if alpha2 is None else Scalar.wrap(alpha2)
        prod = a1 * a2
        if prod.is_exact:
            if prod != SC_ONE:
                raise ValueError(f"alpha1*alpha2 = {prod}, expected 1")
        elif not prod.close(SC_ONE, rel_tol=1e-9):
            raise ValueError(f"alpha1*alpha2 = {prod}, expected 1")
        return cls(a1, a2, False, theta)

    @classmethod
    def make_ramified(cls, alpha1: ScalarLike,
                      theta: Fraction = Fraction(7, 64)) -> "SatakeParams":
        """Ramified convention: the second parameter is 0."""
        return cls(Scalar.wrap(alpha1), SC_ZERO, True, theta)

    def __post_init__(self):
        if self.ramified and not self.alpha2.is_zero():
            raise ValueError("ramified parameters require alpha2 = 0")

    def conjugate(self) -> "SatakeParams":
        return SatakeParams(self.alpha1.conjugate(), self.alpha2.conjugate(),
                            self.ramified, self.theta)


def satake_sum(params: SatakeParams, n: int) -> Scalar:
    """S(n) = (alpha1**n - alpha2**n)/(alpha1 - alpha2).

    Defined for all integers n; negative n uses the algebraic continuation
    S(-n) = -S(n)/(alpha1*alpha2)**n, which requires alpha2 != 0.
    """
    a1, a2 = params.alpha1, params.alpha2
    if n < 0:
        delta = a1 * a2
        if delta.is_zero():
            raise ZeroDivisionError("S(n) with n < 0 needs nonzero alpha2")
        return -satake_sum(params, -n) / delta ** (-n)
    if n == 0:
        return SC_ZERO
    diff = a1 - a2
    degenerate = (diff.is_zero() if diff.is_exact
                  else abs(diff.to_complex()) <= DEGENERACY_TOL * max(1.0, abs(a1.to_complex())))
    if degenerate:
        return Scalar.wrap(n) * a1 ** (n - 1)
    return (a1 ** n - a2 ** n) / diff


def whittaker_value(params: SatakeParams, place: PlaceData, n: int) -> Scalar:
    """W(diag(pi**n)): 0 for n < 0, else p**(-n/2) * S(n+1)."""
    if n < 0:
        return SC_ZERO
    return power_of_p(place.p, Fraction(n, 2), -1) * satake_sum(params, n + 1)


def l_factor_product(a: SatakeParams, b: SatakeParams, x: Scalar) -> Scalar:
    """prod_{i,j} (1 - a_i * b_j * x)**(-1), skipping factors with a zero parameter."""
    value = SC_ONE
    for ai in (a.alpha1, a.alpha2):
        if ai.is_zero():
            continue
        for bj in (b.alpha1, b.alpha2):
            if bj.is_zero():
                continue
            factor = SC_ONE - ai * bj * x
            if factor.is_zero() if factor.is_exact else abs(factor.to_complex()) < 1e-13:
                raise PoleError("local L-factor pole")
            value = value / factor
    return value


def rankin_selberg_self_l(params: SatakeParams, x: Scalar) -> Scalar:
    """L-factor of pi tensor its conjugate at x = p**(-s)."""
    return l_factor_product(params, params.conjugate(), x)


def weighted_integral_closed(params: SatakeParams, place: PlaceData,
                             s: ScalarLike) -> Scalar:
    """Closed form of the weighted square integral:
    (1 - |alpha1*alpha2|**2 x**2) * L-product at x = p**(-1-s)."""
    s = Scalar.wrap(s)
    x = _p_power_scalar(place.p, SC_ONE + s)
    delta2 = (params.alpha1 * params.alpha2).abs2()
    numerator = SC_ONE - delta2 * x ** 2
    return numerator * rankin_selberg_self_l(params, x)


def weighted_integral_oracle(params: SatakeParams, place: PlaceData,
                             s: ScalarLike, terms: int = 10_000) -> Scalar:
    """Truncated sum over n of |S(n+1)|**2 * p**(-n(1+s)); numeric, independent
    of the closed form (three-term Satake recursion, no geometric resummation)."""
    s = Scalar.wrap(s).to_complex()
    p = place.p
    a1, a2 = params.alpha1.to_complex(), params.alpha2.to_complex()
    t, delta = a1 + a2, a1 * a2
    x = complex(p) ** (-(1 + s))
    total = 0j
    u_prev, u = 0j, 1j * 0 + 1.0  # S(0), S(1)
    xn = 1.0 + 0j
    for _ in range(terms):
        total += (u * u.conjugate()) * xn
        u_prev, u = u, t * u - delta * u_prev
        xn *= x
    return Scalar.numeric(total)


def _p_power_scalar(p: int, exponent: Scalar) -> Scalar:
    """p**(-exponent), exact when the exponent is a rational with denominator 1 or 2."""
    if exponent.is_rational():
        return power_of_p(p, exponent.as_fraction(), -1)
    return Scalar.numeric(complex(p) ** (-exponent.to_complex()))


def whittaker_norm_sq(params: SatakeParams, place: PlaceData) -> Scalar:
    """Normalised norm ||W||**2 = zeta_v(2)/L_v(1, pi x conj(pi)) * <W, W>.

    Evaluates to 1 for unramified unitary parameters; in the ramified case the
    inner product is the single geometric series (1 - |alpha1|**2/p)**(-1).
    """
    p = place.p
    pinv = Scalar.exact(Fraction(1, p))
    a1_sq = params.alpha1.abs2()
    growth = a1_sq * pinv
    growth_c = growth.to_complex()
    if abs(growth_c) >= 1:
        raise ValueError("norm series diverges: |alpha1|**2 >= p")
    l_value = rankin_selberg_self_l(params, pinv)
    if params.ramified:
        inner = (SC_ONE - growth).inverse()
    else:
        a2_sq = params.alpha2.abs2()
        if abs((a2_sq * pinv).to_complex()) >= 1:
            raise ValueError("norm series diverges: |alpha2|**2 >= p")
        inner = weighted_integral_closed(params, place, 0)
    return zeta_scalar(place, 2) / l_value * inner


def whittaker_norm_sq_oracle(params: SatakeParams, place: PlaceData,
                             terms: int = 10_000) -> Scalar:
    """Truncated-sum version of the normalised norm."""
    p = place.p
    total = 0j
    for n in range(terms):
        w = whittaker_value(params, place, n).to_complex()
        total += w * w.conjugate()
    pinv = Scalar.exact(Fraction(1, p))
    l_value = rankin_selberg_self_l(params, pinv)
    return zeta_scalar(place, 2) / l_value * Scalar.numeric(total)
