"""Places, ideal factorizations, congruence-subgroup volumes, and local zeta factors.

The local zeta factor at a place with residue cardinality ``p`` is
``zeta_v(s) = (1 - p**(-s))**(-1)`` (times ``p**(d_exp*s/2)`` at places with a
nontrivial different exponent).  Arguments of the form ``m + a*z + b*w`` are
represented by :class:`Shift` and produce rational functions in
``T1 = p**(-z)``, ``T2 = p**(-w)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import Poly2, RationalFunction2, power_of_p
from .scalars import Scalar


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            while n % d == 0:
                n //= d
            return n == 1
        d += 1
    return True  # n itself prime


@dataclass(frozen=True)
class Shift:
    """Argument m + a*z + b*w of a local factor; m may be half-integral."""

    m: Fraction
    a: int = 0
    b: int = 0

    @classmethod
    def of(cls, m, a: int = 0, b: int = 0) -> "Shift":
        return cls(Fraction(m), a, b)

    def times(self, k: int) -> "Shift":
        return Shift(self.m * k, self.a * k, self.b * k)

    def plus(self, c) -> "Shift":
        return Shift(self.m + Fraction(c), self.a, self.b)

    def is_const(self) -> bool:
        return self.a == 0 and self.b == 0


@dataclass(frozen=True)
class PlaceData:
    """One non-archimedean place: residue cardinality p, exponent r of the
    ideal at this place, and the different exponent d_exp."""

    p: int
    r: int = 0
    d_exp: int = 0

    def __post_init__(self):
        if not is_prime_power(self.p):
            raise ValueError(f"residue cardinality {self.p} is not a prime power >= 2")
        if self.r < 0 or self.d_exp < 0:
            raise ValueError("exponents must be nonnegative")
        if self.r > 0 and self.d_exp != 0:
            raise ValueError(
                f"place with p={self.p}: the ideal is required to be coprime to the "
                f"different (r={self.r} > 0 forces d_exp=0, got d_exp={self.d_exp})"
            )


@dataclass(frozen=True)
class IdealFactorization:
    """The ideal prod p_v**r_v, one entry per place with r_v > 0."""

    places: tuple[PlaceData, ...]

    def __post_init__(self):
        seen = set()
        for pl in self.places:
            if pl.r <= 0:
                raise ValueError("ideal factorization entries need r >= 1")
            if pl.p in seen:
                raise ValueError(f"duplicate residue cardinality {pl.p}")
            seen.add(pl.p)

    @classmethod
    def parse(cls, text: str) -> "IdealFactorization":
        """Parse strings like ``2^3*5^1*49^2`` (cardinality^exponent)."""
        text = text.strip()
        if text in ("", "1"):
            return cls(())
        places = []
        for chunk in text.split("*"):
            chunk = chunk.strip()
            if "^" in chunk:
                base, _, exp = chunk.partition("^")
                places.append(PlaceData(int(base), int(exp)))
            else:
                places.append(PlaceData(int(chunk), 1))
        return cls(tuple(places))

    def __str__(self) -> str:
        if not self.places:
            return "1"
        return "*".join(f"{pl.p}^{pl.r}" for pl in self.places)


def omega(q: IdealFactorization) -> int:
    """Number of distinct prime ideals dividing q."""
    return len(q.places)


def norm(q: IdealFactorization) -> int:
    """N(q) = prod p**r."""
    n = 1
    for pl in q.places:
        n *= pl.p ** pl.r
    return n


def zeta_scalar(place: PlaceData, s) -> Scalar:
    """zeta_v(s) for a constant (half-)integral argument, as an exact Scalar."""
    s = Fraction(s)
    value = (Scalar.exact(1) - power_of_p(place.p, s, -1)).inverse()
    if place.d_exp:
        value = value * power_of_p(place.p, s * place.d_exp / 2)
    return value


def zeta_local(place: PlaceData, shift: Shift) -> RationalFunction2:
    """zeta_v(m + a*z + b*w) as a rational function in T1, T2."""
    p = place.p
    i_lift = max(0, -shift.a)
    j_lift = max(0, -shift.b)
    lift = Poly2.monomial(i_lift, j_lift)
    den = lift - Poly2.monomial(i_lift + shift.a, j_lift + shift.b, power_of_p(p, shift.m, -1))
    out = RationalFunction2.from_poly(lift, p).with_factor(den)
    if place.d_exp:
        # N(d_v)**(s/2) with N(d_v) = p**d_exp
        half = Fraction(place.d_exp, 2)
        coeff = power_of_p(p, shift.m * half)
        ia, jb = shift.a * half, shift.b * half
        if ia.denominator != 1 or jb.denominator != 1:
            raise ValueError("different-place factor needs even shift coefficients")
        out = out * RationalFunction2.monomial(-int(ia), -int(jb), coeff, p)
    return out


def zeta_local_inv(place: PlaceData, shift: Shift) -> RationalFunction2:
    return zeta_local(place, shift).inverse()


def zeta_q(q: IdealFactorization, shift: Shift) -> RationalFunction2:
    """prod over places of q of zeta_v(shift).

    Multi-place products only make sense for constant shifts (each place has
    its own T-variables); single-place ideals accept any shift.
    """
    if not q.places:
        return RationalFunction2.const(1, 2)
    if len(q.places) == 1:
        return zeta_local(q.places[0], shift)
    if not shift.is_const():
        raise ValueError("zeta_q over several places needs a constant shift")
    value = Scalar.exact(1)
    for pl in q.places:
        value = value * zeta_scalar(pl, shift.m)
    return RationalFunction2.const(value, q.places[0].p)


def zeta_q_scalar(q: IdealFactorization, s) -> Scalar:
    value = Scalar.exact(1)
    for pl in q.places:
        value = value * zeta_scalar(pl, s)
    return value


def volume_K(place: PlaceData) -> Scalar:
    """vol(K_{p**r}) = p**(-r) * zeta_v(2)/zeta_v(1) for r >= 1."""
    if place.r < 1:
        raise ValueError("congruence subgroup needs r >= 1")
    p = place.p
    return Scalar.exact(Fraction(p, p + 1) / Fraction(p) ** place.r)


def inv_volume_Kq(q: IdealFactorization) -> Scalar:
    """vol**(-1)(K_q) = N(q) * zeta_q(1)/zeta_q(2)."""
    value = Scalar.exact(norm(q))
    for pl in q.places:
        value = value * zeta_scalar(pl, 1) / zeta_scalar(pl, 2)
    return value
