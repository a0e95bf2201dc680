"""Field scalars: exact rationals (optionally extended by a square root) or complex floats.

A :class:`Scalar` is either

* **exact** -- ``a + b*sqrt(base)`` with ``a``, ``b``, ``base`` rational, used
  for lossless arithmetic.  The square-root part exists so that half-integer
  powers of a residue cardinality ``p`` (e.g. ``p**(-1/2)`` from Whittaker
  normalisation) stay exact: they live in the quadratic extension
  ``Q(sqrt(1/p))``.  If ``base`` is a perfect square the root is folded back
  into the rational part, so e.g. ``sqrt(1/4)`` is just ``1/2``.
* **numeric** -- a complex double.

Mixed operations promote exact to numeric.  Equality of numeric scalars is
deliberately not defined through ``==``; use :meth:`Scalar.close` with an
explicit tolerance.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Union

RatLike = Union[int, Fraction]
ScalarLike = Union["Scalar", int, Fraction, float, complex]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _isqrt_exact(n: int) -> int | None:
    """Integer square root of n if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    rn = _isqrt_exact(q.numerator)
    rd = _isqrt_exact(q.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


class Scalar:
    """Immutable field element, exact (``a + b*sqrt(base)``) or numeric (complex)."""

    __slots__ = ("a", "b", "base", "z")

    def __init__(self, a: Fraction, b: Fraction, base: Fraction | None, z: complex | None):
        # Use the classmethod constructors; this raw form performs no checks.
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "z", z)

    def __setattr__(self, *_):
        raise AttributeError("Scalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def exact(cls, value: RatLike) -> "Scalar":
        return cls(Fraction(value), _ZERO, None, None)

    @classmethod
    def root(cls, base: RatLike, coeff: RatLike = 1) -> "Scalar":
        """coeff * sqrt(base), exact.  base must be positive.

        The base is canonicalised to a squarefree integer (sqrt(a/b) =
        sqrt(ab)/b, square factors extracted), so equal values always share a
        representation and mix freely in arithmetic.
        """
        base = Fraction(base)
        coeff = Fraction(coeff)
        if base <= 0:
            raise ValueError("square-root base must be positive")
        if coeff == 0:
            return cls(_ZERO, _ZERO, None, None)
        # sqrt(num/den) = sqrt(num*den)/den
        coeff = coeff / base.denominator
        n = base.numerator * base.denominator
        square, free = 1, 1
        d = 2
        while d * d <= n:
            while n % (d * d) == 0:
                square *= d
                n //= d * d
            if n % d == 0:
                free *= d
                n //= d
            d += 1
        free *= n
        coeff = coeff * square
        if free == 1:
            return cls(coeff, _ZERO, None, None)
        return cls(_ZERO, coeff, Fraction(free), None)

    @classmethod
    def numeric(cls, value: complex) -> "Scalar":
        return cls(_ZERO, _ZERO, None, complex(value))

    @classmethod
    def wrap(cls, value: ScalarLike) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.exact(value)
        if isinstance(value, (float, complex)):
            return cls.numeric(value)
        raise TypeError(f"cannot build Scalar from {type(value).__name__}")

    # -- predicates --------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.z is None

    def is_zero(self) -> bool:
        """True for exact zero, or for a numeric value that is bitwise zero."""
        if self.z is None:
            return self.a == 0 and self.b == 0
        return self.z == 0

    def is_rational(self) -> bool:
        return self.z is None and self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a plain rational: {self}")
        return self.a

    # -- conversions -------------------------------------------------------

    def to_complex(self) -> complex:
        if self.z is not None:
            return self.z
        val = float(self.a)
        if self.b:
            val += float(self.b) * math.sqrt(float(self.base))
        return complex(val)

    # -- arithmetic --------------------------------------------------------

    def _check_base(self, other: "Scalar") -> Fraction | None:
        if self.base is not None and other.base is not None and self.base != other.base:
            raise ValueError(f"incompatible root bases {self.base} and {other.base}")
        return self.base if self.base is not None else other.base

    def __add__(self, other: ScalarLike) -> "Scalar":
        other = Scalar.wrap(other)
        if self.z is not None or other.z is not None:
            return Scalar.numeric(self.to_complex() + other.to_complex())
        base = self._check_base(other)
        b = self.b + other.b
        return Scalar(self.a + other.a, b, base if b else None, None)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        if self.z is not None:
            return Scalar.numeric(-self.z)
        return Scalar(-self.a, -self.b, self.base, None)

    def __sub__(self, other: ScalarLike) -> "Scalar":
        return self + (-Scalar.wrap(other))

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return Scalar.wrap(other) + (-self)

    def __mul__(self, other: ScalarLike) -> "Scalar":
        other = Scalar.wrap(other)
        if self.z is not None or other.z is not None:
            return Scalar.numeric(self.to_complex() * other.to_complex())
        if self.b == 0 and other.b == 0:
            return Scalar(self.a * other.a, _ZERO, None, None)
        base = self._check_base(other)
        a = self.a * other.a
        if self.b and other.b:
            a += self.b * other.b * base
        b = self.a * other.b + self.b * other.a
        return Scalar(a, b, base if b else None, None)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.z is not None:
            return Scalar.numeric(1.0 / self.z)
        if self.b == 0:
            if self.a == 0:
                raise ZeroDivisionError("inverse of exact zero")
            return Scalar.exact(1 / self.a)
        # (a + b sqrt(m))^-1 = (a - b sqrt(m)) / (a^2 - b^2 m)
        norm = self.a * self.a - self.b * self.b * self.base
        if norm == 0:
            raise ZeroDivisionError("inverse of exact zero in quadratic extension")
        b = -self.b / norm
        return Scalar(self.a / norm, b, self.base if b else None, None)

    def __truediv__(self, other: ScalarLike) -> "Scalar":
        return self * Scalar.wrap(other).inverse()

    def __rtruediv__(self, other: ScalarLike) -> "Scalar":
        return Scalar.wrap(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            raise TypeError("Scalar powers must be integers")
        if n < 0:
            return self.inverse() ** (-n)
        result = Scalar.exact(1)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    def conjugate(self) -> "Scalar":
        """Complex conjugate; the identity on exact (real) scalars."""
        if self.z is not None:
            return Scalar.numeric(self.z.conjugate())
        return self

    def abs2(self) -> "Scalar":
        """|x|^2 = x * conj(x)."""
        return self * self.conjugate()

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.wrap(other)
        if self.z is not None or other.z is not None:
            raise ValueError("numeric Scalars compare only via close(); pass a tolerance")
        return self.a == other.a and self.b == other.b and (
            self.b == 0 or self.base == other.base
        )

    def __hash__(self):
        if self.z is not None:
            raise TypeError("numeric Scalars are unhashable")
        return hash((self.a, self.b, self.base))

    def close(self, other: ScalarLike, rel_tol: float = 1e-12, abs_tol: float = 1e-15) -> bool:
        """Tolerance comparison, the only equality defined for numeric scalars."""
        other = Scalar.wrap(other)
        if self.z is None and other.z is None:
            return self == other
        return cmath.isclose(self.to_complex(), other.to_complex(),
                             rel_tol=rel_tol, abs_tol=abs_tol)

    # -- formatting --------------------------------------------------------

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        return format_scalar(self)


def format_scalar(s: Scalar) -> str:
    """Serialise a scalar: exact values as ``num/den`` (with an explicit
    ``num/den*sqrt(m)`` part in the root extension), numeric values as
    complex literals."""
    if s.z is not None:
        return repr(s.z)
    if s.b == 0:
        return str(s.a)
    parts = []
    if s.a:
        parts.append(str(s.a))
    root = f"sqrt({s.base})"
    parts.append(root if s.b == 1 else f"{s.b}*{root}")
    return "+".join(parts).replace("+-", "-")


def parse_exact(text: str) -> Scalar:
    """Parse ``num/den`` or a decimal string into a Scalar.

    Rational strings give exact scalars, anything with a decimal point or
    exponent gives a numeric scalar.
    """
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Scalar.exact(Fraction(int(num), int(den)))
    if any(ch in text for ch in ".eE") and not text.lstrip("+-").isdigit():
        return Scalar.numeric(complex(float(text)))
    return Scalar.exact(Fraction(int(text)))


SC_ZERO = Scalar.exact(0)
SC_ONE = Scalar.exact(1)
