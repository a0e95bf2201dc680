"""Assembly of the degenerate-term limit: pole factor from ingested completed-zeta
data, the four inverse-zeta products, residue cancellation, and the cubic
polynomial in lam = log N(q).

The pole factor is

    G(z,w) = N(q)**(z+w) N(d)**(1+2z+2w) / xi(2+2z+2w)
             * xi(1+2z) * xi(1+2w) * Lambda(1+z+w)

with xi the completed Dedekind zeta function and Lambda the completed
Rankin-Selberg L-function of the fixed representation with its contragredient.
Their Laurent data at the relevant points is *ingested*, never computed here.
``N(q)**(z+w)`` is expanded as ``exp(lam*(z+w))`` with lam kept formal, so the
final limit is extracted coefficient-by-coefficient as a polynomial in lam.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .laurent import (CubicPolynomial, LambdaPoly, LaurentSeries2, ls_inverse_regular)
from .localdata import IdealFactorization, PlaceData, omega, zeta_q_scalar, zeta_scalar
from .scalars import SC_ONE, SC_ZERO, Scalar, parse_exact

DEFAULT_DEPTH = 8


@dataclass(frozen=True)
class GlobalZetaData:
    """Ingested Laurent data of the completed zeta functions.

    ``xi_regular[k]`` is the coefficient of (s-1)**k in xi(s) - xi_residue/(s-1);
    ``lambda_regular`` plays the same role for Lambda(s) at s = 1.
    ``xi_at_2_regular[k]`` is the coefficient of u**(k+1) in xi(2+u) (optional;
    without it the denominator factor is treated as the constant xi(2), which
    leaves the leading cubic coefficient untouched).
    """

    xi_residue: Scalar
    xi_regular: tuple[Scalar, ...]
    xi_at_2: Scalar
    lambda_residue: Scalar
    lambda_regular: tuple[Scalar, ...]
    adjoint_l_value: Scalar
    norm_different: int
    xi_at_2_regular: tuple[Scalar, ...] = ()

    def depth(self) -> int:
        return min(len(self.xi_regular), len(self.lambda_regular))

    def validate(self, rel_tol: float = 1e-9) -> None:
        expected = self.xi_residue * self.adjoint_l_value
        if expected.is_exact and self.lambda_residue.is_exact:
            if expected != self.lambda_residue:
                raise ValueError(
                    f"residue factorization failed: {self.lambda_residue} != "
                    f"xi_residue*adjoint = {expected}"
                )
        elif not self.lambda_residue.close(expected, rel_tol=rel_tol):
            raise ValueError(
                f"residue factorization failed beyond tolerance {rel_tol}: "
                f"{self.lambda_residue.to_complex()} vs {expected.to_complex()}"
            )
        for name, value in (("xi_at_2", self.xi_at_2), ("xi_residue", self.xi_residue)):
            v = value.to_complex()
            if v.imag == 0 and v.real <= 0:
                raise ValueError(f"{name} must be positive, got {v}")

    @classmethod
    def from_document(cls, source) -> "GlobalZetaData":
        """Load from a JSON document (path or mapping); numbers may be decimal
        strings or exact "num/den" strings."""
        if isinstance(source, (str, Path)):
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        else:
            doc = dict(source)
        required = ("xi_residue", "xi_regular", "xi_at_2", "lambda_pi0_residue",
                    "lambda_pi0_regular", "adjoint_L_value", "norm_different")
        missing = [key for key in required if key not in doc]
        if missing:
            raise ValueError(f"zeta data document is missing keys: {missing}")

        def scal(v) -> Scalar:
            if isinstance(v, str):
                return parse_exact(v)
            return Scalar.wrap(v if isinstance(v, (int, float)) else float(v))

        data = cls(
            xi_residue=scal(doc["xi_residue"]),
            xi_regular=tuple(scal(v) for v in doc["xi_regular"]),
            xi_at_2=scal(doc["xi_at_2"]),
            lambda_residue=scal(doc["lambda_pi0_residue"]),
            lambda_regular=tuple(scal(v) for v in doc["lambda_pi0_regular"]),
            adjoint_l_value=scal(doc["adjoint_L_value"]),
            norm_different=int(doc["norm_different"]),
            xi_at_2_regular=tuple(scal(v) for v in doc.get("xi_at_2_regular", ())),
        )
        data.validate(rel_tol=float(doc.get("residue_check_tolerance", 1e-9)))
        return data


# -- the four inverse-zeta products -------------------------------------------


@dataclass(frozen=True)
class HFunction:
    which: int
    q: IdealFactorization
    series: LaurentSeries2

    def coeff(self, m: int, n: int) -> Scalar:
        lp = self.series.coeff(m, n)
        if lp.degree() > 0:
            raise AssertionError("h-functions are lam-free")
        return lp.coeff(0)


LogMap = dict[int, Scalar] | None


def _log_scalar(p: int, log_map: LogMap = None) -> Scalar:
    """log p as a Scalar; a log_map entry (e.g. an exact rational surrogate,
    under which every structural identity still holds) takes precedence."""
    if log_map and p in log_map:
        return log_map[p]
    return Scalar.numeric(math.log(p))


def _local_zeta_inverse_series(place: PlaceData, direction: str, sign: int,
                               depth: int, log_map: LogMap = None) -> LaurentSeries2:
    """zeta_v**(-1)(1 + 2*sign*u) = 1 - p**(-1) exp(-2*sign*u*log p) along u."""
    p = place.p
    logp = _log_scalar(p, log_map)
    coeffs: list[Scalar] = []
    for k in range(depth + 1):
        term = Scalar.exact(Fraction(-1, p)) * (Scalar.exact(-2 * sign) * logp) ** k \
            / Scalar.exact(math.factorial(k))
        if k == 0:
            term = term + SC_ONE
        coeffs.append(term)
    return LaurentSeries2.from_direction(coeffs, 0, direction, depth)


def _local_ratio_series(place: PlaceData, depth: int,
                        log_map: LogMap = None) -> LaurentSeries2:
    """zeta_v(1-2z-2w)/zeta_v(1) along the z+w direction."""
    p = place.p
    logp = _log_scalar(p, log_map)
    coeffs: list[Scalar] = []
    for k in range(depth + 1):
        term = Scalar.exact(Fraction(-1, p)) * (Scalar.exact(2) * logp) ** k \
            / Scalar.exact(math.factorial(k))
        if k == 0:
            term = term + SC_ONE
        coeffs.append(term)
    den = LaurentSeries2.from_direction(coeffs, 0, "zw_plus", depth)
    inv = ls_inverse_regular(den)
    return inv.scale(Scalar.exact(Fraction(place.p - 1, place.p)))


def build_h(which: int, q: IdealFactorization, depth: int = DEFAULT_DEPTH,
            log_map: LogMap = None) -> HFunction:
    """Exact Taylor expansion of the product over places of q of:

    which=1: zeta**(-1)(1+2z) zeta**(-1)(1+2w)
    which=2: zeta**(-1)(1)    zeta**(-1)(1+2w)
    which=3: zeta**(-1)(1+2z) zeta**(-1)(1)
    which=4: zeta**(-1)(1-2z) zeta**(-1)(1-2w) zeta(1-2z-2w)/zeta(1)
    """
    if which not in (1, 2, 3, 4):
        raise ValueError("which must be 1..4")
    out = LaurentSeries2.one()
    for place in q.places:
        unit = Scalar.exact(Fraction(place.p - 1, place.p))  # zeta_v(1)**(-1)
        if which == 1:
            local = (_local_zeta_inverse_series(place, "z", 1, depth, log_map)
                     * _local_zeta_inverse_series(place, "w", 1, depth, log_map))
        elif which == 2:
            local = _local_zeta_inverse_series(place, "w", 1, depth, log_map).scale(unit)
        elif which == 3:
            local = _local_zeta_inverse_series(place, "z", 1, depth, log_map).scale(unit)
        else:
            local = (_local_zeta_inverse_series(place, "z", -1, depth, log_map)
                     * _local_zeta_inverse_series(place, "w", -1, depth, log_map)
                     * _local_ratio_series(place, depth, log_map))
        out = out * local
    if out.depth > depth:
        out = LaurentSeries2(out.num, out.poles, depth)
    return HFunction(which, q, out)


def symmetry_residuals(h1: HFunction, h2: HFunction, h3: HFunction,
                       h4: HFunction) -> dict[str, float]:
    """Max |difference| for each of the six cancellation constraints."""
    s1, s2, s3, s4 = (h.series for h in (h1, h2, h3, h4))
    depth = min(s.depth for s in (s1, s2, s3, s4))

    def z_axis(s):
        return {i: v for (i, j), v in s.num.items() if j == 0 and i <= depth}

    def w_axis(s):
        return {j: v for (i, j), v in s.num.items() if i == 0 and j <= depth}

    def diag(s, sign):
        out: dict[int, LambdaPoly] = {}
        for (i, j), v in sorted(s.num.items()):
            if i + j > depth:
                continue
            term = v if sign == 1 or i % 2 == 0 else -v
            out[i + j] = out[i + j] + term if i + j in out else term
        return out

    def residual(a: dict, b: dict) -> float:
        worst = 0.0
        for k in set(a) | set(b):
            diff = a.get(k, LambdaPoly()) - b.get(k, LambdaPoly())
            worst = max(worst, diff.max_abs())
        return worst

    return {
        "h1(z,0)=h3(z,0)": residual(z_axis(s1), z_axis(s3)),
        "h2(z,0)=h4(z,0)": residual(z_axis(s2), z_axis(s4)),
        "h1(0,w)=h2(0,w)": residual(w_axis(s1), w_axis(s2)),
        "h3(0,w)=h4(0,w)": residual(w_axis(s3), w_axis(s4)),
        "h1(-z,z)=h4(-z,z)": residual(diag(s1, -1), diag(s4, -1)),
        "h2(z,z)=h3(z,z)": residual(diag(s2, 1), diag(s3, 1)),
    }


@dataclass(frozen=True)
class TaylorBoundReport:
    m: int
    n: int
    magnitude: float
    omega_power: float
    ratio: float

    def violates(self, frozen_constant: float) -> bool:
        return self.ratio > frozen_constant


def taylor_bound_report(h: HFunction, m: int, n: int) -> TaylorBoundReport:
    """|a_{m,n}| against omega_F(q)**(m+n)."""
    mag = abs(h.coeff(m, n).to_complex())
    om = float(max(omega(h.q), 1)) ** (m + n) if (m + n) else 1.0
    return TaylorBoundReport(m, n, mag, om, mag / om)


# -- the pole factor -----------------------------------------------------------

def build_G(data: GlobalZetaData, q: IdealFactorization, sign_z: int = 1,
            sign_w: int = 1, depth: int = DEFAULT_DEPTH) -> LaurentSeries2:
    """Laurent object for the pole factor; signs route through the flip map.

    Pole exponents are (1,1,1,0) for signs (+,+): simple poles along z, w and
    z+w coming from xi(1+2z), xi(1+2w) and Lambda(1+z+w).
    """
    if data.depth() < depth:
        raise ValueError(f"ingested data depth {data.depth()} < requested {depth}")
    # N(q)**(z+w) = exp(lam*(z+w)) with lam the formal symbol
    g = LaurentSeries2.exp_direction(LambdaPoly.lam(), "zw_plus", depth)
    # N(d)**(1+2z+2w)
    nd = data.norm_different
    if nd != 1:
        g = g * LaurentSeries2.exp_direction(
            LambdaPoly.const(Scalar.numeric(2 * math.log(nd))), "zw_plus", depth)
    # xi(1+2z), xi(1+2w)
    for direction in ("z", "w"):
        coeffs: list = [data.xi_residue / 2]
        coeffs += [data.xi_regular[k] * Scalar.exact(2 ** k) for k in range(depth)]
        g = g * LaurentSeries2.from_direction(coeffs, 1, direction, depth)
    # Lambda(1 + z + w)
    lam_coeffs: list = [data.lambda_residue]
    lam_coeffs += [data.lambda_regular[k] for k in range(depth)]
    g = g * LaurentSeries2.from_direction(lam_coeffs, 1, "zw_plus", depth)
    # 1 / xi(2 + 2z + 2w)
    xi2_coeffs: list = [data.xi_at_2]
    xi2_coeffs += [data.xi_at_2_regular[k] * Scalar.exact(2 ** (k + 1))
                   for k in range(min(depth, len(data.xi_at_2_regular)))]
    xi2 = LaurentSeries2.from_direction(xi2_coeffs, 0, "zw_plus", depth)
    g = g * ls_inverse_regular(xi2)
    g = g.scale(Scalar.exact(nd))
    if sign_z < 0 or sign_w < 0:
        g = g.flip(sign_z < 0, sign_w < 0)
    return g


# -- the correction term and the limit ------------------------------------------

def correction_sum_factor(q: IdealFactorization, log_map: LogMap = None) -> Scalar:
    """sum over places of zeta_v(1)**3 log**3 N(p_v) / N(p_v)**(r_v+1)."""
    total = SC_ZERO
    for pl in q.places:
        total = total + (zeta_scalar(pl, 1) ** 3
                         * _log_scalar(pl.p, log_map) ** 3
                         / Scalar.exact(pl.p ** (pl.r + 1)))
    return total


@dataclass(frozen=True)
class CorrectionReport:
    value: Scalar
    sum_factor: Scalar
    implied_c_cubed: Scalar | None
    xi_residue_cubed: Scalar


def correction_term(data: GlobalZetaData, q: IdealFactorization,
                    depth: int = DEFAULT_DEPTH, tol: float = 1e-9,
                    log_map: LogMap = None) -> Scalar:
    """Limit at the origin of  G(-z,-w) h4(z,w) * 8zw(z+w) * sum-factor.

    The triple pole of the flipped pole factor is cleared by 8zw(z+w), so the
    limit is finite (and lam-free); the proportionality constant comes out of
    the series arithmetic rather than a hard-coded formula.
    """
    return correction_report(data, q, depth, tol, log_map).value


def correction_report(data: GlobalZetaData, q: IdealFactorization,
                      depth: int = DEFAULT_DEPTH, tol: float = 1e-9,
                      log_map: LogMap = None) -> CorrectionReport:
    sum_factor = correction_sum_factor(q, log_map)
    if not q.places:
        return CorrectionReport(SC_ZERO, SC_ZERO, None, data.xi_residue ** 3)
    g_mm = build_G(data, q, -1, -1, depth)
    h4 = build_h(4, q, depth, log_map)
    clearing = LaurentSeries2.from_coeffs({(2, 1): Scalar.exact(8), (1, 2): Scalar.exact(8)})
    product = g_mm * h4.series * clearing
    abs_tol = tol * max(1.0, product.max_abs())
    const = product.constant_term(abs_tol)
    if const.degree() > 0:
        raise AssertionError("correction limit should be lam-free")
    value = const.coeff(0) * sum_factor
    # comparison target: the same limit written as
    # -2 c**3 Lambda_Ad N(d) / (xi(2) zeta_q(1)) * sum-factor with c unidentified
    denom = Scalar.exact(-2) * data.adjoint_l_value * Scalar.exact(data.norm_different) \
        / data.xi_at_2 / zeta_q_scalar(q, 1)
    implied = (const.coeff(0) / denom) if not denom.is_zero() else None
    return CorrectionReport(value, sum_factor, implied, data.xi_residue ** 3)


@dataclass(frozen=True)
class DegenerateReport:
    q: IdealFactorization
    coefficients: CubicPolynomial
    formula_c3: Scalar
    c3_residual: float
    singular_residual: float
    lambda_excess: float
    correction: Scalar

    def as_dict(self) -> dict:
        from .scalars import format_scalar
        return {
            "q": str(self.q),
            "c3": format_scalar(self.coefficients.c3),
            "c2": format_scalar(self.coefficients.c2),
            "c1": format_scalar(self.coefficients.c1),
            "c0": format_scalar(self.coefficients.c0),
            "formula_c3": format_scalar(self.formula_c3),
            "c3_residual": self.c3_residual,
            "singular_residual": self.singular_residual,
            "lambda_excess": self.lambda_excess,
            "correction": format_scalar(self.correction),
        }


def degenerate_limit(data: GlobalZetaData, q: IdealFactorization,
                     depth: int = DEFAULT_DEPTH, tol: float = 1e-9,
                     log_map: LogMap = None) -> DegenerateReport:
    """The normalised limit of the degenerate term as a cubic in lam = log N(q).

    Forms the four sign-flipped products against h1..h4, subtracts the
    correction term, certifies that the combined singular part vanishes,
    extracts the lam-polynomial constant term, and applies the normalisation
    (multiply by N(q) zeta_q(1)**3/zeta_q(2), divide by the inverse volume
    N(q) zeta_q(1)/zeta_q(2), i.e. net zeta_q(1)**2) so the reported cubic
    matches the headline expansion.
    """
    g = build_G(data, q, 1, 1, depth)
    hs = [build_h(which, q, depth, log_map) for which in (1, 2, 3, 4)]
    combo = (g * hs[0].series
             + g.flip(True, False) * hs[1].series
             + g.flip(False, True) * hs[2].series
             + g.flip(True, True) * hs[3].series)
    abs_tol = tol * max(1.0, combo.max_abs())
    regular, singular, singular_mag = combo.split_singular(abs_tol)
    if not singular.is_zero():
        raise AssertionError(
            f"four-term combination has a nonzero singular part "
            f"(max coefficient {singular_mag:.3e}); this signals an implementation bug"
        )
    const = regular.num.get((0, 0), LambdaPoly())
    correction = correction_term(data, q, depth, tol, log_map)
    const = const - LambdaPoly.const(correction)
    # degree > 3 must die by itself; record how close to zero it is
    lambda_excess = max((v.to_complex().__abs__() for k, v in const.c.items() if k > 3),
                        default=0.0)
    normalization = zeta_q_scalar(q, 1) ** 2
    cubic = CubicPolynomial(
        const.coeff(3) * normalization,
        const.coeff(2) * normalization,
        const.coeff(1) * normalization,
        const.coeff(0) * normalization,
    )
    formula_c3 = (data.xi_residue ** 3 * Scalar.exact(data.norm_different)
                  * data.adjoint_l_value / (Scalar.exact(3) * data.xi_at_2))
    c3_res = abs(cubic.c3.to_complex() - formula_c3.to_complex())
    return DegenerateReport(q, cubic, formula_c3, c3_res, singular_mag,
                            lambda_excess, correction)
