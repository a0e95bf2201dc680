"""rankin-local-lab: exact non-archimedean local computations for second-moment
analysis of Rankin-Selberg L-functions.

The package pairs every closed form with an independent oracle: local zeta
integrals against Bruhat-stratum sums, Whittaker integrals against truncated
series, the bivariate residue-cancellation mechanism against fuzzed
counterexample controls, and the degenerate-term cubic against its coefficient
formula.
"""

from .degenerate import (CorrectionReport, DegenerateReport, GlobalZetaData, HFunction,
                         build_G, build_h, correction_report, correction_sum_factor,
                         correction_term, degenerate_limit, symmetry_residuals,
                         taylor_bound_report)
from .exactalg import (PoleError, Poly2, RationalFunction2, poly_div_exact, poly_gcd,
                       power_of_p, rf_add, rf_div, rf_equal, rf_eval, rf_mul)
from .laurent import (CubicPolynomial, LambdaPoly, LaurentSeries2, ls_add, ls_constant_term,
                      ls_flip, ls_from_rational, ls_inverse_regular, ls_mul,
                      ls_singular_part, ls_sub)
from .localdata import (IdealFactorization, PlaceData, Shift, inv_volume_Kq, is_prime_power,
                        norm, omega, volume_K, zeta_local, zeta_q, zeta_scalar)
from .scalars import Scalar, format_scalar, parse_exact
from .specweight import JqLowerReport, WeightReport, jq_lower, local_weight_lower, plancherel_mass
from .whittaker import (SatakeParams, satake_sum, weighted_integral_closed,
                        weighted_integral_oracle, whittaker_norm_sq,
                        whittaker_norm_sq_oracle, whittaker_value)
from .zetaint import (BruhatPoint, LocalZetaResult, correction_factor_rf, f_eval, ftilde_eval,
                      psi_closed, psi_oracle, reg_local_bound, reg_local_closed,
                      reg_local_closed_s_form, reg_local_oracle, rs_local_oracle,
                      rs_local_value)

__version__ = "0.1.0"
