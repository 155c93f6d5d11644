"""Exact q-expansions, Eisenstein level raising, and torsion congruence checks
for semistable elliptic curves over Q."""

__version__ = "0.1.0"

from .curves import WeierstrassCurve, conductor_semistable, reduction_data, torsion_order
from .eisenstein import EisensteinSpec, build_E, closed_form_coeff, e_series
from .newform import af_coeffs
from .series import CoefficientDomain, QExpansion, b_op, reduce_mod, sigma, t_op, u_op
from .verify import verify_curve

__all__ = [
    "CoefficientDomain",
    "EisensteinSpec",
    "QExpansion",
    "WeierstrassCurve",
    "af_coeffs",
    "b_op",
    "build_E",
    "closed_form_coeff",
    "conductor_semistable",
    "e_series",
    "reduce_mod",
    "reduction_data",
    "sigma",
    "t_op",
    "torsion_order",
    "u_op",
    "verify_curve",
]
