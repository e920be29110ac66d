"""Twisted Alexander polynomials of the (-2,3,2n+1)-pretzel knots.

The package computes the twisted Alexander polynomial of the pretzel knot
K_n associated to its SL2(C) holonomy-type representations by three
independent routes -- a generic Fox-calculus pipeline, a closed coefficient
formula, and an intermediate grouped form -- cross-validates them, and
reports the genus/fiberedness consequences.
"""

from .errors import (AmbiguousAbelianization, DegenerateContext,
                     InexactDivision, NonConvergence, SingularDenominator,
                     TalexError)
from .laurent import (DeltaResult, LaurentPoly, Mat2, laurent_divide_exact,
                      mat2_determinant, normalize_delta)
from .scalars import DEFAULT_PREC, Scalar
from .fox import (GroupRingElement, Presentation, Relator, Representation,
                  fox_derivative, fox_derivative_of_relator,
                  infer_abelianization, phi_map, wada_polynomial,
                  word_invert, word_multiply)
from .pretzel import (BivarPoly, PretzelContext, alpha_beta, build_context,
                      build_holonomy_rep, context_from_root, eval_r1,
                      presentation_three_gen, presentation_two_gen,
                      r0_polynomial, rep_relation_check, select_root,
                      solve_s_roots)
from .closed_form import (delta_prop32, delta_theorem,
                          denominator_closed_form, derivative_expansion_eq2,
                          genus_fiberedness_report, lambda_coefficients,
                          zeta_vanishing)
from .verify import verify_sweep

__version__ = "0.1.0"

__all__ = [
    "AmbiguousAbelianization", "BivarPoly", "DEFAULT_PREC", "DegenerateContext",
    "DeltaResult", "GroupRingElement", "InexactDivision", "LaurentPoly",
    "Mat2", "NonConvergence", "Presentation", "PretzelContext", "Relator",
    "Representation", "Scalar", "SingularDenominator", "TalexError",
    "alpha_beta", "build_context", "build_holonomy_rep", "context_from_root",
    "delta_prop32", "delta_theorem", "denominator_closed_form",
    "derivative_expansion_eq2", "eval_r1", "fox_derivative",
    "fox_derivative_of_relator", "genus_fiberedness_report",
    "infer_abelianization", "laurent_divide_exact", "lambda_coefficients",
    "mat2_determinant", "normalize_delta", "phi_map",
    "presentation_three_gen", "presentation_two_gen", "r0_polynomial",
    "rep_relation_check", "select_root", "solve_s_roots", "verify_sweep",
    "wada_polynomial", "word_invert", "word_multiply", "zeta_vanishing",
]
