"""Banach fixed-point solver for first-order q-difference equations

    y(qz) = (a_1 y + ... + a_p y^p) / (1 + b_1 y + ... + b_t y^t)

with meromorphic coefficients given as expressions in ``z``.
"""

from .domain import HalfPlanes, Rectangle, TheoremMode, default_domain
from .expr import Expression, eval_expr, parse_expr, sup_modulus_on_grid
from .extend import (ContinuationResult, cayley_forward, cayley_inverse,
                     evaluate_at, poincare_f, poincare_residual, replay)
from .operator import (ScalingRule, TruncationPolicy, apply_T, choose_truncation,
                       tail_bound, theoretical_contraction)
from .series import (CoefficientSet, SeriesCoefficients, check_cj_bounds, degree,
                     expand_c_coefficients, monomials, oracle_R_taylor, term_count,
                     weight)
from .solver import (IterationReport, ProblemSpec, SolutionField, ball_membership,
                     empirical_contraction, picard_solve, solve_point)
from .verify import check_hypotheses, check_numeric_lemmas, residual_on_grid

__version__ = "0.1.0"

__all__ = [
    "HalfPlanes",
    "Rectangle",
    "TheoremMode",
    "default_domain",
    "Expression",
    "eval_expr",
    "parse_expr",
    "sup_modulus_on_grid",
    "ContinuationResult",
    "cayley_forward",
    "cayley_inverse",
    "evaluate_at",
    "poincare_f",
    "poincare_residual",
    "replay",
    "ScalingRule",
    "TruncationPolicy",
    "apply_T",
    "choose_truncation",
    "tail_bound",
    "theoretical_contraction",
    "CoefficientSet",
    "SeriesCoefficients",
    "check_cj_bounds",
    "degree",
    "expand_c_coefficients",
    "monomials",
    "oracle_R_taylor",
    "term_count",
    "weight",
    "IterationReport",
    "ProblemSpec",
    "SolutionField",
    "ball_membership",
    "empirical_contraction",
    "picard_solve",
    "solve_point",
    "check_hypotheses",
    "check_numeric_lemmas",
    "residual_on_grid",
]
