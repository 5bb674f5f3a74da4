"""Interpolating extensions on the line with controlled homogeneous
Sobolev seminorm, and the discrete trace functionals equivalent to the
smallest achievable seminorm.

The core pipeline: nearest-point knot selection per site, local
interpolating jets, two-point glue polynomials across the gaps, and a
piecewise-polynomial result that matches the data, is (m-1)-times
continuously differentiable, and depends linearly on the values.
Functionals: gap-weighted divided-difference sums over consecutive
windows and over the best increasing subsequence, a jet compatibility
functional, and the sharp maximal function with its Lebesgue norm.  For
p = 2 an independent spline solver provides the exact minimal seminorm.
"""
from .config import DEFAULT, Tolerances, load_tolerances
from .divdiff import (
    SampledFunction,
    consecutive_divided_differences,
    divided_difference,
    divided_difference_sum_form,
    lagrange,
    linfty_trace_bracket,
    n_infty_functional,
)
from .errors import (
    DuplicatePointsError,
    InputFormatError,
    InsufficientDataError,
    InvalidParameterError,
    NumericalFailureError,
)
from .extension import (
    ExtensionResult,
    best_riesz_family,
    gap_derivative_bound_check,
    hermite_two_point,
    riesz_family_functional,
    whitney_extend,
)
from .functionals import (
    ConstantsTable,
    SharpMaximal,
    TraceReport,
    constants_table,
    deboor_functional,
    sharp_maximal_lp_norm,
    sharp_maximal_point,
    trace_report,
    variational_functional,
)
from .jets import WhitneyField, build_whitney_field, jet_functional, jet_sharp_maximal
from .knots import KnotSet, knot_set, nearest_outside, s_sets
from .oracle import SplineSolution, natural_spline_p2, optimality_check
from .poly import Polynomial, PiecewisePolynomial, lp_piece_integral, seminorm_lmp
from .selftest import random_instance, random_suite, run_selftest

__version__ = "0.1.0"

__all__ = [
    "DEFAULT",
    "Tolerances",
    "load_tolerances",
    "SampledFunction",
    "consecutive_divided_differences",
    "divided_difference",
    "divided_difference_sum_form",
    "lagrange",
    "linfty_trace_bracket",
    "n_infty_functional",
    "DuplicatePointsError",
    "InputFormatError",
    "InsufficientDataError",
    "InvalidParameterError",
    "NumericalFailureError",
    "ExtensionResult",
    "best_riesz_family",
    "gap_derivative_bound_check",
    "hermite_two_point",
    "riesz_family_functional",
    "whitney_extend",
    "ConstantsTable",
    "SharpMaximal",
    "TraceReport",
    "constants_table",
    "deboor_functional",
    "sharp_maximal_lp_norm",
    "sharp_maximal_point",
    "trace_report",
    "variational_functional",
    "WhitneyField",
    "build_whitney_field",
    "jet_functional",
    "jet_sharp_maximal",
    "KnotSet",
    "knot_set",
    "nearest_outside",
    "s_sets",
    "SplineSolution",
    "natural_spline_p2",
    "optimality_check",
    "Polynomial",
    "PiecewisePolynomial",
    "lp_piece_integral",
    "seminorm_lmp",
    "random_instance",
    "random_suite",
    "run_selftest",
    "__version__",
]
