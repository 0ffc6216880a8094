"""Generalized C1 quadratic splines built on a two-point Hermite subdivision rule.

The package provides the global B-spline basis of the spline space, shape
diagnosis and shape-preserving Hermite interpolation, midpoint refinement
with its corner-cutting algorithm, and two partition-robust approximation
operators (a quasi-interpolant and a Lagrange interpolant).
"""

__version__ = "0.1.0"

from .basis import (
    ControlPolygon,
    GqsSpline,
    HermiteData,
    basis_function,
    basis_support,
    control_polygon,
    evaluate,
    hermite_to_spline,
    knot_derivatives,
    local_coefficients,
    local_control_polygon,
    sample_dyadic,
    scp_abscissae,
    spline_to_hermite,
)
from .errors import GqsError, GqsShapeError, GqsToleranceError, GqsValidationError
from .geometry import (
    GqsSpace,
    beta_from_theta,
    build_space,
    holder_exponent,
    theta_from_beta,
)
from .operators import (
    OrderFit,
    Tridiagonal,
    empirical_order,
    estimate_lagrange_norm,
    lagrange_alternative_system,
    lagrange_from_values,
    lagrange_interpolant,
    lagrange_nodes,
    lagrange_norm_bound,
    lagrange_system,
    quasi_interpolant,
    solve_tridiagonal,
)
from .refine import (
    RefinementStep,
    contraction_factor,
    corner_cut,
    max_coefficient_gap,
    polygon_sequence,
    refine_space,
    refinement_coefficients,
    refinement_matrix,
    refinement_step,
)
from .shape import (
    IntervalData,
    ShapeReport,
    chord_slopes,
    diagnose,
    fit_convex,
    fit_monotone,
    fit_monotone_convex,
    interval_data,
)
from .subdivision import (
    HermiteEndpointState,
    dyadic_table,
    eval_point,
    midpoint_values,
)

__all__ = [
    "ControlPolygon",
    "GqsError",
    "GqsShapeError",
    "GqsSpace",
    "GqsSpline",
    "GqsToleranceError",
    "GqsValidationError",
    "HermiteData",
    "HermiteEndpointState",
    "IntervalData",
    "OrderFit",
    "RefinementStep",
    "ShapeReport",
    "Tridiagonal",
    "basis_function",
    "basis_support",
    "beta_from_theta",
    "build_space",
    "chord_slopes",
    "contraction_factor",
    "control_polygon",
    "corner_cut",
    "diagnose",
    "dyadic_table",
    "empirical_order",
    "estimate_lagrange_norm",
    "eval_point",
    "evaluate",
    "fit_convex",
    "fit_monotone",
    "fit_monotone_convex",
    "hermite_to_spline",
    "holder_exponent",
    "interval_data",
    "knot_derivatives",
    "lagrange_alternative_system",
    "lagrange_from_values",
    "lagrange_interpolant",
    "lagrange_nodes",
    "lagrange_norm_bound",
    "lagrange_system",
    "local_coefficients",
    "local_control_polygon",
    "max_coefficient_gap",
    "midpoint_values",
    "polygon_sequence",
    "quasi_interpolant",
    "refine_space",
    "refinement_coefficients",
    "refinement_matrix",
    "refinement_step",
    "sample_dyadic",
    "scp_abscissae",
    "solve_tridiagonal",
    "spline_to_hermite",
    "theta_from_beta",
]
