"""Midpoint refinement and the global corner-cutting algorithm.

Inserting every interval midpoint (and repeating each interval's beta for its
two halves) embeds the spline space into one of dimension 4n + 2.  Each
coarse B-spline expands into at most four consecutive fine B-splines, and
dually the fine coefficients delta of a spline are convex combinations of
adjacent coarse coefficients gamma:

    delta_{4i-2} = (1/2 - beta_i/4) gamma_{2i-1} + (1/2 + beta_i/4) gamma_{2i}
    delta_{4i-1} = (1/2 + beta_i/4) gamma_{2i-1} + (1/2 - beta_i/4) gamma_{2i}
    delta_{4i}   = (1 + omega_i)/2  gamma_{2i}   + (1 - omega_i)/2 gamma_{2i+1}
    delta_{4i+1} = omega_i/2        gamma_{2i}   + (2 - omega_i)/2 gamma_{2i+1}

with the endpoint convention omega_0 = 1, omega_n = 0 covering the boundary
coefficients through the same formulas.  Iterating the map drives the control
polygon to the spline's graph: the maximal coefficient gap at least halves
per step, and the polygon stays within twice that gap of the spline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import GqsSpline, control_polygon
from .errors import GqsValidationError
from .geometry import GqsSpace, build_space

# Cap on successive corner-cutting steps (coefficient count doubles per step).
POLYGON_LEVEL_CAP = 20


def refine_space(space):
    """The space on knots plus midpoints, with each beta taken twice."""
    n = space.n
    fine_knots = np.empty(2 * n + 1)
    fine_knots[0::2] = space.knots
    fine_knots[1::2] = space.midpoints
    return build_space(fine_knots, np.repeat(space.betas, 2))


def refinement_coefficients(space, k):
    """Expansion of coarse B-spline k over the refined basis.

    Returns a dict mapping fine basis indices to weights; at most four
    entries, all positive, and the weights over any fine index sum to 1
    across the overlapping coarse B-splines.
    """
    dim = space.dimension
    if not (isinstance(k, (int, np.integer)) and 0 <= k < dim):
        raise GqsValidationError(f"basis index must be in 0..{dim - 1}, got {k}")
    betas = space.betas
    n = space.n
    out = {}
    if k % 2 == 0:
        i = k // 2
        om = space.omega[i]
        if i >= 1:
            b = betas[i - 1]
            out[4 * i - 2] = 0.5 + 0.25 * b
            out[4 * i - 1] = 0.5 - 0.25 * b
        out[4 * i] = 0.5 * (1.0 + om)
        if om > 0.0:
            out[4 * i + 1] = 0.5 * om
    else:
        i = (k - 1) // 2
        om = space.omega[i]
        if om < 1.0:
            out[4 * i] = 0.5 * (1.0 - om)
        out[4 * i + 1] = 0.5 * (2.0 - om)
        if i < n:
            b = betas[i]
            out[4 * i + 2] = 0.5 - 0.25 * b
            out[4 * i + 3] = 0.5 + 0.25 * b
    return out


def refinement_matrix(space):
    """Dense (2n + 2, 4n + 2) matrix of all refinement rows."""
    out = np.zeros((space.dimension, 4 * space.n + 2))
    for k in range(space.dimension):
        for j, w in refinement_coefficients(space, k).items():
            out[k, j] = w
    return out


@dataclass(frozen=True)
class RefinementStep:
    """One midpoint-refinement step: both spaces and the expansion matrix.

    Row k of ``matrix`` expands coarse B-spline k over the fine basis; the
    rows are nonnegative and every column sums to 1, so the coefficient map
    of :func:`corner_cut` is ``matrix.T``.
    """

    coarse_space: GqsSpace
    fine_space: GqsSpace
    matrix: np.ndarray


def refinement_step(space):
    """Bundle the refined space with the full refinement matrix."""
    return RefinementStep(space, refine_space(space), refinement_matrix(space))


def corner_cut(spline):
    """Re-expand the spline over the midpoint-refined space.

    The returned spline represents the same function; every new coefficient
    is a convex combination of two consecutive old ones.
    """
    space = spline.space
    n = space.n
    g_even = spline.coeffs[0::2]
    g_odd = spline.coeffs[1::2]
    delta = np.empty(4 * n + 2)

    om = space.omega
    pos = 4 * np.arange(n + 1)
    delta[pos] = 0.5 * (1.0 + om) * g_even + 0.5 * (1.0 - om) * g_odd
    delta[pos + 1] = 0.5 * om * g_even + 0.5 * (2.0 - om) * g_odd

    w_plus = 0.5 + 0.25 * space.betas
    w_minus = 0.5 - 0.25 * space.betas
    left = g_odd[:-1]   # gamma_{2i-1}, i = 1..n
    right = g_even[1:]  # gamma_{2i}
    mid = 4 * np.arange(1, n + 1)
    delta[mid - 2] = w_minus * left + w_plus * right
    delta[mid - 1] = w_plus * left + w_minus * right
    return GqsSpline(refine_space(space), delta)


def max_coefficient_gap(spline):
    """Largest absolute difference between consecutive coefficients."""
    return float(np.abs(np.diff(spline.coeffs)).max())


def contraction_factor(space):
    """Provable per-step decay factor of the maximal coefficient gap.

    Every fine gap is a positive combination of at most two adjacent coarse
    gaps; the worst weight sums are 1 - omega_i/2 + beta_i/4 (left of
    junction i) and 1/2 + omega_i/2 + beta_{i+1}/4 (right of junction i), so

        gap[m+1] <= kappa * gap[m],
        kappa = max(1/2, max_i S_i, max_i S'_i) < 1.

    Refinement repeats the betas and keeps the junction weights at old knots
    (new knots get weight 1/2), so the same kappa works at every step.  Note
    kappa = 1/2 only when every interior junction weight is 1/2 and beta is
    -1 throughout; in particular the boundary terms give kappa >= 3/4 at
    beta = -1, so the gap sequence is NOT guaranteed to halve each step even
    in the classical uniform case (it contracts at rate kappa and the step
    ratios approach 1/2 asymptotically).
    """
    betas = space.betas
    om = space.omega
    left = 1.0 - 0.5 * om[1:] + 0.25 * betas
    right = 0.5 + 0.5 * om[:-1] + 0.25 * betas
    return float(max(0.5, left.max(), right.max()))


def polygon_sequence(spline, levels):
    """Control polygons of ``levels`` successive corner-cutting steps.

    Returns (polygons, gaps): lists of length ``levels + 1`` holding the
    control polygon and the maximal coefficient gap after 0, 1, ..., levels
    steps.  The gap sequence at least halves at every step, and the uniform
    distance between polygon j and the spline is at most twice gaps[j].
    """
    if not (isinstance(levels, (int, np.integer)) and 0 <= levels <= POLYGON_LEVEL_CAP):
        raise GqsValidationError(
            f"levels must be an integer in 0..{POLYGON_LEVEL_CAP}, got {levels}"
        )
    polygons = [control_polygon(spline)]
    gaps = [max_coefficient_gap(spline)]
    current = spline
    for _ in range(levels):
        current = corner_cut(current)
        polygons.append(control_polygon(current))
        gaps.append(max_coefficient_gap(current))
    return polygons, gaps
