"""Approximation operators: a quasi-interpolant and a Lagrange interpolant.

Both operators reproduce affine functions exactly and have uniform norms
bounded independently of the partition.

The quasi-interpolant samples the target at the control abscissae:
coefficient 2i is f(xi_i) and coefficient 2i+1 is f(eta_i), so its norm is 1
and it inherits the monotonicity/convexity of the samples.

The Lagrange interpolant matches f at the two domain ends and at the two
quarter points of every interval.  Writing m'_i and m''_i for the midpoints
of the left and right halves of interval i, the interior coefficients solve
the strictly diagonally dominant tridiagonal system (1 <= i <= n)

    w_{i-1} g_{2i-2} + (3 - w_{i-1} - b_i/2) g_{2i-1} + (1 + b_i/2) g_{2i}
        = 4 f(m'_i)
    (1 + b_i/2) g_{2i-1} + (2 + w_i - b_i/2) g_{2i} + (1 - w_i) g_{2i+1}
        = 4 f(m''_i)

with g_0 = f(a), g_{2n+1} = f(b) (w = omega, b = beta).  A second, equivalent
assembly works in the per-interval coefficient lists and eliminates the
junction unknowns through the C^1 matching rule

    lambda_{i-1} (a_{i-1,3} - a_{i-1,2}) = lambda_i (a_{i,1} - a_{i,0}),
    lambda_i = 1 / (theta_i h_i),

which yields junction weights lambda_{i-1} / (lambda_{i-1} + lambda_i); it is
kept as an independent cross-check of the primary assembly.  Note the
per-interval scaling 1 / h_i in lambda_i: the h-free ratio 2 (beta_i - 1) /
beta_i gives the same weights only on uniform partitions and breaks the C^1
junction otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import GqsSpline, sample_dyadic
from .errors import GqsError, GqsValidationError
from .geometry import build_space


@dataclass
class Tridiagonal:
    """Bands and right-hand side of a tridiagonal system.

    ``sub[j]`` multiplies x[j-1] (sub[0] unused, kept 0) and ``sup[j]``
    multiplies x[j+1] (sup[-1] unused, kept 0).
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def dominance_margins(self):
        """Row-wise |diag| - |sub| - |sup|; positive rows are dominant."""
        return np.abs(self.diag) - np.abs(self.sub) - np.abs(self.sup)


def solve_tridiagonal(system):
    """Solve by elimination without pivoting (Thomas algorithm).

    Requires strict row diagonal dominance; a violation signals a bug in the
    assembly upstream, not a user fault, and raises :class:`GqsError`.
    """
    if np.any(system.dominance_margins() <= 0.0):
        raise GqsError("tridiagonal system is not strictly diagonally dominant")
    sub, diag, sup, rhs = system.sub, system.diag, system.sup, system.rhs
    m = diag.size
    cp = np.empty(m)
    dp = np.empty(m)
    cp[0] = sup[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for j in range(1, m):
        den = diag[j] - sub[j] * cp[j - 1]
        cp[j] = sup[j] / den
        dp[j] = (rhs[j] - sub[j] * dp[j - 1]) / den
    x = np.empty(m)
    x[-1] = dp[-1]
    for j in range(m - 2, -1, -1):
        x[j] = dp[j] - cp[j] * x[j + 1]
    return x


def _sample(f, points):
    points = np.asarray(points, dtype=float)
    try:
        vals = np.asarray(f(points), dtype=float)
        if vals.shape != points.shape:
            raise TypeError("not vectorized")
    except GqsError:
        raise
    except Exception:
        # scalar-only callables (e.g. math.sin) get evaluated pointwise
        vals = np.array([float(f(t)) for t in points])
    if not np.all(np.isfinite(vals)):
        raise GqsValidationError("function returned non-finite values at required points")
    return vals


def quasi_interpolant(space, f):
    """Spline whose coefficients are the samples f(xi_i), f(eta_i).

    Exact on affine functions; preserves monotonicity and convexity of f.
    """
    coeffs = np.empty(space.dimension)
    coeffs[0::2] = _sample(f, space.xi)
    coeffs[1::2] = _sample(f, space.eta)
    return GqsSpline(space, coeffs)


def lagrange_nodes(space):
    """The 2n + 2 interpolation nodes: a, the quarter points of every
    interval (m'_i then m''_i), and b."""
    knots = space.knots
    h = space.lengths
    nodes = np.empty(space.dimension)
    nodes[0] = knots[0]
    nodes[1:-1:2] = knots[:-1] + 0.25 * h
    nodes[2:-1:2] = knots[:-1] + 0.75 * h
    nodes[-1] = knots[-1]
    return nodes


def lagrange_system(space, node_values):
    """Assemble the tridiagonal system for the interior coefficients.

    ``node_values`` are f at :func:`lagrange_nodes` in order.  The unknowns
    are gamma_1 .. gamma_{2n}; the known gamma_0 = f(a) and
    gamma_{2n+1} = f(b) are folded into the right-hand side.
    """
    vals = np.asarray(node_values, dtype=float)
    if vals.shape != (space.dimension,):
        raise GqsValidationError(f"need {space.dimension} node values, got {vals.shape}")
    n = space.n
    betas = space.betas
    om = space.omega
    m = 2 * n
    sub = np.zeros(m)
    diag = np.empty(m)
    sup = np.zeros(m)
    rhs = 4.0 * vals[1:-1]

    odd = np.arange(0, m, 2)   # rows for m'_i, i = odd//2 + 1
    even = np.arange(1, m, 2)  # rows for m''_i
    diag[odd] = 3.0 - om[:-1] - 0.5 * betas
    sup[odd] = 1.0 + 0.5 * betas
    sub[even] = 1.0 + 0.5 * betas
    diag[even] = 2.0 + om[1:] - 0.5 * betas
    sub[odd[1:]] = om[1:-1]
    sup[even[:-1]] = 1.0 - om[1:-1]
    rhs[0] -= om[0] * vals[0]
    rhs[-1] -= (1.0 - om[-1]) * vals[-1]
    return Tridiagonal(sub, diag, sup, rhs)


def lagrange_from_values(space, node_values):
    """Interpolating spline from values given directly at the nodes."""
    vals = np.asarray(node_values, dtype=float)
    interior = solve_tridiagonal(lagrange_system(space, vals))
    coeffs = np.concatenate([[vals[0]], interior, [vals[-1]]])
    return GqsSpline(space, coeffs)


def lagrange_interpolant(space, f):
    """The unique spline matching f at the ends and all quarter points."""
    return lagrange_from_values(space, _sample(f, lagrange_nodes(space)))


def lagrange_alternative_system(space, f):
    """Cross-check path for the Lagrange interpolant.

    Assembles the collocation equations in the per-interval coefficient
    lists, eliminating the junction unknowns through the C^1 matching rule
    with weights built from lambda_i = 1 / (theta_i h_i).  Produces the same
    spline as :func:`lagrange_interpolant` up to rounding.
    """
    vals = _sample(f, lagrange_nodes(space))
    n = space.n
    betas = space.betas
    lam = 1.0 / (space.theta * space.lengths)
    fa, fb = vals[0], vals[-1]

    m = 2 * n
    sub = np.zeros(m)
    diag = np.empty(m)
    sup = np.zeros(m)
    rhs = 4.0 * vals[1:-1]
    for i in range(1, n + 1):
        r = 2 * i - 2  # row for m'_i
        if i == 1:
            diag[r] = 2.0 - 0.5 * betas[0]
            rhs[r] -= fa
        else:
            wl = lam[i - 2] / (lam[i - 2] + lam[i - 1])
            sub[r] = wl
            diag[r] = (1.0 - wl) + 2.0 - 0.5 * betas[i - 1]
        sup[r] = 1.0 + 0.5 * betas[i - 1]

        r = 2 * i - 1  # row for m''_i
        sub[r] = 1.0 + 0.5 * betas[i - 1]
        if i == n:
            diag[r] = 2.0 - 0.5 * betas[n - 1]
            rhs[r] -= fb
        else:
            wr = lam[i] / (lam[i - 1] + lam[i])
            diag[r] = (1.0 - wr) + 2.0 - 0.5 * betas[i - 1]
            sup[r] = wr
    interior = solve_tridiagonal(Tridiagonal(sub, diag, sup, rhs))
    coeffs = np.concatenate([[fa], interior, [fb]])
    return GqsSpline(space, coeffs)


def lagrange_norm_bound(betas):
    """Partition-independent bound on the Lagrange operator norm.

    With bb = max(betas), the bound is 4 (3 bb - 1) / (bb (5 - 3 bb)); it
    equals 2 at bb = -1, the sharp classical quadratic-spline constant.
    """
    arr = np.asarray(betas, dtype=float)
    if np.any(arr < -1.0) or np.any(arr >= 0.0):
        raise GqsValidationError("beta must lie in [-1, 0)")
    bb = float(arr.max())
    return 4.0 * (3.0 * bb - 1.0) / (bb * (5.0 - 3.0 * bb))


def cardinal_samples(space, sample_level=6):
    """Sampled cardinal interpolants: row k holds the interpolant of the
    k-th unit node-value vector on the dyadic grid.  Returns (x, matrix)."""
    dim = space.dimension
    rows = []
    x = None
    for k in range(dim):
        unit = np.zeros(dim)
        unit[k] = 1.0
        x, f, _ = sample_dyadic(lagrange_from_values(space, unit), sample_level)
        rows.append(f)
    return x, np.vstack(rows)


def estimate_lagrange_norm(space, trials=200, rng=None, sample_level=6,
                           adversarial=True):
    """Lower estimate of the Lagrange operator norm from modulus-1 node data.

    The interpolant depends on f only through its node values and the norm is
    approached on data of modulus 1, so the estimate maximizes the sampled
    sup of the interpolant over sign patterns: ``trials`` random ones plus,
    when ``adversarial`` is set, the worst pattern (the pointwise sum of the
    cardinal magnitudes, maximized over the grid).
    """
    if rng is None:
        rng = np.random.default_rng(0)
    _, cards = cardinal_samples(space, sample_level)
    best = 0.0
    if adversarial:
        best = float(np.abs(cards).sum(axis=0).max())
    if trials > 0:
        patterns = rng.choice([-1.0, 1.0], size=(trials, cards.shape[0]))
        best = max(best, float(np.abs(patterns @ cards).max()))
    return best


@dataclass(frozen=True)
class OrderFit:
    """Result of an approximation-order study on halved uniform meshes."""

    slope: float
    step_sizes: np.ndarray
    errors: np.ndarray


def empirical_order(f, operator="lagrange", domain=(0.0, math.pi), beta=-1.0,
                    levels=range(4, 10), sample_level=6):
    """Fit the decay rate of the sup-error against the mesh size.

    Runs the chosen operator on uniform partitions of 2**k intervals for k in
    ``levels`` and least-squares fits log(error) against log(h); smooth
    targets report a slope near 2.  The slope is NaN when the errors reach
    rounding level (the target lies in the spline space).
    """
    if operator not in ("lagrange", "quasi"):
        raise GqsValidationError("operator must be 'lagrange' or 'quasi'")
    a, b = float(domain[0]), float(domain[1])
    if not b > a:
        raise GqsValidationError("domain must satisfy a < b")
    steps = []
    errors = []
    for k in levels:
        n = 2 ** int(k)
        space = build_space(np.linspace(a, b, n + 1), np.full(n, float(beta)))
        if operator == "lagrange":
            s = lagrange_interpolant(space, f)
        else:
            s = quasi_interpolant(space, f)
        x, vals, _ = sample_dyadic(s, sample_level)
        err = float(np.abs(_sample(f, x) - vals).max())
        steps.append((b - a) / n)
        errors.append(err)
    steps = np.array(steps)
    errors = np.array(errors)
    scale = max(1.0, float(np.abs(errors).max()))
    if np.any(errors <= 1e-14 * scale):
        slope = float("nan")  # exact reproduction: no rate to fit
    else:
        slope = float(np.polyfit(np.log(steps), np.log(errors), 1)[0])
    return OrderFit(slope, steps, errors)
