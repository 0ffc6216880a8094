"""Global B-spline basis, coefficient conversions, and spline evaluation.

A spline is stored by its coefficients gamma_0 .. gamma_{2n+1} in the global
B-spline basis.  The conversions between Hermite data (values y_i and slopes
p_i at the knots) and the coefficients are

    gamma_{2i}   = y_i - theta_i h_i p_i
    gamma_{2i+1} = y_i + theta_{i+1} h_{i+1} p_i

with the h_0 = h_{n+1} = 0 boundary convention, and on each interval the four
local B-coefficients [a_{i-1}, d_{i-1}, c_i, a_i] are recovered as

    a_i = omega_i gamma_{2i} + (1 - omega_i) gamma_{2i+1},
    d_{i-1} = gamma_{2i-1},   c_i = gamma_{2i}.

Point evaluation locates the interval, rebuilds the local Hermite state, and
runs the subdivision kernel; there is no closed form for general beta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GqsValidationError
from .geometry import GqsSpace
from .subdivision import EVAL_LEVEL_CAP, bisect_evaluate


class HermiteData(NamedTuple):
    values: np.ndarray
    slopes: np.ndarray


@dataclass(frozen=True)
class GqsSpline:
    """A spline: a space plus its 2n + 2 global B-spline coefficients."""

    space: GqsSpace
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.ndim != 1 or arr.size != self.space.dimension:
            raise GqsValidationError(
                f"expected {self.space.dimension} coefficients, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise GqsValidationError("coefficients contain non-finite entries")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)


@dataclass(frozen=True)
class ControlPolygon:
    """An ordered piecewise-linear polygon of (abscissa, ordinate) vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.vertices, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise GqsValidationError(f"vertices must have shape (m, 2), got {arr.shape}")
        if np.any(np.diff(arr[:, 0]) < 0):
            raise GqsValidationError("polygon abscissae must be nondecreasing")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", arr)

    @property
    def abscissae(self):
        return self.vertices[:, 0]

    @property
    def ordinates(self):
        return self.vertices[:, 1]

    def interpolate(self, x):
        """Evaluate the polygon as a piecewise-linear function."""
        return np.interp(x, self.abscissae, self.ordinates)

    def max_gap(self):
        """Largest absolute difference between consecutive ordinates."""
        return float(np.abs(np.diff(self.ordinates)).max())


def scp_abscissae(space):
    """Interleaved control abscissae xi_0, eta_0, xi_1, eta_1, ..., xi_n, eta_n."""
    out = np.empty(space.dimension)
    out[0::2] = space.xi
    out[1::2] = space.eta
    return out


def hermite_to_spline(space, values, slopes):
    """Build the spline interpolating values y_i and slopes p_i at the knots."""
    y = np.asarray(values, dtype=float)
    p = np.asarray(slopes, dtype=float)
    m = space.n + 1
    if y.shape != (m,) or p.shape != (m,):
        raise GqsValidationError(f"values and slopes must both have length {m}")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(p))):
        raise GqsValidationError("Hermite data contains non-finite entries")
    th = space.theta_h
    coeffs = np.empty(space.dimension)
    coeffs[0::2] = y - th[:-1] * p
    coeffs[1::2] = y + th[1:] * p
    return GqsSpline(space, coeffs)


def spline_to_hermite(spline):
    """Recover knot values and slopes from the B-spline coefficients."""
    space = spline.space
    th = space.theta_h
    even = spline.coeffs[0::2]
    odd = spline.coeffs[1::2]
    slopes = (odd - even) / (th[:-1] + th[1:])
    values = space.omega * even + (1.0 - space.omega) * odd
    return HermiteData(values, slopes)


def local_coefficients(spline):
    """Per-interval B-coefficient quadruplets, shape (n, 4).

    Row i - 1 holds [a_{i-1}, d_{i-1}, c_i, a_i]; adjacent rows share their
    boundary entry.
    """
    space = spline.space
    values, _ = spline_to_hermite(spline)
    out = np.empty((space.n, 4))
    out[:, 0] = values[:-1]
    out[:, 1] = spline.coeffs[1:-1:2]
    out[:, 2] = spline.coeffs[2::2]
    out[:, 3] = values[1:]
    return out


def evaluate(spline, x, tol=1e-10, max_levels=EVAL_LEVEL_CAP):
    """Evaluate the spline: returns (value, derivative) at each x in [a, b].

    Accepts a scalar or an array.  Knot abscissae return the interpolated
    Hermite data exactly; other points are resolved by the subdivision kernel
    to within ``tol`` in value.  The derivative is exact (to rounding) at
    dyadic points of each interval and converges at the slower Hoelder rate
    elsewhere; for dense exact sampling prefer :func:`sample_dyadic`.
    """
    space = spline.space
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    pts = np.atleast_1d(arr)
    if pts.size and (pts.min() < space.a or pts.max() > space.b):
        raise GqsValidationError(
            f"evaluation points must lie in [{space.a:.6g}, {space.b:.6g}]"
        )
    values, slopes = spline_to_hermite(spline)
    knots = space.knots
    i = np.clip(np.searchsorted(knots, pts, side="right") - 1, 0, space.n - 1)
    f, d = bisect_evaluate(
        knots[i], knots[i + 1], values[i], slopes[i], values[i + 1], slopes[i + 1],
        space.theta[i], pts, tol=tol, max_levels=max_levels,
    )
    if scalar:
        return float(f[0]), float(d[0])
    return f, d


def basis_function(space, k, x, tol=1e-10, max_levels=EVAL_LEVEL_CAP):
    """Evaluate the k-th global B-spline at x (scalar or array)."""
    dim = space.dimension
    if not (isinstance(k, (int, np.integer)) and 0 <= k < dim):
        raise GqsValidationError(f"basis index must be in 0..{dim - 1}, got {k}")
    unit = np.zeros(dim)
    unit[k] = 1.0
    value, _ = evaluate(GqsSpline(space, unit), x, tol=tol, max_levels=max_levels)
    return value


def basis_support(space, k):
    """Support interval [lo, hi] of the k-th global B-spline.

    Even-index splines live on [x_{i-1}, m_{i+1}] and odd-index ones on
    [m_i, x_{i+1}], truncated at the domain ends for the four boundary
    splines.
    """
    dim = space.dimension
    if not (isinstance(k, (int, np.integer)) and 0 <= k < dim):
        raise GqsValidationError(f"basis index must be in 0..{dim - 1}, got {k}")
    knots = space.knots
    mids = space.midpoints
    n = space.n
    if k % 2 == 0:
        i = k // 2
        lo = knots[i - 1] if i >= 1 else knots[0]
        hi = mids[i] if i < n else knots[n]
    else:
        i = (k - 1) // 2
        lo = mids[i - 1] if i >= 1 else knots[0]
        hi = knots[i + 1] if i < n else knots[n]
    return float(lo), float(hi)


def knot_derivatives(space):
    """Closed-form B-spline derivatives at the knots, shape (n + 1, 2n + 2).

    Row i holds B_k'(x_i); only B_{2i} and B_{2i+1} are nonzero there, with
    B_{2i}'(x_i) = -1 / (theta_i h_i + theta_{i+1} h_{i+1}) = -B_{2i+1}'(x_i).
    """
    th = space.theta_h
    inv = 1.0 / (th[:-1] + th[1:])
    out = np.zeros((space.n + 1, space.dimension))
    rows = np.arange(space.n + 1)
    out[rows, 2 * rows] = -inv
    out[rows, 2 * rows + 1] = inv
    return out


def control_polygon(spline):
    """The global spline control polygon: ordinates are the coefficients."""
    verts = np.column_stack([scp_abscissae(spline.space), spline.coeffs])
    return ControlPolygon(verts)


def local_control_polygon(spline, i):
    """Control polygon of interval i (1-based): four vertices at
    (x_{i-1}, a_{i-1}), (eta_{i-1}, d_{i-1}), (xi_i, c_i), (x_i, a_i).

    The middle segment is tangent to the curve at the interval midpoint.
    """
    space = spline.space
    if not (isinstance(i, (int, np.integer)) and 1 <= i <= space.n):
        raise GqsValidationError(f"interval index must be in 1..{space.n}, got {i}")
    quad = local_coefficients(spline)[i - 1]
    xs = np.array([space.knots[i - 1], space.eta[i - 1], space.xi[i], space.knots[i]])
    return ControlPolygon(np.column_stack([xs, quad]))


def sample_dyadic(spline, level):
    """Sample the spline at all dyadic points of depth ``level`` per interval.

    Returns (x, values, derivatives) over the whole domain with shared knots
    emitted once: n * 2**level + 1 points.  This path is exact (to rounding)
    because it only ever applies the midpoint rule, never bisection.
    """
    if not (isinstance(level, (int, np.integer)) and 0 <= level <= 30):
        raise GqsValidationError("level must be an integer in 0..30")
    space = spline.space
    values, slopes = spline_to_hermite(spline)
    h = space.lengths
    th = space.theta[:, None]
    f = np.stack([values[:-1], values[1:]], axis=1)
    d = np.stack([slopes[:-1], slopes[1:]], axis=1)
    for lev in range(level):
        step = (h / 2.0**lev)[:, None]
        fm = 0.5 * ((f[:, :-1] + f[:, 1:]) - th * step * (d[:, 1:] - d[:, :-1]))
        dm = ((f[:, 1:] - f[:, :-1]) / step - th * (d[:, :-1] + d[:, 1:])) / (1.0 - 2.0 * th)
        nf = np.empty((f.shape[0], 2 * f.shape[1] - 1))
        nd = np.empty_like(nf)
        nf[:, 0::2] = f
        nf[:, 1::2] = fm
        nd[:, 0::2] = d
        nd[:, 1::2] = dm
        f, d = nf, nd
    offsets = np.linspace(0.0, 1.0, f.shape[1])
    x = space.knots[:-1, None] + offsets[None, :] * h[:, None]
    x[:, 0] = space.knots[:-1]  # keep knot abscissae exact

    def fuse(grid, final):
        return np.concatenate([grid[:, :-1].ravel(), [final]])

    return (
        fuse(x, space.knots[-1]),
        fuse(f, float(values[-1])),
        fuse(d, float(slopes[-1])),
    )
