"""Shared oracles and generators for the property-test suites.

The classical quadratic spline (beta = -1 on every interval) admits a closed
form that the subdivision kernel must reproduce: on each interval the
interpolant is the unique pair of parabolas joined C^1 at the midpoint that
matches the four Hermite constraints.  That closed form, plus deterministic
random-space generators, back the cross-checks used throughout the tests.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .errors import GqsValidationError
from .geometry import build_space, validate_knots


def quadratic_oracle_eval(state, t):
    """Closed-form evaluation of the beta = -1 interpolant on one interval.

    ``t`` is the relative coordinate in [0, 1] (scalar or array).  Returns
    (value, derivative); derivatives are with respect to the true abscissa.
    The two parabola pieces are

        q1(t) = F0 + D0 t + A t^2            on [0, 1/2]
        q2(t) = F1 + D1 (t - 1) + B (t-1)^2  on [1/2, 1]

    in unit coordinates (D = width * slope), with A and B fixed by the C^1
    join at t = 1/2.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    tt = np.atleast_1d(t)
    if tt.size and (tt.min() < 0.0 or tt.max() > 1.0):
        raise GqsValidationError("relative coordinates must lie in [0, 1]")
    h = state.width
    f0, f1 = state.f_left, state.f_right
    d0, d1 = state.d_left * h, state.d_right * h
    a_coef = 2.0 * (f1 - f0) - 0.5 * (3.0 * d0 + d1)
    b_coef = d1 - d0 - a_coef
    u = tt - 1.0
    left_f = f0 + d0 * tt + a_coef * tt * tt
    left_d = (d0 + 2.0 * a_coef * tt) / h
    right_f = f1 + d1 * u + b_coef * u * u
    right_d = (d1 + 2.0 * b_coef * u) / h
    use_left = tt <= 0.5
    f = np.where(use_left, left_f, right_f)
    d = np.where(use_left, left_d, right_d)
    if scalar:
        return float(f[0]), float(d[0])
    return f, d


def classical_quadratic_eval(knots, values, slopes, x):
    """Closed-form beta = -1 spline over a whole partition.

    Evaluates the piecewise oracle for Hermite data (values, slopes) at the
    points ``x``; returns (value, derivative).
    """
    from .subdivision import HermiteEndpointState

    kn = validate_knots(knots)
    y = np.asarray(values, dtype=float)
    p = np.asarray(slopes, dtype=float)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    pts = np.atleast_1d(x)
    idx = np.clip(np.searchsorted(kn, pts, side="right") - 1, 0, kn.size - 2)
    f = np.empty(pts.size)
    d = np.empty(pts.size)
    for i in np.unique(idx):
        sel = idx == i
        state = HermiteEndpointState(
            y[i], p[i], y[i + 1], p[i + 1], kn[i + 1] - kn[i]
        )
        t = (pts[sel] - kn[i]) / (kn[i + 1] - kn[i])
        f[sel], d[sel] = quadratic_oracle_eval(state, np.clip(t, 0.0, 1.0))
    if scalar:
        return float(f[0]), float(d[0])
    return f, d


def dyadic_points(knots, level):
    """All dyadic points of the partition built by repeated exact midpoint
    averaging, so point evaluation terminates on them exactly."""
    pts = np.asarray(knots, dtype=float)
    for _ in range(level):
        merged = np.empty(2 * pts.size - 1)
        merged[0::2] = pts
        merged[1::2] = 0.5 * (pts[:-1] + pts[1:])
        pts = merged
    return pts


def random_space(seed=None, rng=None, n_range=(1, 20), beta_range=(-1.0, -0.05),
                 domain=(0.0, 1.0)):
    """Deterministic random space: jittered knots and uniform betas.

    Knot gaps are drawn from [0.3, 1] and normalized, which keeps every gap
    above 0.3 (b - a) / n without rejection sampling.  Betas stay below
    -0.05 so the derived quantities remain numerically tame; the beta -> 0
    boundary is exercised by targeted edge tests instead.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    a, b = float(domain[0]), float(domain[1])
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    gaps = rng.uniform(0.3, 1.0, size=n)
    knots = np.empty(n + 1)
    knots[0] = a
    knots[1:] = a + np.cumsum(gaps) / gaps.sum() * (b - a)
    knots[-1] = b
    betas = rng.uniform(beta_range[0], beta_range[1], size=n)
    return build_space(knots, betas)


def random_hermite(rng, n_knots, scale=1.0):
    """Unconstrained random Hermite data: (values, slopes)."""
    return (scale * rng.standard_normal(n_knots), scale * rng.standard_normal(n_knots))


def random_increasing_data(rng, knots):
    """Strictly increasing Hermite data on the given knots."""
    kn = np.asarray(knots, dtype=float)
    h = np.diff(kn)
    slopes = rng.uniform(0.1, 3.0, size=kn.size)
    values = np.empty(kn.size)
    values[0] = rng.uniform(-1.0, 1.0)
    values[1:] = values[0] + np.cumsum(rng.uniform(0.05, 2.0, size=h.size) * h)
    return values, slopes


def random_convex_data(rng, knots, positive_slopes=False):
    """Strictly convex Hermite data: end slopes bracket every chord slope.

    With ``positive_slopes`` the data is also strictly increasing, suitable
    for the combined monotone-convex fit.
    """
    kn = np.asarray(knots, dtype=float)
    h = np.diff(kn)
    n = h.size
    start = rng.uniform(0.1, 1.0) if positive_slopes else rng.uniform(-3.0, 0.0)
    slopes = start + np.concatenate([[0.0], np.cumsum(rng.uniform(0.2, 1.5, size=n))])
    frac = rng.uniform(0.15, 0.85, size=n)
    tau = slopes[:-1] + frac * (slopes[1:] - slopes[:-1])
    values = np.empty(kn.size)
    values[0] = rng.uniform(-1.0, 1.0)
    values[1:] = values[0] + np.cumsum(tau * h)
    return values, slopes


def space_digest(space):
    """Stable hex digest of a space's defining data, for regression pinning."""
    parts = [format(v, ".17g") for v in space.knots]
    parts.append("|")
    parts.extend(format(v, ".17g") for v in space.betas)
    return hashlib.sha256(",".join(parts).encode("ascii")).hexdigest()[:16]
