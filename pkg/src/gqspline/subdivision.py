"""Two-point Hermite subdivision kernel.

Given a function value and first derivative at both ends of an interval of
width h, the midpoint rule with tension theta in (0, 1/4] produces the value
and derivative at the interval midpoint:

    f(m)  = ((f(a) + f(b)) - theta h (f'(b) - f'(a))) / 2
    f'(m) = ((f(b) - f(a)) / h - theta (f'(a) + f'(b))) / (1 - 2 theta)

Iterating the rule fills in all dyadic points and converges to a C^1 limit
function; at theta = 1/4 the limit is the classical quadratic-spline
interpolant of the endpoint data (two parabolas joined smoothly at the
midpoint).  Between dyadic points the limit is evaluated by
bisecting until the bracketing subinterval is narrow enough for the requested
tolerance and taking the nearer endpoint (the limit's derivative is bounded,
so the value error is O(width)).

All functions are pure; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GqsToleranceError, GqsValidationError

# Hard cap on dyadic-table depth (2**level + 1 rows).
TABLE_LEVEL_CAP = 40
# Bisection depth cap for point evaluation; past ~52 halvings the midpoint of a
# double-precision bracket degenerates onto an endpoint, so deeper is useless.
EVAL_LEVEL_CAP = 52


@dataclass(frozen=True)
class HermiteEndpointState:
    """Value/derivative pairs at the two ends of an interval of given width."""

    f_left: float
    d_left: float
    f_right: float
    d_right: float
    width: float

    def __post_init__(self):
        vals = (self.f_left, self.d_left, self.f_right, self.d_right, self.width)
        if not all(np.isfinite(v) for v in vals):
            raise GqsValidationError("Hermite endpoint data must be finite")
        if not self.width > 0.0:
            raise GqsValidationError(f"interval width must be positive, got {self.width}")


def _check_theta(theta):
    arr = np.asarray(theta, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 0.25):
        raise GqsValidationError("theta must lie in (0, 1/4]")
    return arr


def midpoint_values(state, theta):
    """One midpoint step: (value, derivative) at the center of the interval."""
    th = float(_check_theta(theta))
    h = state.width
    fm = 0.5 * ((state.f_left + state.f_right) - th * h * (state.d_right - state.d_left))
    dm = ((state.f_right - state.f_left) / h - th * (state.d_left + state.d_right)) / (
        1.0 - 2.0 * th
    )
    return fm, dm


def dyadic_table(state, theta, levels):
    """Tabulate (offset, value, derivative) at the 2**levels + 1 dyadic points.

    Offsets are measured from the left end of the interval.  The table is
    grown breadth-first, one full level at a time, so every midpoint is
    computed exactly once.
    """
    th = float(_check_theta(theta))
    if not (isinstance(levels, (int, np.integer)) and levels >= 0):
        raise GqsValidationError("levels must be a nonnegative integer")
    if levels > TABLE_LEVEL_CAP:
        raise GqsValidationError(f"levels = {levels} exceeds the cap of {TABLE_LEVEL_CAP}")

    f = np.array([state.f_left, state.f_right])
    d = np.array([state.d_left, state.d_right])
    for level in range(levels):
        h = state.width / 2.0**level
        fm = 0.5 * ((f[:-1] + f[1:]) - th * h * (d[1:] - d[:-1]))
        dm = ((f[1:] - f[:-1]) / h - th * (d[:-1] + d[1:])) / (1.0 - 2.0 * th)
        nf = np.empty(2 * f.size - 1)
        nd = np.empty_like(nf)
        nf[0::2] = f
        nf[1::2] = fm
        nd[0::2] = d
        nd[1::2] = dm
        f, d = nf, nd
    offsets = np.linspace(0.0, state.width, f.size)
    return np.column_stack([offsets, f, d])


def bisect_evaluate(x0, x1, f0, d0, f1, d1, theta, x, tol=1e-10, max_levels=EVAL_LEVEL_CAP,
                    width_scale=1.0):
    """Evaluate the subdivision limit at points ``x``, vectorized.

    ``x0 .. d1`` and ``theta`` broadcast against ``x``; each entry describes
    the bracketing interval and Hermite data for the corresponding point.
    ``width_scale`` converts coordinate differences to true interval widths
    (used when bisecting in normalized coordinates).  Points sitting exactly
    on a bracket endpoint or a midpoint produced by the recursion get exact
    data; the rest stop once

        width * max(1, |d_left|, |d_right|) < tol

    and receive the nearer endpoint's values.  Raises
    :class:`GqsToleranceError` if any point cannot reach the tolerance within
    ``max_levels`` halvings.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape
    bx0, bx1, bf0, bd0, bf1, bd1, bth, bx = np.broadcast_arrays(
        x0, x1, f0, d0, f1, d1, theta, x
    )
    wx0 = bx0.astype(float).ravel().copy()
    wx1 = bx1.astype(float).ravel().copy()
    wf0 = bf0.astype(float).ravel().copy()
    wd0 = bd0.astype(float).ravel().copy()
    wf1 = bf1.astype(float).ravel().copy()
    wd1 = bd1.astype(float).ravel().copy()
    wth = bth.astype(float).ravel().copy()
    wx = bx.astype(float).ravel().copy()

    out_f = np.empty(wx.size)
    out_d = np.empty(wx.size)
    idx = np.arange(wx.size)

    def settle(done, take_f, take_d):
        nonlocal idx, wx0, wx1, wf0, wd0, wf1, wd1, wth, wx
        out_f[idx[done]] = take_f[done]
        out_d[idx[done]] = take_d[done]
        keep = ~done
        idx = idx[keep]
        wx0, wx1 = wx0[keep], wx1[keep]
        wf0, wd0 = wf0[keep], wd0[keep]
        wf1, wd1 = wf1[keep], wd1[keep]
        wth, wx = wth[keep], wx[keep]

    for step in range(max_levels + 1):
        if idx.size == 0:
            break
        at_left = wx == wx0
        at_right = wx == wx1
        # Constant Hermite data reproduces a constant exactly.
        flat = (wd0 == 0.0) & (wd1 == 0.0) & (wf0 == wf1)
        scale = np.maximum(1.0, np.maximum(np.abs(wd0), np.abs(wd1)))
        narrow = (wx1 - wx0) * width_scale * scale < tol
        done = at_left | at_right | flat | narrow
        if done.any():
            nearer_right = at_right | (~at_left & ((wx - wx0) > (wx1 - wx)))
            take_f = np.where(nearer_right, wf1, wf0)
            take_d = np.where(nearer_right, wd1, wd0)
            fix = flat & ~at_left & ~at_right
            take_f = np.where(fix, wf0, take_f)
            take_d = np.where(fix, 0.0, take_d)
            settle(done, take_f, take_d)
            if idx.size == 0:
                break
        if step == max_levels:
            break
        h = (wx1 - wx0) * width_scale
        m = 0.5 * (wx0 + wx1)
        fm = 0.5 * ((wf0 + wf1) - wth * h * (wd1 - wd0))
        dm = ((wf1 - wf0) / h - wth * (wd0 + wd1)) / (1.0 - 2.0 * wth)
        at_mid = wx == m
        stuck = (m <= wx0) | (m >= wx1)  # bracket collapsed to adjacent floats
        if (at_mid | stuck).any():
            nearer_right = (wx - wx0) > (wx1 - wx)
            take_f = np.where(at_mid, fm, np.where(nearer_right, wf1, wf0))
            take_d = np.where(at_mid, dm, np.where(nearer_right, wd1, wd0))
            keepers = ~(at_mid | stuck)
            settle(at_mid | stuck, take_f, take_d)
            m, fm, dm = m[keepers], fm[keepers], dm[keepers]
            if idx.size == 0:
                break
        go_left = wx < m
        wx1 = np.where(go_left, m, wx1)
        wf1 = np.where(go_left, fm, wf1)
        wd1 = np.where(go_left, dm, wd1)
        wx0 = np.where(go_left, wx0, m)
        wf0 = np.where(go_left, wf0, fm)
        wd0 = np.where(go_left, wd0, dm)

    if idx.size:
        worst = float(((wx1 - wx0) * width_scale).max())
        raise GqsToleranceError(
            f"tolerance {tol:.3g} unreachable within {max_levels} bisection levels "
            f"(residual bracket width {worst:.3g}); loosen tol or raise max_levels"
        )
    return out_f.reshape(shape), out_d.reshape(shape)


def eval_point(state, theta, t, tol=1e-10, max_levels=EVAL_LEVEL_CAP):
    """Evaluate the limit function at relative coordinate t in [0, 1].

    Returns (value, derivative).  t = 0, 1 return the endpoint data exactly
    and t = 1/2 returns one midpoint step exactly; other dyadic t terminate
    exactly once the bisection reaches them.  ``tol`` bounds the value error;
    at non-dyadic t the derivative converges at the slower Hoelder rate.
    """
    th = float(_check_theta(theta))
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise GqsValidationError(f"relative coordinate t = {t} is outside [0, 1]")
    f, d = bisect_evaluate(
        0.0, 1.0, state.f_left, state.d_left, state.f_right, state.d_right,
        th, t, tol=tol, max_levels=max_levels, width_scale=state.width,
    )
    return float(f), float(d)
