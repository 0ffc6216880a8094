"""Shape diagnosis and shape-preserving interpolation.

A spline is monotone (convex) exactly when its global control polygon is
monotone (convex), so diagnosis reduces to inspecting the coefficient
sequence.  The fitting routines interpolate Hermite data (y_i, p_i) and pick
the per-interval tension theta_i so that the control polygon, and hence the
spline, has the requested shape:

* monotone increasing data (all chord slopes tau_i and all slopes p_i
  positive): theta_i must stay below tau_i / (2 mu_i) where
  mu_i = (p_{i-1} + p_i) / 2; when mu_i <= 2 tau_i the classical choice
  theta_i = 1/4 works, otherwise theta_i is set to half the threshold;
* convex data (p_{i-1} < tau_i < p_i): theta_i = 1/4 works when tau_i lies in
  the window [(3 p_{i-1} + p_i) / 4, (p_{i-1} + 3 p_i) / 4]; below it
  theta_i = (tau_i - p_{i-1}) / (p_i - p_{i-1}), above it
  theta_i = (p_i - tau_i) / (p_i - p_{i-1});
* increasing and convex data: the convex rule already guarantees both.

Decreasing and concave variants work by negating the data, fitting, and
negating the coefficients back.  Data hitting the open boundaries of the
preconditions (zero chord slope, zero slope, chord slope equal to an end
slope) is rejected rather than smoothed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import GqsSpline, hermite_to_spline, scp_abscissae
from .errors import GqsError, GqsShapeError, GqsValidationError
from .geometry import beta_from_theta, build_space, validate_knots

# Relative slack for the polygon predicates: exact equalities are legitimate
# (boundary tension choices produce them) and must survive roundoff.
DIAGNOSE_RTOL = 1e-12


@dataclass(frozen=True)
class ShapeReport:
    """Shape flags of a control polygon; equalities count as both senses.

    ``first_violation`` is the first vertex index at which the coefficient
    sequence stops being monotone in either sense (None when monotone).
    """

    monotone_increasing: bool
    monotone_decreasing: bool
    convex: bool
    concave: bool
    first_violation: int | None = None

    def summary(self):
        return (
            f"increasing={self.monotone_increasing} "
            f"decreasing={self.monotone_decreasing} "
            f"convex={self.convex} concave={self.concave}"
        )


def diagnose(spline, rtol=DIAGNOSE_RTOL):
    """Classify the spline's shape from its control polygon."""
    coeffs = spline.coeffs
    gaps = np.diff(coeffs)
    slack = rtol * max(1.0, float(np.abs(coeffs).max()))
    increasing = bool(np.all(gaps >= -slack))
    decreasing = bool(np.all(gaps <= slack))

    first_violation = None
    if not (increasing or decreasing):
        up_break = np.nonzero(gaps < -slack)[0]
        down_break = np.nonzero(gaps > slack)[0]
        # The sequence stays monotone (in one sense) until breaks of both
        # signs have occurred; the later of the two first breaks witnesses it.
        first_violation = int(max(up_break[0], down_break[0]) + 1)

    slopes = gaps / np.diff(scp_abscissae(spline.space))
    curv = np.diff(slopes)
    slope_slack = rtol * max(1.0, float(np.abs(slopes).max()))
    convex = bool(np.all(curv >= -slope_slack))
    concave = bool(np.all(curv <= slope_slack))
    return ShapeReport(increasing, decreasing, convex, concave, first_violation)


def chord_slopes(knots, values):
    """Per-interval chord slopes tau_i = (y_i - y_{i-1}) / h_i."""
    return np.diff(values) / np.diff(knots)


@dataclass(frozen=True)
class IntervalData:
    """Per-interval quantities driving the tension selection.

    ``threshold`` is the critical tension for the requested mode: tensions
    strictly below tau / (2 mu) keep the midpoint derivative positive in the
    monotone case, and tensions up to
    min(tau - p_left, p_right - tau) / (p_right - p_left) keep the interval
    convex.  Entries are +inf where no constraint binds.
    """

    tau: np.ndarray
    mu: np.ndarray
    threshold: np.ndarray


def interval_data(knots, values, slopes, mode="monotone"):
    """Chord slopes, mean slopes, and the critical tension per interval.

    Thresholds are NaN where the mode's precondition cannot hold at all
    (non-positive chord slope in the monotone mode, non-increasing end
    slopes in the convex mode) and +inf where no constraint binds.
    """
    if mode not in ("monotone", "convex"):
        raise GqsValidationError("mode must be 'monotone' or 'convex'")
    x, y, p = _prepare(knots, values, slopes)
    tau = chord_slopes(x, y)
    mu = 0.5 * (p[:-1] + p[1:])
    threshold = np.full(tau.shape, np.nan)
    if mode == "monotone":
        free = (tau > 0.0) & (mu <= 0.0)
        bound = (tau > 0.0) & (mu > 0.0)
        threshold[free] = np.inf
        threshold[bound] = 0.5 * tau[bound] / mu[bound]
    else:
        spread = p[1:] - p[:-1]
        ok = spread > 0.0
        room = np.minimum(tau - p[:-1], p[1:] - tau)
        threshold[ok] = room[ok] / spread[ok]
    return IntervalData(tau, mu, threshold)


def _prepare(knots, values, slopes):
    x = validate_knots(knots)
    y = np.asarray(values, dtype=float)
    p = np.asarray(slopes, dtype=float)
    if y.shape != x.shape or p.shape != x.shape:
        raise GqsValidationError("values and slopes must have one entry per knot")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(p))):
        raise GqsValidationError("Hermite data contains non-finite entries")
    return x, y, p


def _finish(knots, values, slopes, theta, flip, want):
    betas = beta_from_theta(theta)
    space = build_space(knots, betas)
    spline = hermite_to_spline(space, values, slopes)
    if flip:
        spline = GqsSpline(space, -spline.coeffs)
    report = diagnose(spline)
    if not getattr(report, want):
        raise GqsError(
            f"internal error: fitted spline failed its own {want} check"
        )  # pragma: no cover
    return spline, theta


def fit_monotone(knots, values, slopes, sense="increasing"):
    """Monotone Hermite interpolation; returns (spline, chosen thetas).

    Increasing data must have every chord slope and every end slope strictly
    positive (mirrored for ``sense="decreasing"``); anything else raises
    :class:`GqsShapeError` naming the first offending interval.
    """
    if sense not in ("increasing", "decreasing"):
        raise GqsValidationError("sense must be 'increasing' or 'decreasing'")
    x, y, p = _prepare(knots, values, slopes)
    flip = sense == "decreasing"
    if flip:
        y, p = -y, -p

    data = interval_data(x, y, p, mode="monotone")
    n = data.tau.size
    for i in range(1, n + 1):
        if not data.tau[i - 1] > 0.0:
            shown = -data.tau[i - 1] if flip else data.tau[i - 1]
            raise GqsShapeError(
                f"interval {i}: chord slope {shown:.6g} is not strictly "
                f"{'negative' if flip else 'positive'}",
                interval=i, condition="chord slope sign",
            )
    bad = np.nonzero(~(p > 0.0))[0]
    if bad.size:
        k = int(bad[0])
        raise GqsShapeError(
            f"knot {k}: slope {(-p if flip else p)[k]:.6g} is not strictly "
            f"{'negative' if flip else 'positive'}",
            interval=max(k, 1), condition="slope sign",
        )

    # The classical 1/4 applies whenever admissible; otherwise half the
    # critical threshold keeps the midpoint derivative strictly positive.
    theta = np.where(data.threshold >= 0.25, 0.25, 0.5 * data.threshold)
    return _finish(x, y, p, theta, flip,
                   "monotone_decreasing" if flip else "monotone_increasing")


def _convex_thetas(x, y, p, flip):
    data = interval_data(x, y, p, mode="convex")
    n = data.tau.size
    kind = "concave" if flip else "convex"
    for i in range(1, n + 1):
        if not (p[i - 1] < data.tau[i - 1] < p[i]):
            raise GqsShapeError(
                f"interval {i}: data is not strictly {kind} "
                f"(needs end slopes to bracket the chord slope strictly)",
                interval=i, condition="slope bracketing",
            )
    # threshold >= 1/4 is exactly the classical window
    # (3 p0 + p1) / 4 <= tau <= (p0 + 3 p1) / 4; otherwise the binding side
    # of the window caps the tension.
    return np.minimum(0.25, data.threshold)


def fit_convex(knots, values, slopes, sense="convex"):
    """Convex (or concave) Hermite interpolation; returns (spline, thetas).

    Convex data must satisfy p_{i-1} < tau_i < p_i strictly on every
    interval.
    """
    if sense not in ("convex", "concave"):
        raise GqsValidationError("sense must be 'convex' or 'concave'")
    x, y, p = _prepare(knots, values, slopes)
    flip = sense == "concave"
    if flip:
        y, p = -y, -p
    theta = _convex_thetas(x, y, p, flip)
    return _finish(x, y, p, theta, flip, "concave" if flip else "convex")


def fit_monotone_convex(knots, values, slopes):
    """Increasing and convex Hermite interpolation; returns (spline, thetas).

    Requires 0 < p_{i-1} < tau_i < p_i on every interval; the convex tension
    rule then yields a spline that is both increasing and convex.
    """
    x, y, p = _prepare(knots, values, slopes)
    if not p[0] > 0.0:
        raise GqsShapeError(
            f"knot 0: slope {p[0]:.6g} is not strictly positive",
            interval=1, condition="slope sign",
        )
    theta = _convex_thetas(x, y, p, flip=False)
    spline, theta = _finish(x, y, p, theta, False, "convex")
    report = diagnose(spline)
    if not report.monotone_increasing:
        raise GqsError(
            "internal error: monotone-convex fit lost monotonicity"
        )  # pragma: no cover
    return spline, theta
