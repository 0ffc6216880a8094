"""Spline-space geometry: partitions, tension parameters, derived abscissae.

A generalized quadratic spline space is fixed by a strictly increasing knot
sequence x_0 < x_1 < ... < x_n and one parameter beta_i in [-1, 0) per
interval.  Everything else is derived:

* theta_i = beta_i / (2 (beta_i - 1)) in (0, 1/4], the per-interval tension
  used by the subdivision midpoint rule (beta = -1 gives theta = 1/4, the
  classical quadratic-spline case);
* the Greville-type abscissae xi_i = x_i - theta_i h_i and
  eta_i = x_i + theta_{i+1} h_{i+1}, which carry the control-polygon
  ordinates and make coefficient functionals exact on affine functions;
* the junction blending weights
  omega_i = theta_{i+1} h_{i+1} / (theta_i h_i + theta_{i+1} h_{i+1}), with
  the endpoint convention omega_0 = 1, omega_n = 0;
* the interval midpoints m_i = (x_{i-1} + x_i) / 2.

All derived values are computed once at construction and are immutable;
instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GqsValidationError

# Relative floor for knot gaps: guards divisions by h_i and (1 - 2 theta_i) h_i.
MIN_RELATIVE_GAP = 1e-14


def _as_float_array(values, name):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1:
        raise GqsValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GqsValidationError(f"{name} contains non-finite entries")
    return arr


def validate_knots(knots):
    """Return the knots as a float array, rejecting non-increasing sequences."""
    arr = _as_float_array(knots, "knots")
    if arr.size < 2:
        raise GqsValidationError("a partition needs at least two knots")
    gaps = np.diff(arr)
    floor = MIN_RELATIVE_GAP * (arr[-1] - arr[0])
    bad = np.nonzero(gaps <= floor)[0]
    if bad.size:
        i = int(bad[0])
        raise GqsValidationError(
            f"knots must be strictly increasing: gap {i + 1} is "
            f"{gaps[i]:.6g} (floor {floor:.3g})"
        )
    return arr


def validate_betas(betas, n_intervals):
    """Return the beta sequence as a float array, checking range and length."""
    arr = _as_float_array(betas, "betas")
    if arr.size != n_intervals:
        raise GqsValidationError(
            f"need one beta per interval: got {arr.size} values for {n_intervals} intervals"
        )
    bad = np.nonzero((arr < -1.0) | (arr >= 0.0))[0]
    if bad.size:
        i = int(bad[0])
        raise GqsValidationError(f"beta[{i}] = {arr[i]:.6g} is outside [-1, 0)")
    return arr


def theta_from_beta(beta):
    """Tension theta = beta / (2 (beta - 1)); maps [-1, 0) onto (0, 1/4]."""
    arr = np.asarray(beta, dtype=float)
    if np.any(arr < -1.0) or np.any(arr >= 0.0):
        raise GqsValidationError("beta must lie in [-1, 0)")
    out = 0.5 * arr / (arr - 1.0)
    return out if out.ndim else float(out)


def beta_from_theta(theta):
    """Inverse of :func:`theta_from_beta`: beta = 2 theta / (2 theta - 1)."""
    arr = np.asarray(theta, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 0.25):
        raise GqsValidationError("theta must lie in (0, 1/4]")
    out = 2.0 * arr / (2.0 * arr - 1.0)
    return out if out.ndim else float(out)


def holder_exponent(beta):
    """Smoothness exponent of the first derivative: -log2(1 + beta/2).

    Equals 1 at beta = -1 and decreases to 0 as beta approaches 0 from below.
    """
    arr = np.asarray(beta, dtype=float)
    if np.any(arr < -1.0) or np.any(arr >= 0.0):
        raise GqsValidationError("beta must lie in [-1, 0)")
    out = -np.log2(1.0 + 0.5 * arr)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GqsSpace:
    """A spline space: knots, betas, and all derived geometry.

    ``theta_h`` holds the products theta_i * h_i padded with zeros at both
    ends (the h_0 = h_{n+1} = 0 boundary convention), so that
    xi_i = knots[i] - theta_h[i] and eta_i = knots[i] + theta_h[i+1] hold for
    every i without special cases.  Use :func:`build_space` to construct.
    """

    knots: np.ndarray
    betas: np.ndarray
    theta: np.ndarray
    theta_h: np.ndarray
    omega: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    midpoints: np.ndarray

    def __post_init__(self):
        for field in ("knots", "betas", "theta", "theta_h", "omega", "xi", "eta", "midpoints"):
            arr = np.asarray(getattr(self, field), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, field, arr)

    @property
    def n(self):
        """Number of intervals."""
        return self.knots.size - 1

    @property
    def a(self):
        return float(self.knots[0])

    @property
    def b(self):
        return float(self.knots[-1])

    @property
    def lengths(self):
        """Interval lengths h_1 .. h_n."""
        return np.diff(self.knots)

    @property
    def dimension(self):
        """Dimension of the spline space: 2 n + 2."""
        return 2 * self.n + 2

    @property
    def holder_exponents(self):
        """Per-interval smoothness exponents of the first derivative."""
        return holder_exponent(self.betas)


def build_space(knots, betas):
    """Build a :class:`GqsSpace` from knots and per-interval beta parameters.

    Raises :class:`GqsValidationError` on non-increasing knots, beta values
    outside [-1, 0), or a length mismatch.
    """
    x = validate_knots(knots)
    n = x.size - 1
    beta = validate_betas(betas, n)
    theta = theta_from_beta(beta)
    h = np.diff(x)

    th = np.zeros(n + 2)
    th[1:-1] = theta * h

    omega = np.empty(n + 1)
    omega[:] = th[1:] / (th[:-1] + th[1:])  # gives omega_0 = 1 and omega_n = 0

    xi = x - th[:-1]
    eta = x + th[1:]
    midpoints = 0.5 * (x[:-1] + x[1:])
    return GqsSpace(x, beta, theta, th, omega, xi, eta, midpoints)
