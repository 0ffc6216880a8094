import numpy as np
import pytest

from gqspline import (
    GqsValidationError,
    beta_from_theta,
    build_space,
    holder_exponent,
    theta_from_beta,
)
from gqspline.testing import random_space


def test_build_space_two_intervals():
    sp = build_space([0, 1, 2], [-1, -1])
    assert np.allclose(sp.theta, [0.25, 0.25])
    assert np.allclose(sp.xi, [0.0, 0.75, 1.75])
    assert np.allclose(sp.eta, [0.25, 1.25, 2.0])
    assert np.allclose(sp.omega, [1.0, 0.5, 0.0])
    assert np.allclose(sp.midpoints, [0.5, 1.5])
    assert sp.dimension == 6


def test_build_space_single_interval():
    sp = build_space([0, 1], [-1])
    assert np.allclose(sp.theta, [0.25])
    assert np.allclose(sp.xi, [0.0, 0.75])
    assert np.allclose(sp.eta, [0.25, 1.0])
    assert np.allclose(sp.omega, [1.0, 0.0])


def test_theta_formula():
    assert theta_from_beta(-2.0 / 3.0) == pytest.approx(0.2, abs=1e-15)
    assert theta_from_beta(-1.0) == 0.25


def test_beta_from_theta_values():
    assert beta_from_theta(0.25) == -1.0
    assert beta_from_theta(0.2) == pytest.approx(-2.0 / 3.0, rel=1e-15)


def test_beta_theta_round_trip():
    for beta in (-1.0, -0.5, -0.25, -0.999, -0.01):
        assert beta_from_theta(theta_from_beta(beta)) == pytest.approx(beta, rel=1e-12)
    for theta in (0.25, 0.2, 0.1, 1e-3):
        assert theta_from_beta(beta_from_theta(theta)) == pytest.approx(theta, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, 0.1, -1.0001, 1.0])
def test_beta_range_rejected(bad):
    with pytest.raises(GqsValidationError):
        build_space([0, 1], [bad])


@pytest.mark.parametrize("knots", [[0, 0, 1], [1, 0], [0], [0, np.inf]])
def test_bad_knots_rejected(knots):
    with pytest.raises(GqsValidationError):
        build_space(knots, [-1] * (max(len(knots) - 1, 1)))


def test_length_mismatch_rejected():
    with pytest.raises(GqsValidationError):
        build_space([0, 1, 2], [-1])


def test_space_invariants_random():
    rng = np.random.default_rng(99)
    for _ in range(40):
        sp = random_space(rng=rng)
        n = sp.n
        h = sp.lengths
        # theta in (0, 1/4] and beta round-trips
        assert np.all(sp.theta > 0) and np.all(sp.theta <= 0.25)
        assert np.allclose(beta_from_theta(sp.theta), sp.betas, rtol=1e-12)
        # xi/eta gap identity on each interval
        assert np.allclose(
            sp.xi[1:] - sp.eta[:-1], (1 - 2 * sp.theta) * h, rtol=1e-12, atol=1e-15
        )
        assert np.all(sp.xi[1:] - sp.eta[:-1] > 0)
        # interleaving x0 = xi0 <= eta0 < xi1 <= ... <= eta_n = x_n
        merged = np.empty(2 * n + 2)
        merged[0::2] = sp.xi
        merged[1::2] = sp.eta
        assert np.all(np.diff(merged) >= 0)
        assert merged[0] == sp.knots[0] and merged[-1] == sp.knots[-1]
        # omega convention and interior range
        assert sp.omega[0] == 1.0 and sp.omega[-1] == 0.0
        assert np.all((sp.omega[1:-1] > 0) & (sp.omega[1:-1] < 1))
        # theta_h padding
        assert sp.theta_h[0] == 0.0 and sp.theta_h[-1] == 0.0
        assert np.allclose(sp.theta_h[1:-1], sp.theta * h, rtol=1e-15)


def test_uniform_classical_case():
    n = 6
    sp = build_space(np.linspace(0, 3, n + 1), np.full(n, -1.0))
    assert np.allclose(sp.theta, 0.25)
    assert np.allclose(sp.omega[1:-1], 0.5)


def test_holder_exponent():
    assert holder_exponent(-1.0) == 1.0
    betas = np.linspace(-1.0, -1e-3, 50)
    gammas = holder_exponent(betas)
    assert np.all(gammas > 0) and np.all(gammas <= 1.0)
    # decreases as beta increases toward 0
    assert np.all(np.diff(gammas) < 0)


def test_space_is_immutable():
    sp = build_space([0, 1], [-0.5])
    with pytest.raises(ValueError):
        sp.knots[0] = 5.0


def test_holder_exponents_property():
    sp = build_space([0, 1, 2], [-1.0, -0.5])
    assert np.allclose(sp.holder_exponents, holder_exponent(np.array([-1.0, -0.5])))
    assert sp.holder_exponents[0] == 1.0
