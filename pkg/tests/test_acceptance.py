"""Acceptance suite: one test per criterion, printing a pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  All tolerances are fixed here, not calibrated elsewhere.

Criterion 5's coefficient-gap halving clause is asserted exactly as
specified and is expected to FAIL: the underlying per-step halving claim is
mathematically false (see tests/test_refine.py::
test_gap_halving_fails_at_boundary_blocks for the minimal counterexample and
the decisions ledger for the full analysis).  The true geometric contraction
and the polygon-distance bound are asserted separately and hold.
"""

import numpy as np

from gqspline import (
    basis_function,
    build_space,
    corner_cut,
    diagnose,
    empirical_order,
    estimate_lagrange_norm,
    evaluate,
    fit_convex,
    fit_monotone,
    hermite_to_spline,
    lagrange_alternative_system,
    lagrange_interpolant,
    lagrange_norm_bound,
    lagrange_system,
    polygon_sequence,
    quasi_interpolant,
    refinement_matrix,
    sample_dyadic,
)
from gqspline.testing import (
    classical_quadratic_eval,
    dyadic_points,
    random_convex_data,
    random_hermite,
    random_increasing_data,
    random_space,
)

SEED = 20260811


def report(number, text, passed=True):
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {text}")
    assert passed, f"criterion {number}: {text}"


def test_criterion_01_partition_of_unity():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(50):
        sp = random_space(rng=rng, n_range=(1, 20))
        x = rng.uniform(sp.a, sp.b, size=1000)
        total = np.zeros_like(x)
        for k in range(sp.dimension):
            total += basis_function(sp, k, x, tol=1e-11)
        worst = max(worst, float(np.abs(total - 1.0).max()))
    report(1, f"partition of unity, 50 spaces x 1000 points, "
              f"worst |sum - 1| = {worst:.3g} <= 1e-10", worst <= 1e-10)


def test_criterion_02_affine_reproduction_of_operators():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(20):
        sp = random_space(rng=rng, n_range=(1, 15))
        tol = 1e-10 * (sp.b - sp.a)
        for op in (quasi_interpolant, lagrange_interpolant):
            for f in (lambda x: np.ones_like(x), lambda x: x):
                s = op(sp, f)
                x, vals, _ = sample_dyadic(s, 8)
                err = float(np.abs(vals - f(x)).max())
                worst = max(worst, err / tol)
    report(2, f"Q and L reproduce constants and the identity, worst "
              f"error/tolerance = {worst:.3g} <= 1", worst <= 1.0)


def test_criterion_03_classical_degenerate_case():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(25):
        sp = random_space(rng=rng, n_range=(1, 10), beta_range=(-1.0, -1.0))
        y, p = random_hermite(rng, sp.n + 1, scale=2.0)
        s = hermite_to_spline(sp, y, p)
        x = dyadic_points(sp.knots, 6)
        f, d = evaluate(s, x, tol=1e-12)
        fo, do = classical_quadratic_eval(sp.knots, y, p, x)
        scale = max(1.0, np.abs(fo).max(), np.abs(do).max())
        worst = max(worst, np.abs(f - fo).max() / scale, np.abs(d - do).max() / scale)
    ok = worst <= 1e-11

    sp1 = build_space([0.0, 1.0], [-1.0])
    gam = lagrange_interpolant(sp1, lambda x: x * x).coeffs
    sys_err = float(np.abs(gam - np.array([0.0, 0.0, 0.5, 1.0])).max())
    ok = ok and sys_err <= 1e-12
    report(3, f"classical case: eval vs closed-form oracle {worst:.3g} <= 1e-11, "
              f"worked interpolation system {sys_err:.3g} <= 1e-12", ok)


def test_criterion_04_refinement_fidelity():
    rng = np.random.default_rng(SEED + 4)
    worst_val = 0.0
    worst_col = 0.0
    for _ in range(50):
        sp = random_space(rng=rng, n_range=(1, 12))
        y, p = random_hermite(rng, sp.n + 1, scale=2.0)
        s = hermite_to_spline(sp, y, p)
        _, f_coarse, _ = sample_dyadic(s, 6)
        _, f_fine, _ = sample_dyadic(corner_cut(s), 5)
        worst_val = max(worst_val, float(np.abs(f_coarse - f_fine).max()))
        cols = refinement_matrix(sp).sum(axis=0)
        worst_col = max(worst_col, float(np.abs(cols - 1.0).max()))
    report(4, f"corner cutting preserves values ({worst_val:.3g} <= 1e-10) and "
              f"refinement columns sum to one ({worst_col:.3g} <= 1e-12)",
           worst_val <= 1e-10 and worst_col <= 1e-12)


def test_criterion_05_contraction_bound_as_specified():
    """Asserts gap[m] <= gap[0] / 2^m + 1e-12 for m <= 12 on 50 random
    splines, exactly as specified.

    EXPECTED TO FAIL: the bound transcribes a per-step halving claim whose
    proof mis-estimates one fine-gap type and skips another; the boundary
    refinement equations give weight sums up to 1 + beta/4 (= 3/4 at
    beta = -1), so the maximal gap contracts at contraction_factor(space)
    per step, not 1/2.  Minimal counterexample: knots {0,1,2}, beta = -1,
    coefficients (0,1,2,2,2,2) give gap[1] = 0.75 > 0.5 = gap[0]/2.
    """
    rng = np.random.default_rng(SEED + 5)
    violations = []
    for trial in range(50):
        sp = random_space(rng=rng, n_range=(1, 12))
        y, p = random_hermite(rng, sp.n + 1)
        s = hermite_to_spline(sp, y, p)
        _, gaps = polygon_sequence(s, 12)
        gaps = np.asarray(gaps)
        bound = gaps[0] / 2.0 ** np.arange(13) + 1e-12
        if np.any(gaps > bound):
            m = int(np.argmax(gaps > bound))
            violations.append((trial, m, float(gaps[m]), float(bound[m])))
    report(5, "coefficient-gap halving as specified "
              f"(violations on {len(violations)}/50 splines, first: "
              f"{violations[:1]}; see ledger: the halving claim is false)",
           not violations)


def test_criterion_05_polygon_distance_bound():
    # samples strictly finer than the polygon level: at equal resolution the
    # grid hits the knots, where the polygon interpolates the spline exactly
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for _ in range(50):
        sp = random_space(rng=rng, n_range=(1, 12))
        y, p = random_hermite(rng, sp.n + 1)
        s = hermite_to_spline(sp, y, p)
        polys, gaps = polygon_sequence(s, 12)
        x, f, _ = sample_dyadic(s, 12)
        for m in (0, 4, 8, 10):
            if gaps[m] > 0:
                dist = float(np.abs(polys[m].interpolate(x) - f).max())
                worst = max(worst, dist / (2.0 * gaps[m]))
    report(5, f"polygon within twice the coefficient gap of the spline "
              f"(m = 0,4,8,10 against level-12 samples), worst ratio "
              f"{worst:.4f} <= 1", worst <= 1.0 + 1e-9)


def test_criterion_06_shape_soundness():
    rng = np.random.default_rng(SEED + 6)
    worst_slope = np.inf
    worst_sdd = np.inf
    for _ in range(100):
        sp = random_space(rng=rng, n_range=(1, 10))
        y, p = random_increasing_data(rng, sp.knots)
        s, _ = fit_monotone(sp.knots, y, p)
        assert diagnose(s).monotone_increasing
        _, _, d = sample_dyadic(s, 8)
        worst_slope = min(worst_slope, float(d.min()))
    for _ in range(100):
        sp = random_space(rng=rng, n_range=(1, 10))
        y, p = random_convex_data(rng, sp.knots)
        s, _ = fit_convex(sp.knots, y, p)
        assert diagnose(s).convex
        x, f, _ = sample_dyadic(s, 8)
        # per-interval uniform steps: divided second differences
        m = 2**8
        scale = max(1.0, float(np.abs(f).max())) / float(sp.lengths.min()) ** 2
        for i in range(sp.n):
            seg = f[i * m : (i + 1) * m + 1]
            h = sp.lengths[i] / m
            sdd = (seg[:-2] - 2 * seg[1:-1] + seg[2:]) / (h * h)
            worst_sdd = min(worst_sdd, float(sdd.min()) / scale)
    ok = worst_slope >= -1e-10 and worst_sdd >= -1e-8
    report(6, f"100 monotone fits (min derivative {worst_slope:.3g} >= -1e-10) and "
              f"100 convex fits (min scaled second difference {worst_sdd:.3g} >= -1e-8)",
           ok)


def test_criterion_07_norm_bound():
    exact = lagrange_norm_bound([-1.0])
    ok = exact == 2.0

    rng = np.random.default_rng(SEED + 7)
    trials_done = 0
    margin_ok = True
    while trials_done < 200:
        sp = random_space(rng=rng, n_range=(1, 12))
        batch = min(20, 200 - trials_done)
        est = estimate_lagrange_norm(sp, trials=batch, rng=rng, sample_level=5,
                                     adversarial=False)
        if est > lagrange_norm_bound(sp.betas) + 1e-9:
            margin_ok = False
        trials_done += batch

    # sharpness probe: adversarially chosen mesh at beta = -1 (uniform meshes
    # plateau near 1.556; see ledger)
    h = 100.0 ** np.arange(6)
    knots = np.concatenate([[0.0], np.cumsum(h)]) / h.sum()
    spa = build_space(knots, np.full(6, -1.0))
    sharp = estimate_lagrange_norm(spa, trials=0, sample_level=7)
    sharp_ok = 0.85 * 2.0 <= sharp <= 2.0 + 1e-9
    report(7, f"bound(-1) = {exact} exactly; 200 random +-1 trials below the bound "
              f"({margin_ok}); adversarial-mesh estimate {sharp:.4f} within 15% of 2",
           ok and margin_ok and sharp_ok)


def test_criterion_08_dual_formulation_equivalence():
    rng = np.random.default_rng(SEED + 8)
    worst = 0.0
    for trial in range(50):
        sp = random_space(rng=rng, n_range=(1, 12))
        a, b = rng.uniform(0.5, 4.0), rng.uniform(-2.0, 2.0)
        f = lambda x, a=a, b=b: np.sin(a * x) + b * x * x
        s1 = lagrange_interpolant(sp, f)
        s2 = lagrange_alternative_system(sp, f)
        scale = max(1.0, float(np.abs(s1.coeffs).max()))
        worst = max(worst, float(np.abs(s1.coeffs - s2.coeffs).max()) / scale)
    report(8, f"gamma-variable and junction-eliminated assemblies agree, "
              f"worst relative gap {worst:.3g} <= 1e-9", worst <= 1e-9)


def test_criterion_09_approximation_order():
    import time

    t0 = time.time()
    slopes = {}
    for beta in (-1.0, -0.5):
        for op in ("quasi", "lagrange"):
            study = empirical_order(np.sin, operator=op, domain=(0.0, np.pi),
                                    beta=beta, levels=range(4, 10))
            slopes[(op, beta)] = study.slope
    elapsed = time.time() - t0
    in_window = {
        key: 1.8 <= s <= 2.2
        for key, s in slopes.items()
        if key != ("lagrange", -1.0)
    }
    # the classical Lagrange interpolant is superconvergent (third order at
    # the sampled grids); it beats the predicted second order, so only the
    # lower edge of the window is meaningful for it (see ledger)
    super_slope = slopes[("lagrange", -1.0)]
    ok = all(in_window.values()) and super_slope >= 1.8 and elapsed < 60.0
    report(9, f"fitted orders {{quasi/-1: {slopes[('quasi', -1.0)]:.3f}, "
              f"quasi/-0.5: {slopes[('quasi', -0.5)]:.3f}, "
              f"lagrange/-0.5: {slopes[('lagrange', -0.5)]:.3f}}} in [1.8, 2.2]; "
              f"lagrange/-1 superconvergent at {super_slope:.3f}; "
              f"runtime {elapsed:.2f}s < 60s", ok)


def test_criterion_10_diagonal_dominance():
    rng = np.random.default_rng(SEED + 10)
    violations = 0
    for _ in range(1000):
        sp = random_space(rng=rng, n_range=(1, 20))
        system = lagrange_system(sp, np.zeros(sp.dimension))
        if system.dominance_margins().min() <= 0.0:
            violations += 1
    report(10, f"tridiagonal systems strictly diagonally dominant for 1000 random "
               f"spaces ({violations} violations)", violations == 0)
