import numpy as np
import pytest

from reduction_lab import (
    KarlinFamily,
    KingmanFamily,
    LinearFamily,
    NonUniformGrid,
    NoSignChange,
    NotIrreducible,
    SweepResult,
    check_midpoint_convexity,
    check_monotone_reduction,
    derivative_bound_check,
    find_threshold,
    homogeneity_check,
    kingman_superconvexity_check,
    kirkland_check,
    karlin_monotonicity_check,
    lindqvist_check,
    perron_derivative,
    strict_convexity_probe,
    sweep_spb_in_beta,
    sweep_spb_in_m,
)
from reduction_lab.gallery import karlin_to_linear, random_diagonal, random_ess_nonneg, random_stochastic

A_SYM = np.array([[-1.0, 1.0], [1.0, -1.0]])
V_PM = np.diag([1.0, -1.0])
FAM = LinearFamily(A_SYM, V_PM)


def test_sweep_in_m_closed_form():
    sweep = sweep_spb_in_m(FAM, [0.5, 1.0, 2.0])
    expected = [-m + np.sqrt(m * m + 1.0) for m in (0.5, 1.0, 2.0)]
    np.testing.assert_allclose(sweep.values, expected, atol=1e-10)
    assert sweep.parameter_name == "m"
    assert not sweep.uniform


def test_sweep_constant_when_mixing_vanishes():
    fam = LinearFamily(np.zeros((2, 2)), V_PM)
    sweep = sweep_spb_in_m(fam, [0.5, 1.0, 2.0])
    np.testing.assert_allclose(sweep.values, [1.0, 1.0, 1.0], atol=1e-12)


def test_sweep_scales_linearly_without_growth():
    fam = LinearFamily(A_SYM + np.diag([0.5, 0.5]), np.zeros((2, 2)))
    spb_A = 0.5
    sweep = sweep_spb_in_m(fam, [1.0, 2.0, 4.0])
    np.testing.assert_allclose(sweep.values, spb_A * np.array([1.0, 2.0, 4.0]), atol=1e-10)


def test_sweep_in_beta_closed_form():
    sweep = sweep_spb_in_beta(FAM, [-1.0, 0.0, 1.0])
    expected = [-1.0 + np.sqrt(1.0 + b * b) for b in (-1.0, 0.0, 1.0)]
    np.testing.assert_allclose(sweep.values, expected, atol=1e-10)


def test_sweep_in_beta_diagonal_family_piecewise_linear():
    # A = 0 reduces the sweep to max_i(beta * d_i), a convex piecewise-linear curve
    fam = LinearFamily(np.zeros((2, 2)), np.diag([1.0, -2.0]))
    grid = np.linspace(-2.0, 2.0, 9)
    sweep = sweep_spb_in_beta(fam, grid)
    np.testing.assert_allclose(sweep.values, np.maximum(grid, -2.0 * grid), atol=1e-12)
    assert check_midpoint_convexity(sweep).convex


def test_sweep_requires_positive_m():
    with pytest.raises(ValueError):
        sweep_spb_in_m(FAM, [-1.0, 1.0, 2.0])


def test_sweep_annotates_solver_errors(monkeypatch):
    import reduction_lab.checks as checks_mod
    from reduction_lab import NoConvergence

    def explode(M):
        raise NoConvergence("iteration cap reached")

    monkeypatch.setattr(checks_mod, "spectral_bound", explode)
    with pytest.raises(NoConvergence, match=r"at m = 1"):
        sweep_spb_in_m(FAM, [1.0, 2.0, 3.0])
    with pytest.raises(NoConvergence, match=r"at beta = -1"):
        sweep_spb_in_beta(FAM, [-1.0, 0.0, 1.0])


def test_sweep_result_validation():
    with pytest.raises(ValueError):
        SweepResult("m", [1.0, 2.0], [0.0, 0.0], "x")
    with pytest.raises(ValueError):
        SweepResult("m", [1.0, 1.0, 2.0], [0.0, 0.0, 0.0], "x")


def test_midpoint_convexity_on_closed_form_curve():
    sweep = sweep_spb_in_m(FAM, [0.5, 1.0, 1.5, 2.0])
    report = check_midpoint_convexity(sweep)
    assert report.convex
    assert report.strictness_margin > 0
    assert report.worst_violation == 0.0


def test_midpoint_convexity_affine_curve():
    sweep = SweepResult("m", [1.0, 2.0, 3.0, 4.0], [0.5, 1.0, 1.5, 2.0], "affine")
    report = check_midpoint_convexity(sweep)
    assert report.convex
    assert abs(report.strictness_margin) <= 1e-12


def test_midpoint_convexity_concave_spike():
    sweep = SweepResult("m", [1.0, 2.0, 3.0], [0.0, 1.0, 0.0], "spike")
    report = check_midpoint_convexity(sweep)
    assert not report.convex
    assert report.worst_violation == -2.0
    assert report.witness_index == 1


def test_midpoint_convexity_rejects_nonuniform_grid():
    sweep = sweep_spb_in_m(FAM, [0.5, 1.0, 2.0])
    with pytest.raises(NonUniformGrid):
        check_midpoint_convexity(sweep)


def test_monotone_reduction_strict_branch():
    sweep = sweep_spb_in_m(FAM, np.linspace(0.5, 3.0, 9))
    out = check_monotone_reduction(sweep, 0.0)
    assert out.passed and out.detail == "strict branch"
    assert out.margin > 0


def test_monotone_reduction_equality_branch_scalar_family():
    fam = LinearFamily(-np.eye(2), np.zeros((2, 2)))
    sweep = sweep_spb_in_m(fam, np.linspace(0.5, 2.5, 5))
    out = check_monotone_reduction(sweep, -1.0)
    assert out.passed and out.detail == "equality branch"
    assert abs(out.margin) <= 1e-12


def test_monotone_reduction_identity_pattern():
    lin = karlin_to_linear(KarlinFamily(np.eye(2), np.diag([2.0, 0.5])))
    sweep = sweep_spb_in_m(lin, np.linspace(0.5, 2.0, 4))
    out = check_monotone_reduction(sweep, 0.0)
    assert out.passed and out.detail == "equality branch"


def test_monotone_reduction_flags_violation():
    sweep = SweepResult("m", [1.0, 2.0, 3.0], [0.0, 0.5, 0.1], "increase")
    out = check_monotone_reduction(sweep, 0.0)
    assert not out.passed


def test_derivative_bound_fixture():
    out = derivative_bound_check(FAM, 1.0)
    assert out.passed
    assert abs(out.witness["fd"] - (-1.0 + 1.0 / np.sqrt(2.0))) <= 1e-6


def test_derivative_bound_equality_when_growth_vanishes():
    fam = LinearFamily(A_SYM + np.diag([0.2, 0.2]), np.zeros((2, 2)))
    out = derivative_bound_check(fam, 1.0)
    assert out.passed
    assert abs(out.margin) <= 1e-6  # homogeneous family sits exactly on the bound


def test_derivative_bound_karlin_family():
    lin = karlin_to_linear(KarlinFamily(random_stochastic(4, 2), random_diagonal(4, 0.3, 2.0, 5)))
    out = derivative_bound_check(lin, 1.0)
    assert out.passed
    assert out.witness["fd"] <= 1e-6  # spb(A) = 0 for these families


def test_perron_derivative_fixture():
    d = perron_derivative(FAM, 1.0)
    assert abs(d - (-1.0 + 1.0 / np.sqrt(2.0))) <= 1e-9


def test_perron_derivative_equals_spb_when_growth_vanishes():
    A = random_ess_nonneg(4, 12)
    fam = LinearFamily(A, np.zeros((4, 4)))
    from reduction_lab import spectral_bound

    assert abs(perron_derivative(fam, 1.0) - spectral_bound(A).spb) <= 1e-10


def test_perron_derivative_scaling_relation():
    A = random_ess_nonneg(3, 3)
    V = random_diagonal(3, -1.0, 1.0, 4)
    c, m = 2.5, 0.8
    left = perron_derivative(LinearFamily(c * A, V), m)
    right = c * perron_derivative(LinearFamily(A, V), c * m)
    assert abs(left - right) <= 1e-9 * max(1.0, abs(left))


def test_perron_derivative_requires_irreducible():
    fam = LinearFamily(np.zeros((2, 2)), V_PM)
    with pytest.raises(NotIrreducible):
        perron_derivative(fam, 1.0)


def test_lindqvist_fixture():
    out = lindqvist_check(A_SYM, V_PM)
    assert out.passed
    assert abs(out.margin - (np.sqrt(2.0) - 1.0)) <= 1e-9


def test_lindqvist_equality_for_scalar_shift():
    out = lindqvist_check(A_SYM, 3.0 * np.eye(2))
    assert out.passed
    assert abs(out.margin) <= 1e-10


def test_lindqvist_randomized():
    for seed in range(60):
        n = 2 + seed % 4
        out = lindqvist_check(random_ess_nonneg(n, seed), random_diagonal(n, -2.0, 2.0, seed + 1))
        assert out.passed
        assert out.margin >= -1e-9


def test_kirkland_fixture():
    out = kirkland_check(np.array([[0.0, 1.0], [1.0, -2.0]]))
    assert out.passed
    assert abs(out.witness["lhs"] - 1.0 / np.sqrt(2.0)) <= 1e-9
    assert out.detail == "strict branch"


def test_kirkland_equality_branch():
    # column-stochastic mixing makes e^T A = 0 = spb(A) e^T exactly
    C = random_stochastic(3, 1).T
    A = (C - np.eye(3)) * np.diagonal(random_diagonal(3, 0.5, 1.5, 2))[None, :]
    out = kirkland_check(A)
    assert out.passed
    assert out.detail == "equality branch"


def test_kirkland_randomized():
    for seed in range(60):
        out = kirkland_check(random_ess_nonneg(2 + seed % 4, seed))
        assert out.passed


def test_kingman_fixture_log_cosh():
    fam = KingmanFamily(np.ones((2, 2)), np.diag([1.0, -1.0]))
    report = kingman_superconvexity_check(fam, np.linspace(-2.0, 2.0, 9))
    assert report.convex
    assert report.strictness_margin > 0


def test_kingman_constant_family_weakly_convex():
    fam = KingmanFamily(np.full((2, 2), 0.7), np.zeros((2, 2)))
    report = kingman_superconvexity_check(fam, np.linspace(-1.0, 1.0, 5))
    assert report.convex
    assert abs(report.strictness_margin) <= 1e-11


def test_kingman_diagonal_family_log_affine():
    fam = KingmanFamily(np.eye(2), np.diag([1.0, 2.0]))
    report = kingman_superconvexity_check(fam, np.linspace(0.5, 1.5, 5))
    assert report.convex
    assert abs(report.strictness_margin) <= 1e-10  # log rho = 2 theta is affine


def test_kingman_zero_radius_rejected():
    from reduction_lab import ZeroSpectralRadius

    nilpotent = KingmanFamily(np.array([[0.0, 1.0], [0.0, 0.0]]), np.zeros((2, 2)))
    with pytest.raises(ZeroSpectralRadius):
        kingman_superconvexity_check(nilpotent, np.linspace(-1.0, 1.0, 5))


def test_karlin_monotonicity_fixture():
    fam = KarlinFamily(np.array([[0.0, 1.0], [1.0, 0.0]]), np.diag([2.0, 0.5]))
    out = karlin_monotonicity_check(fam, [0.0, 0.5, 1.0])
    assert out.passed
    assert out.margin > 0


def test_karlin_monotonicity_scalar_growth():
    fam = KarlinFamily(np.array([[0.0, 1.0], [1.0, 0.0]]), 3.0 * np.eye(2))
    out = karlin_monotonicity_check(fam, np.linspace(0.0, 1.0, 5))
    assert out.passed
    assert abs(out.margin) <= 1e-10


def test_karlin_monotonicity_requires_irreducible_pattern():
    fam = KarlinFamily(np.eye(2), np.diag([2.0, 0.5]))
    with pytest.raises(NotIrreducible):
        karlin_monotonicity_check(fam, [0.0, 0.5, 1.0])


def test_homogeneity_fixture():
    out = homogeneity_check(FAM, 1.0, 1.0, [0.1, 1.0, 2.0, 10.0])
    assert out.passed
    from reduction_lab import spectral_bound

    scaled = spectral_bound(2.0 * FAM.matrix_at(1.0, 1.0)).spb
    assert abs(scaled - 2.0 * (np.sqrt(2.0) - 1.0)) <= 1e-9


def test_homogeneity_randomized():
    for seed in range(20):
        n = 2 + seed % 4
        fam = LinearFamily(random_ess_nonneg(n, seed), random_diagonal(n, -1.0, 1.0, seed + 50))
        assert homogeneity_check(fam, 1.0, 1.0, [0.1, 1.0, 10.0]).passed


def test_find_threshold_fixture():
    fam = LinearFamily(A_SYM, np.diag([1.0, -2.0]))
    assert abs(find_threshold(fam, 0.1, 10.0) - 2.0) <= 1e-8


def test_find_threshold_no_sign_change():
    with pytest.raises(NoSignChange):
        find_threshold(FAM, 0.1, 10.0)  # spb = -m + sqrt(m^2+1) > 0 everywhere


def test_find_threshold_scalar_family():
    fam = LinearFamily(-np.eye(2), np.eye(2))
    assert abs(find_threshold(fam, 0.2, 5.0) - 1.0) <= 1e-8


def test_find_threshold_rejects_non_monotone_bracket():
    from reduction_lab import NotMonotoneOnBracket

    # spb here is -m - 1 + sqrt(9 + 4 m^2) - 2: convex with an interior
    # minimum near m = 0.87, so the bracket certification must refuse it
    fam = LinearFamily([[-1.0, 2.0], [2.0, -1.0]], np.diag([0.0, -6.0]))
    with pytest.raises(NotMonotoneOnBracket):
        find_threshold(fam, 0.1, 5.0)


def test_strict_convexity_probe_flat_for_scalar_growth():
    fam = LinearFamily(A_SYM, 2.0 * np.eye(2))
    report = strict_convexity_probe(fam, np.linspace(-2.0, 2.0, 9))
    assert report.convex
    assert abs(report.strictness_margin) <= 1e-10


def test_strict_convexity_probe_strict_for_heterogeneous_growth():
    report = strict_convexity_probe(FAM, np.linspace(-2.0, 2.0, 9))
    assert report.convex
    assert report.strictness_margin > 1e-6


def test_convexity_in_beta_randomized():
    for seed in range(40):
        n = 2 + seed % 5
        fam = LinearFamily(random_ess_nonneg(n, seed), random_diagonal(n, -1.5, 1.5, seed + 100))
        report = check_midpoint_convexity(sweep_spb_in_beta(fam, np.linspace(-3.0, 3.0, 11)))
        assert report.convex


def test_convexity_in_m_randomized():
    for seed in range(40):
        n = 2 + seed % 5
        fam = LinearFamily(random_ess_nonneg(n, seed), random_diagonal(n, -1.5, 1.5, seed + 100))
        report = check_midpoint_convexity(sweep_spb_in_m(fam, np.linspace(0.1, 5.0, 11)))
        assert report.convex


def test_reduction_dichotomy_uniform_across_random_sweeps():
    from reduction_lab import spectral_bound

    for seed in range(25):
        n = 2 + seed % 5
        fam = LinearFamily(random_ess_nonneg(n, seed), random_diagonal(n, -1.5, 1.5, seed + 100))
        sweep = sweep_spb_in_m(fam, np.linspace(0.1, 5.0, 11))
        out = check_monotone_reduction(sweep, spectral_bound(fam.A).spb)
        assert out.passed
        assert out.detail in ("strict branch", "equality branch")
