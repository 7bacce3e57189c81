import math

import numpy as np
import pytest
import scipy.integrate
from scipy.interpolate import CubicSpline

from mfelab import (
    MfeProblem,
    Pinned,
    Positive,
    Power,
    RadialGrid,
    WeightProfile,
    analyze_eigenfunction,
    build_weight,
    classify_singular,
    count_domains,
    find_zeros,
    fit_vanishing_order,
    hopf_sign_check,
    solve,
    solve_modes,
    verify_bounds,
    weighted_averages,
)
from mfelab.errors import PoorFitError, ResolutionError
from mfelab.nodal import NodalReport, SingularPoint


@pytest.fixture(scope="module")
def mode0_half(baseline_half):
    _, sol, weight = baseline_half
    return solve_modes(weight, sol.lambda_effective, [0], 4)[0], weight, sol


class TestFindZeros:
    def test_sine_profile(self, grid512):
        phi = np.sin(3 * math.pi * grid512.nodes)
        zeros = find_zeros(phi, grid512)
        assert len(zeros) == 3
        assert zeros[0] == pytest.approx(1 / 3, abs=1e-6)
        assert zeros[1] == pytest.approx(2 / 3, abs=1e-6)
        assert zeros[2] == pytest.approx(1.0, abs=1e-12)

    def test_tangential_boundary_zero(self, grid512):
        phi = (1 - grid512.nodes) ** 2
        zeros = find_zeros(phi, grid512)
        assert zeros == [pytest.approx(1.0)]

    def test_origin_excluded(self, grid512):
        phi = np.sin(2 * math.pi * grid512.nodes)
        zeros = find_zeros(phi, grid512)
        assert all(z > 0.1 for z in zeros)
        assert len(zeros) == 2

    def test_baseline_eigenfunction_vs_sign_scan(self, mode0_half, grid512):
        # oracle: sign scan of the interpolant at 4x resolution
        s0, _, _ = mode0_half
        phi = s0.eigenfunctions[2]
        zeros = find_zeros(phi, grid512)
        spline = CubicSpline(grid512.nodes, phi)
        fine = np.linspace(0, 1, 4 * 512)
        samples = spline(fine)
        floor = 1e-9 * np.max(np.abs(phi))
        crossings = []
        for i in range(fine.size - 1):
            if (
                samples[i] * samples[i + 1] < 0
                and abs(samples[i]) > floor
                and abs(samples[i + 1]) > floor
            ):
                crossings.append(0.5 * (fine[i] + fine[i + 1]))
        interior = [z for z in zeros if z < 1.0]
        assert len(interior) == len(crossings)
        for z, c in zip(interior, crossings):
            assert z == pytest.approx(c, abs=2e-4)

    def test_close_zeros_raise(self):
        g = RadialGrid.uniform(64, 2)
        phi = np.sin(40 * math.pi * g.nodes)
        with pytest.raises(ResolutionError):
            find_zeros(phi, g)

    def test_zero_count_cap(self, grid512):
        # 70 well-separated zeros exceed the supported count
        phi = np.sin(70 * math.pi * grid512.nodes)
        with pytest.raises(ResolutionError):
            find_zeros(phi, grid512)


class TestClassifySingular:
    def test_interior_tangential_touch_is_singular(self, grid512):
        # positive profile touching zero quadratically at r = 0.5
        r = grid512.nodes
        phi = (r - 0.5) ** 2 * (1 - r) * (r + 0.3)
        weight = WeightProfile(grid512, np.ones(512), Positive())
        point = classify_singular(
            phi, weight, lam=1.0, sigma=2.0, avg=0.2, radius=0.5,
            zero_tol=1e-8, slope_tol=1e-6,
        )
        assert isinstance(point, SingularPoint)
        assert point.second_derivative > 0

    def test_sign_change_zero_is_regular(self, grid512):
        r = grid512.nodes
        phi = np.sin(2 * math.pi * r)
        weight = WeightProfile(grid512, np.ones(512), Positive())
        assert (
            classify_singular(phi, weight, 1.0, 2.0, 0.2, radius=0.5)
            is None
        )

    def test_degenerate_boundary_reports_vanishing_order(self):
        g = RadialGrid.graded(1025, 2, strength=2.0)
        problem = MfeProblem(n=2, lam=0.0, nonlinearity=Power(2.0),
                             alpha_mode=Pinned(0.0))
        sol = solve(problem, g, tol=1e-10)
        weight = build_weight(problem, sol)
        s0 = solve_modes(weight, sol.lambda_effective, [0], 1)[0]
        point = classify_singular(
            s0.eigenfunctions[0], weight, sol.lambda_effective,
            float(s0.sigmas[0]), float(s0.averages[0]), radius=1.0,
            slope_tol=1e-2, fit_window=192,
        )
        assert isinstance(point, SingularPoint)
        assert point.vanishing_order == pytest.approx(3.0, rel=0.07)


class TestCountDomains:
    def test_three_domains_from_two_crossings(self, grid512):
        phi = np.sin(3 * math.pi * grid512.nodes)
        zeros = find_zeros(phi, grid512)
        domains = count_domains(phi, grid512, zeros, singulars=[])
        assert len(domains) == 3
        assert [d[2] for d in domains] == [1, -1, 1]
        # outermost first
        assert domains[0][1] == pytest.approx(1.0)

    def test_singular_sphere_merges_regions(self, grid512):
        r = grid512.nodes
        phi = (r - 0.5) ** 2 * (1 - r) * (r + 0.3)
        zeros = find_zeros(phi, grid512)
        singulars = [SingularPoint(0.5, 1.0, 2.0)]
        matching = [z for z in zeros if abs(z - 0.5) < 1e-6]
        singulars = [SingularPoint(matching[0], 1.0, 2.0)]
        domains = count_domains(phi, grid512, zeros, singulars)
        assert len(domains) == 1
        assert domains[0][2] == 1

    def test_rescaling_invariance(self, mode0_half, grid512):
        s0, _, _ = mode0_half
        phi = s0.eigenfunctions[2]
        zeros = find_zeros(phi, grid512)
        d1 = count_domains(phi, grid512, zeros, [])
        zeros2 = find_zeros(7.5 * phi, grid512)
        d2 = count_domains(7.5 * phi, grid512, zeros2, [])
        assert len(d1) == len(d2)
        assert [d[2] for d in d1] == [d[2] for d in d2]

    def test_unresolvable_sign_raises(self, grid512):
        phi = np.zeros(512)
        phi[100] = 1e-30
        with pytest.raises(ResolutionError):
            count_domains(phi, grid512, [0.5], [])


class TestWeightedAverages:
    def test_single_domain_equals_average(self, grid512):
        weight = WeightProfile(grid512, np.ones(512), Positive())
        phi = 1 - grid512.nodes**2
        domains = [(0.0, 1.0, 1)]
        m, m_total = weighted_averages(phi, weight, domains)
        oracle = scipy.integrate.quad(
            lambda r: (1 - r**2) * r, 0, 1
        )[0] * 2 * math.pi / weight.total
        assert m[0] == pytest.approx(oracle, rel=1e-6)
        assert m_total == pytest.approx(m[0])

    def test_two_domain_sign_pattern(self, mode0_half, grid512):
        s0, weight, _ = mode0_half
        phi = s0.eigenfunctions[1]
        zeros = find_zeros(phi, grid512)
        domains = count_domains(phi, grid512, zeros, [])
        assert len(domains) == 2
        m, m_total = weighted_averages(phi, weight, domains)
        assert m[0] > 0 > m[1]
        assert m_total == pytest.approx(float(s0.averages[1]), abs=1e-6)
        # oracle: direct quadrature of the spline against the weight
        spline = CubicSpline(grid512.nodes, phi)
        vfun = lambda r: np.interp(r, grid512.nodes, weight.v)  # noqa: E731
        inner = domains[0][0]
        outer_piece = scipy.integrate.quad(
            lambda r: spline(r) * vfun(r) * r, inner, 1.0, limit=200
        )[0] * 2 * math.pi / weight.total
        assert m[0] == pytest.approx(outer_piece, rel=1e-6)

    def test_partition_sums_exactly(self, mode0_half, grid512):
        s0, weight, _ = mode0_half
        phi = s0.eigenfunctions[3]
        zeros = find_zeros(phi, grid512)
        domains = count_domains(phi, grid512, zeros, [])
        m, m_total = weighted_averages(phi, weight, domains)
        full, full_total = weighted_averages(phi, weight, [(0.0, 1.0, 1)])
        assert m_total == pytest.approx(full_total, abs=1e-12)


class TestReportsAndBounds:
    def test_baseline_reports(self, mode0_half):
        s0, weight, sol = mode0_half
        reports = []
        for i in range(4):
            rep = analyze_eigenfunction(
                s0.eigenfunctions[i], weight, sol.lambda_effective,
                float(s0.sigmas[i]), float(s0.averages[i]), eigen_index=i + 1,
            )
            reports.append(rep)
            assert rep.bound_satisfied
            assert rep.domain_count <= 2 * (i + 1)
            assert float(np.sum(rep.averages)) == pytest.approx(rep.m_total, abs=1e-10)
        assert reports[0].domain_count <= 2
        summary = verify_bounds(reports)
        assert summary.ok
        assert summary.max_count_per_index[1] <= 2

    def test_boundary_zero_is_singular_point(self, mode0_half):
        s0, weight, sol = mode0_half
        rep = analyze_eigenfunction(
            s0.eigenfunctions[0], weight, sol.lambda_effective,
            float(s0.sigmas[0]), float(s0.averages[0]), eigen_index=1,
        )
        boundary = [p for p in rep.singular_points if p.radius == pytest.approx(1.0)]
        assert len(boundary) == 1
        assert boundary[0].second_derivative > 0

    def test_hopf_outward_slopes(self, mode0_half, grid512):
        s0, weight, _ = mode0_half
        for i in (1, 2, 3):
            phi = s0.eigenfunctions[i]
            zeros = find_zeros(phi, grid512)
            domains = count_domains(phi, grid512, zeros, [])
            ok, margins = hopf_sign_check(phi, grid512, domains)
            assert ok
            assert all(m > 0 for m in margins)

    def test_alternation_violation_rejected(self):
        with pytest.raises(ArithmeticError):
            NodalReport(
                zeros=[0.5, 1.0],
                singular_points=[],
                domains=[(0.5, 1.0, -1), (0.0, 0.5, 1)],
                averages=np.array([-0.2, 0.5]),
                m_total=0.3,
                eigen_index=1,
                bound_satisfied=True,
                zero_tol=1e-8,
                slope_tol=1e-6,
            )


class TestVanishingOrderFit:
    def test_quadratic_monomial(self, grid512):
        u = (1 - grid512.nodes) ** 2
        beta, coeff, resid = fit_vanishing_order(u, grid512, 1.0, window=16)
        assert beta == pytest.approx(2.0, abs=1e-3)
        assert coeff == pytest.approx(1.0, rel=1e-3)
        assert resid < 1e-6

    def test_degenerate_weight_order(self):
        g = RadialGrid.graded(1025, 2, strength=2.0)
        problem = MfeProblem(n=2, lam=0.0, nonlinearity=Power(2.0),
                             alpha_mode=Pinned(0.0))
        sol = solve(problem, g, tol=1e-10)
        weight = build_weight(problem, sol)
        beta, coeff, _ = fit_vanishing_order(weight.v, g, 1.0, window=192)
        assert beta == pytest.approx(1.0, rel=0.05)
        assert coeff == pytest.approx(weight.boundary_class.v0, rel=0.1)

    def test_degenerate_eigenfunction_order(self):
        g = RadialGrid.graded(1025, 2, strength=2.0)
        problem = MfeProblem(n=2, lam=0.0, nonlinearity=Power(2.0),
                             alpha_mode=Pinned(0.0))
        sol = solve(problem, g, tol=1e-10)
        weight = build_weight(problem, sol)
        s0 = solve_modes(weight, sol.lambda_effective, [0], 1)[0]
        order, _, _ = fit_vanishing_order(s0.eigenfunctions[0], g, 1.0, window=192)
        assert order == pytest.approx(3.0, rel=0.07)

    def test_small_window_rejected(self, grid512):
        with pytest.raises(ValueError):
            fit_vanishing_order((1 - grid512.nodes) ** 2, grid512, 1.0, window=4)

    def test_poor_fit_raises(self, grid512):
        u = np.abs(np.sin(40 * grid512.nodes)) + 1e-3
        u[-1] = 1e-14
        with pytest.raises(PoorFitError):
            fit_vanishing_order(u, grid512, 1.0, window=64)
