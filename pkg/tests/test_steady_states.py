import numpy as np
import pytest

import viralfronts as vf
from helpers import make_params


class TestDirichletBvp:
    def test_input_validation(self):
        p = make_params()
        with pytest.raises(vf.ValidationError):
            vf.solve_dirichlet_bvp(-1.0, p, 1.0, 129)
        with pytest.raises(vf.ValidationError):
            vf.solve_dirichlet_bvp(1.0, p, 1.0, 32)

    def test_subcritical_interval_has_no_solution(self):
        p = make_params()
        sol = vf.solve_dirichlet_bvp(1.0, p, 0.5, 129)
        assert isinstance(sol, vf.NoPositiveSolution)
        assert sol.lambda1 == pytest.approx(
            vf.eigen_for_model(1.0, p, -0.5, 0.5).lambda1)
        assert sol.lambda1 < 0

    def test_bounded_by_saturation_and_monotone_in_l(self):
        p = make_params()
        _, wh = vf.w_hat(1.0, p)
        prev_max = 0.0
        for l in (1.2, 2.0, 4.0, 8.0):
            sol = vf.solve_dirichlet_bvp(1.0, p, l, 257)
            assert sol.converged
            assert np.all(sol.w_vals <= wh * (1 + 1e-12))
            assert np.all(sol.w_vals >= 0)
            cur = float(sol.w_vals.max())
            assert cur > prev_max
            prev_max = cur
        assert sol.v_vals == pytest.approx(
            p.b * 1.0 * sol.w_vals / (p.c * (1 + sol.w_vals)), rel=1e-12)

    def test_large_interval_reaches_saturation(self):
        p = make_params()
        sol = vf.solve_dirichlet_bvp(1.0, p, 20.0, 4000)
        center = sol.w_vals[sol.w_vals.size // 2]
        assert abs(center - 1.0) < 1e-3  # w_hat(1) = 1 for the reference set

    def test_discrete_residual_small(self):
        p = make_params()
        for l, n in ((1.5, 129), (3.0, 257), (8.0, 513)):
            sol = vf.solve_dirichlet_bvp(1.0, p, l, n)
            assert vf.discrete_residual(sol, 1.0, p) < 1e-8

    def test_symmetric_solution(self):
        p = make_params()
        sol = vf.solve_dirichlet_bvp(1.0, p, 2.0, 257)
        assert np.max(np.abs(sol.w_vals - sol.w_vals[::-1])) < 1e-10

    def test_uniqueness_from_both_sides(self):
        # the increasing limit from the small lower solution and the
        # decreasing limit from the constant upper solution coincide
        p = make_params()
        lo = vf.solve_dirichlet_bvp(1.0, p, 2.0, 257)
        hi = vf.solve_dirichlet_bvp(1.0, p, 2.0, 257, from_above=True)
        assert np.max(np.abs(lo.w_vals - hi.w_vals)) < 5e-9

    def test_unresolved_bifurcation_flagged(self):
        # just above the critical length the coarse grid cannot resolve the
        # bifurcation: existence is not guessed, the result is flagged
        p = make_params()
        l_star = vf.thresholds(vf.EigenProblem(
            d=p.d, a11=-p.q, a12=p.k, a21=p.b, a22=-p.c, l1=-1, l2=1)).l_star
        l = l_star / 2 * (1 + 1e-6)
        assert vf.eigen_for_model(1.0, p, -l, l).lambda1 > 0
        sol = vf.solve_dirichlet_bvp(1.0, p, l, 129)
        assert not isinstance(sol, vf.NoPositiveSolution)
        assert sol.converged is False
        # a fine enough grid resolves a little further from the threshold
        l2 = l_star / 2 * (1 + 1e-4)
        fine = vf.solve_dirichlet_bvp(1.0, p, l2, 2049)
        assert fine.converged
        assert 0 < fine.w_vals.max() < 1e-3  # near-critical small amplitude


class TestBoundaryValueBvp:
    def test_constant_when_boundary_is_saturation(self):
        p = make_params()
        _, wh = vf.w_hat(1.0, p)
        sol = vf.solve_bvp_with_boundary_value(1.0, p, 3.0, wh, 257)
        assert np.max(np.abs(sol.w_vals - wh)) < 1e-12

    def test_boundary_below_saturation_rejected(self):
        p = make_params()
        _, wh = vf.w_hat(1.0, p)
        with pytest.raises(vf.ValidationError):
            vf.solve_bvp_with_boundary_value(1.0, p, 3.0, 0.5 * wh, 257)

    def test_subthreshold_coefficients_rejected(self):
        p = vf.ModelParams(d=1, theta=1, a=1, b=1, c=1, k=1, q=1,
                           mu=1, beta=1, h0=1)
        with pytest.raises(vf.ThresholdViolated):
            vf.solve_bvp_with_boundary_value(1.0, p, 3.0, 2.0, 257)

    def test_dominates_dirichlet_and_decreases_in_l(self):
        p = make_params()
        _, wh = vf.w_hat(1.0, p)
        K = 3.0 * wh
        prev = None
        for l in (2.0, 4.0, 8.0, 12.0):
            up = vf.solve_bvp_with_boundary_value(1.0, p, l, K, 1025)
            low = vf.solve_dirichlet_bvp(1.0, p, l, 1025)
            assert np.all(up.w_vals >= low.w_vals - 1e-12)
            assert np.all(up.w_vals <= K + 1e-12)
            center = float(up.w_vals[up.w_vals.size // 2])
            if prev is not None:
                assert center <= prev + 1e-10
            prev = center
        assert abs(prev - wh) < 1e-3  # center approaches the saturation pair
