import math

import numpy as np
import pytest

import viralfronts as vf
from helpers import cosine_initial, make_params


def quick_cfg(**kw):
    base = dict(n_y=129, t_end=2.0, dt_max=0.01)
    base.update(kw)
    return vf.StepperConfig(**base)


class TestStepperConfig:
    def test_validation(self):
        with pytest.raises(vf.ValidationError, match="n_y"):
            vf.StepperConfig(n_y=128)
        with pytest.raises(vf.ValidationError, match="n_y"):
            vf.StepperConfig(n_y=33)
        with pytest.raises(vf.ValidationError, match="cfl"):
            vf.StepperConfig(cfl_safety=0.95)
        with pytest.raises(vf.ValidationError, match="t_end"):
            vf.StepperConfig(t_end=-1.0)


class TestTransformCoeffs:
    def test_from_fronts(self):
        tc = vf.TransformCoeffs.from_fronts(-1.0, 3.0, -0.5, 1.5)
        assert tc.xi == pytest.approx(4.0 / 16.0)
        assert tc.zeta_at(0.0) == pytest.approx((1.5 - 0.5) / 4.0)
        assert tc.zeta_at(1.0) == pytest.approx(2 * 1.5 / 4.0)
        assert tc.zeta_at(-1.0) == pytest.approx(2 * (-0.5) / 4.0)
        assert tc.max_abs_zeta() == pytest.approx(0.75)


class TestInitialize:
    def test_cosine_passes_and_speeds_signed(self):
        p = make_params()
        init = cosine_initial(p, amplitude=0.5)
        s = vf.initialize(p, init, quick_cfg())
        assert s.g == -p.h0 and s.h == p.h0
        # flux condition applied to w0: h'(0) = -beta w0'(h0) > 0
        slope = 0.5 * math.pi / (2 * p.h0)
        assert s.h_speed == pytest.approx(p.beta * slope, rel=1e-3)
        assert s.g_speed == pytest.approx(-p.mu * slope, rel=1e-3)
        assert s.z_vals[0] == 0.0 and s.z_vals[-1] == 0.0
        assert np.interp(0.0, s.u_grid, s.u_vals) == pytest.approx(1.0)

    def test_bad_edge_value_rejected(self):
        p = make_params()
        init = cosine_initial(p)
        init.v0 = lambda x: np.full_like(np.asarray(x, dtype=float), 0.1)
        with pytest.raises(vf.InvalidInitialData, match="v0 must vanish"):
            vf.initialize(p, init, quick_cfg())

    def test_grid_covers_default_halfwidth(self):
        p = make_params(h0=1.0)
        s = vf.initialize(p, cosine_initial(p), quick_cfg())
        lam = vf.derived_constants(p).lambda_cap
        assert s.u_grid[-1] >= p.h0 + 4 * lam - 1e-9


class TestStep:
    def test_zero_fields_stay_zero_and_u_relaxes(self):
        p = make_params()
        init = cosine_initial(p, u0_level=1.6)
        cfg = quick_cfg()
        s = vf.initialize(p, init, cfg)
        s.z_vals[:] = 0.0
        s.r_vals[:] = 0.0
        s.g_speed = s.h_speed = 0.0
        for _ in range(300):
            s = vf.step(s, p, cfg)
        assert s.g == -p.h0 and s.h == p.h0
        assert np.all(s.z_vals == 0.0) and np.all(s.r_vals == 0.0)
        expected = p.theta / p.a + (1.6 - p.theta / p.a) * math.exp(-p.a * s.t)
        # outside the (frozen) fronts the relaxation is exact; inside it is
        # the trapezoidal update of the same linear flow
        outside = np.abs(s.u_grid) > p.h0
        assert np.max(np.abs(s.u_vals[outside] - expected)) < 1e-13
        assert np.max(np.abs(s.u_vals - expected)) < 1e-5

    def test_symmetric_run_stays_symmetric(self):
        p = make_params(mu=1.5, beta=1.5)
        cfg = quick_cfg()
        s = vf.initialize(p, cosine_initial(p, 0.3), cfg)
        for _ in range(200):
            s = vf.step(s, p, cfg)
        assert abs(s.g + s.h) < 1e-12
        assert np.max(np.abs(s.z_vals - s.z_vals[::-1])) < 1e-13
        assert np.max(np.abs(s.u_vals - s.u_vals[::-1])) < 1e-13

    def test_positivity_bounds_and_front_monotonicity(self):
        p = make_params(h0=0.8)
        cfg = quick_cfg(t_end=4.0)
        init = cosine_initial(p, 0.5, u0_level=1.0)
        s = vf.initialize(p, init, cfg)
        a1 = max(1.0, p.theta / p.a)
        g_prev, h_prev = s.g, s.h
        for _ in range(400):
            s = vf.step(s, p, cfg)
            assert np.all(s.z_vals >= 0) and np.all(s.r_vals >= 0)
            assert np.all(s.u_vals > 0)
            assert np.max(s.u_vals) <= a1 + 1e-12
            assert s.g <= g_prev + 1e-15 and s.h >= h_prev - 1e-15
            g_prev, h_prev = s.g, s.h
        # fronts strictly moving while w is appreciable inside
        assert s.z_vals.max() > 1e-3
        assert s.g_speed < 0 < s.h_speed

    def test_outside_nodes_follow_exact_relaxation(self):
        p = make_params()
        cfg = quick_cfg()
        init = cosine_initial(p, 0.4, u0_level=1.3)
        s = vf.initialize(p, init, cfg)
        for _ in range(150):
            s = vf.step(s, p, cfg)
        outside = s.u_grid > s.h + 0.1
        expected = p.theta / p.a + (1.3 - p.theta / p.a) * math.exp(-p.a * s.t)
        assert np.max(np.abs(s.u_vals[outside] - expected)) < 1e-12

    def test_front_collapse_detected(self):
        # defensive path: the clamped speeds never shrink the gap, so force
        # a sub-minimal width with stalled fronts directly
        p = make_params()
        cfg = quick_cfg()
        s = vf.initialize(p, cosine_initial(p), cfg)
        s.g, s.h = -4e-7, 4e-7
        s.z_vals[:] = 0.0
        s.r_vals[:] = 0.0
        with pytest.raises(vf.FrontCollapse):
            vf.step(s, p, cfg)

    def test_dynamic_grid_extension(self):
        p = make_params(h0=1.0, mu=2.0, beta=2.0)
        cfg = vf.StepperConfig(n_y=65, t_end=60.0, dt_max=0.05,
                               x_half=2.0, window=10)
        s = vf.initialize(p, cosine_initial(p, 0.5), cfg)
        n0 = s.u_grid.size
        while s.t < 20.0:
            s = vf.step(s, p, cfg)
        assert s.h > 2.0  # front left the initial grid
        assert s.u_grid.size > n0
        assert s.u_grid[-1] > s.h and s.u_grid[0] < s.g


class TestRun:
    def test_immediate_spreading_rule(self):
        p = make_params(h0=1.0)  # 2 h0 exceeds the critical width 1.8138
        out = vf.run(p, cosine_initial(p, 0.5), quick_cfg())
        assert out.classification.verdict == "Spreading"
        assert out.classification.reason == "S1"
        assert out.classification.t_decided == 0.0

    def test_horizon_leaves_undetermined(self):
        p = make_params()  # subcritical width, moderate gamma
        out = vf.run(p, cosine_initial(p, 0.1), quick_cfg(t_end=0.5))
        assert out.classification.verdict == "Undetermined"

    def test_vanishing_run_outputs(self):
        p = vf.ModelParams(d=1, theta=1, a=1, b=0.5, c=1, k=1, q=1,
                           mu=1, beta=1, h0=0.5)
        cfg = vf.StepperConfig(n_y=97, t_end=120.0, dt_max=0.05)
        out = vf.run(p, cosine_initial(p, 0.5), cfg, profile_every=5)
        assert out.classification.verdict == "Vanishing"
        assert out.classification.reason == "V1"
        s = out.series
        assert np.all(np.diff(s.t) > 0)
        assert s.max_w[-1] < 1e-5 * s.max_w[0]
        # max w decays monotonically once past its transient peak
        peak = int(np.argmax(s.max_w))
        assert np.all(np.diff(s.max_w[peak:]) <= 1e-12 * s.max_w[0])
        assert out.equilibrium_triple is None  # r0 < 1
        assert len(out.profile_snapshots) >= 3
        t0, x0, u0, v0, w0 = out.profile_snapshots[0]
        assert t0 == 0.0
        inside = np.abs(x0) < p.h0
        assert np.all(np.isfinite(w0[inside]))
        assert np.all(np.isnan(w0[~inside]))
        assert out.profile_snapshots[-1][0] == out.t_final

    def test_summary_keys(self):
        p = make_params(h0=1.0)
        out = vf.run(p, cosine_initial(p, 0.5), quick_cfg())
        summary = out.summary()
        assert set(summary) == {"classification", "r0", "lambda_cap",
                                "final_width", "t_final", "center_triple",
                                "equilibrium_triple", "clip_count"}
        assert summary["classification"]["reason"] == "S1"
