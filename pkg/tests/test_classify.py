import math
from types import SimpleNamespace

import numpy as np
import pytest

import viralfronts as vf
from viralfronts.classify import VERDICT_SPREADING, VERDICT_VANISHING
from helpers import cosine_initial, make_params


def fake_state(width=1.0, quiet_steps=0, t=5.0):
    return SimpleNamespace(g=-width / 2, h=width / 2,
                           quiet_steps=quiet_steps, t=t)


class TestOnlineRules:
    def test_s1_fires_on_width(self):
        p = make_params()
        dc = vf.derived_constants(p)
        cls = vf.classify_online(fake_state(width=dc.lambda_cap + 0.01),
                                 dc, vf.ClassifyTolerances())
        assert cls.verdict == "Spreading" and cls.reason == "S1"
        assert cls.t_decided == 5.0

    def test_s1_blocked_when_subcritical_r0(self):
        p = vf.ModelParams(d=1, theta=1, a=1, b=1, c=1, k=1, q=1,
                           mu=1, beta=1, h0=1)
        dc = vf.derived_constants(p)
        assert dc.lambda_cap is None
        cls = vf.classify_online(fake_state(width=1e9), dc,
                                 vf.ClassifyTolerances())
        assert cls.verdict != "Spreading"

    def test_v1_needs_sustained_window(self):
        p = make_params()
        dc = vf.derived_constants(p)
        tol = vf.ClassifyTolerances(window=50)
        assert vf.classify_online(fake_state(quiet_steps=49), dc, tol).verdict \
            == "Undetermined"
        cls = vf.classify_online(fake_state(quiet_steps=50), dc, tol)
        assert cls.verdict == "Vanishing" and cls.reason == "V1"

    def test_fresh_subcritical_state_undetermined(self):
        p = make_params()  # 2 h0 = 0.8 below the critical width
        dc = vf.derived_constants(p)
        cls = vf.classify_online(fake_state(width=2 * p.h0, t=0.0), dc,
                                 vf.ClassifyTolerances())
        assert cls.verdict == "Undetermined"


def reference_mu0(p, l, M):
    """Independent closed-form chain for the zero-excess-u certificate."""
    rho1 = -p.q - p.d * math.pi ** 2 / (2 * l) ** 2
    lam1 = 0.5 * (rho1 - p.c + math.sqrt((rho1 + p.c) ** 2
                                         + 4 * p.k * p.b * p.theta / p.a))
    phi_t = (p.c + lam1) * p.a / (p.b * p.theta)
    return (l * l - p.h0 * p.h0) * (-lam1) / (math.pi * phi_t * M)


class TestCertificate:
    def test_reference_value(self):
        p = make_params()  # h0 = 0.4
        # amplitudes chosen so the envelope amplitude M is exactly 1
        init = vf.InitialData.cosine(p.h0, 1.0, 1.0, w_amplitude=0.4)
        cert = vf.vanishing_certificate(p, init, 0.8)
        assert cert.M == pytest.approx(1.0)
        assert cert.mu0 == pytest.approx(reference_mu0(p, 0.8, 1.0), rel=1e-12)
        assert cert.mu0 == pytest.approx(0.0539, abs=2e-4)
        assert cert.lambda1 < 0 and cert.phi_t > 0

    def test_excess_ambient_u_against_quadrature(self):
        # sup u0 above theta/a exercises the quadrature path; compare with
        # a dense trapezoid oracle plus analytic exponential tail
        p = make_params()
        init = cosine_initial(p, 0.2, u0_level=1.5)
        cert = vf.vanishing_certificate(p, init, 0.8)
        lam1 = cert.lambda1
        c_d = cert.phi_t * p.b * (1.5 - 1.0) / p.a
        T = 400.0
        s = np.linspace(0.0, T, 2_000_001)
        f = cert.M * np.exp(lam1 * s + c_d * (1.0 - np.exp(-p.a * s)))
        integral = np.trapezoid(f, s) + cert.M * math.exp(c_d + lam1 * T) / (-lam1)
        mu0_ref = (0.8 ** 2 - p.h0 ** 2) / (math.pi * cert.phi_t * integral)
        assert cert.mu0 == pytest.approx(mu0_ref, rel=1e-8)
        # excess ambient u can only hurt the bound
        base = vf.vanishing_certificate(p, cosine_initial(p, 0.2), 0.8)
        assert cert.mu0 < base.mu0

    def test_envelope_amplitude(self):
        p = make_params()
        phi_t, _ = vf.phi_tilde(p, 0.8)
        init = vf.InitialData.cosine(p.h0, 0.3, 1.0, w_amplitude=0.2)
        M = vf.classify.initial_envelope_amplitude(init, phi_t)
        assert M == pytest.approx(max(0.3, 0.2 / phi_t), rel=1e-12)
        # sampled variant of the same data gives (nearly) the same envelope
        xs = np.linspace(-p.h0, p.h0, 2001)
        sampled = vf.InitialData.from_samples(xs, init.u0(xs), init.v0(xs),
                                              init.w0(xs))
        M2 = vf.classify.initial_envelope_amplitude(sampled, phi_t)
        assert M2 == pytest.approx(M, rel=1e-3)

    def test_not_applicable_cases(self):
        p = make_params()
        with pytest.raises(vf.CertificateNotApplicable):
            vf.vanishing_certificate(p, cosine_initial(p), 0.3)  # l <= h0
        lam_cap = vf.derived_constants(p).lambda_cap
        with pytest.raises(vf.CertificateNotApplicable):
            vf.vanishing_certificate(p, cosine_initial(p), 0.6 * lam_cap)
        p_sub = vf.ModelParams(d=1, theta=1, a=1, b=0.5, c=1, k=1, q=1,
                               mu=1, beta=1, h0=0.5)
        with pytest.raises(vf.CertificateNotApplicable):
            vf.optimize_certificate(p_sub, cosine_initial(p_sub))

    def test_optimizer_beats_fixed_choices(self):
        p = make_params()
        init = cosine_initial(p, 0.1)
        best = vf.optimize_certificate(p, init)
        lam_cap = vf.derived_constants(p).lambda_cap
        for l in (0.45, 0.6, 0.8, 0.45 * lam_cap):
            assert best.mu0 >= vf.vanishing_certificate(p, init, l).mu0 - 1e-9
        assert p.h0 < best.l < lam_cap / 2


class TestBracketAudit:
    def make_bracket(self, verdicts):
        probes = [vf.Probe(gamma=float(i), verdict=v, reason="x", flagged=False,
                           final_width=1.0, t_final=1.0)
                  for i, v in enumerate(verdicts)]
        return vf.ThresholdBracket(mu_lo=0.0, mu_hi=1.0, rel_width=1.0,
                                   probes=probes)

    def test_single_flip(self):
        br = self.make_bracket([VERDICT_VANISHING, VERDICT_VANISHING,
                                VERDICT_SPREADING, VERDICT_SPREADING])
        assert br.flip_count() == 1

    def test_violation_detected(self):
        br = self.make_bracket([VERDICT_VANISHING, VERDICT_SPREADING,
                                VERDICT_VANISHING])
        assert br.flip_count() == -1

    def test_flagged_probes_ignored(self):
        br = self.make_bracket([VERDICT_VANISHING, VERDICT_SPREADING])
        br.probes.append(vf.Probe(gamma=0.5, verdict="Undetermined", reason="none",
                                  flagged=True, final_width=1.0, t_final=9.0))
        assert br.flip_count() == 1


class TestThresholdSearchValidation:
    def test_requires_subcritical_width(self):
        p = make_params(h0=1.0)
        with pytest.raises(vf.BracketError):
            vf.threshold_search(p, cosine_initial(p, 0.5),
                                vf.StepperConfig(n_y=65, t_end=1.0),
                                0.1, 1.0, 0.1)

    def test_bad_hi_endpoint(self):
        p = make_params()
        cfg = vf.StepperConfig(n_y=65, t_end=60.0, dt_max=0.05)
        with pytest.raises(vf.BracketError, match="hi endpoint"):
            # both endpoints far below the threshold: hi classifies Vanishing
            vf.threshold_search(p, cosine_initial(p, 0.1), cfg,
                                0.01, 0.02, 0.5)

    def test_undetermined_probes_flagged_and_sided(self):
        # a horizon too short for definite mid-probe verdicts: every probe
        # between the endpoints comes back Undetermined, gets flagged, and
        # is assigned a side by the 0.9*Lambda width rule; the bracket must
        # still straddle the long-horizon threshold (~2.95 for this setup)
        p = make_params()
        init = cosine_initial(p, amplitude=0.1)
        cfg = vf.StepperConfig(n_y=97, t_end=20.0, dt_max=0.05)
        bracket = vf.threshold_search(p, init, cfg, lo=0.05, hi=6.0,
                                      rel_tol=0.1)
        flagged = [pr for pr in bracket.probes if pr.flagged]
        assert flagged, "expected Undetermined probes at this horizon"
        for pr in flagged:
            assert pr.verdict == "Undetermined"
        assert bracket.audit_ok  # flagged probes stay out of the audit
        assert bracket.mu_lo < 2.95 < bracket.mu_hi + 0.3


class TestSweep:
    def test_analytic_cells(self):
        # subcritical reproduction number: every cell decided analytically
        p = vf.ModelParams(d=1, theta=1, a=1, b=0.5, c=1, k=1, q=1,
                           mu=1, beta=1, h0=0.5)
        rows = vf.sweep(p, cosine_initial(p, 0.5), {"h0": [0.3, 0.6],
                                                    "d": [0.5, 1.0]},
                        vf.StepperConfig(n_y=65, t_end=1.0))
        assert len(rows) == 4
        for row in rows:
            assert row["verdict"] == "Vanishing"
            assert row["source"] == "analytic"
            assert row["lambda_cap"] is None

    def test_forced_spreading_cells(self):
        p = make_params()
        lam = vf.derived_constants(p).lambda_cap
        rows = vf.sweep(p, cosine_initial(p, 0.5), {"h0": [0.6 * lam, 0.8 * lam]},
                        vf.StepperConfig(n_y=65, t_end=1.0))
        for row in rows:
            assert row["verdict"] == "Spreading"
            assert row["source"] == "analytic"

    def test_axis_validation(self):
        p = make_params()
        with pytest.raises(vf.ValidationError):
            vf.sweep(p, cosine_initial(p), {"zeta": [1.0]},
                     vf.StepperConfig(n_y=65, t_end=1.0))
        with pytest.raises(vf.ValidationError):
            vf.sweep(p, cosine_initial(p), {}, vf.StepperConfig(n_y=65, t_end=1.0))

    def test_row_order_and_gamma_scaling(self):
        p = make_params(mu=0.5, beta=1.0)
        lam = vf.derived_constants(p).lambda_cap
        rows = vf.sweep(p, cosine_initial(p, 0.5),
                        {"gamma": [2.0, 3.0], "h0": [0.6 * lam, 0.7 * lam]},
                        vf.StepperConfig(n_y=65, t_end=1.0))
        gammas = [row["gamma"] for row in rows]
        assert gammas == [2.0, 2.0, 3.0, 3.0]
