"""Spreading/vanishing classification, the vanishing certificate, and the
threshold search in the front-expansion scale gamma = max(mu, beta).

Classification rules (first match wins):

  S1  r0 > 1 and current width >= critical width  ->  Spreading.
      Rigorous: any vanishing solution's final width stays below the
      critical width, so crossing it settles the dichotomy.
  V1  max w below a dead threshold AND both front speeds below a
      stillness threshold, sustained over a window of accepted steps
      ->  Vanishing.  Heuristic: finite-time detection of an asymptotic
      property; the verdict carries its rule id so consumers can filter
      by rigor.

The certificate builds an explicit moving cosine supersolution on a
half-width l between h0 and half the critical width and integrates its
amplitude factor

    f(t) = M exp( lambda1 t + (phi_t b Delta / a)(1 - e^{-a t}) ),
    Delta = max(sup u0, theta/a) - theta/a,

to the bound mu0 = (l^2 - h0^2) / (pi phi_t Int_0^inf f); any run with
gamma <= mu0 is guaranteed to vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .core_model import (
    DerivedConstants,
    InitialData,
    ModelParams,
    derived_constants,
)
from .errors import BracketError, CertificateNotApplicable, ValidationError
from .spectral import eigen_for_model, phi_tilde

DEFAULT_W_DEAD_FACTOR = 1e-5
DEFAULT_FRONT_STILL = 1e-7
DEFAULT_WINDOW = 50

VERDICT_SPREADING = "Spreading"
VERDICT_VANISHING = "Vanishing"
VERDICT_UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ClassifyTolerances:
    """Handoff tolerances for the online rules (defaults live here)."""

    w_dead_factor: float = DEFAULT_W_DEAD_FACTOR
    front_still: float = DEFAULT_FRONT_STILL
    window: int = DEFAULT_WINDOW


@dataclass(frozen=True)
class Classification:
    verdict: str
    reason: str          # rule id: "S1", "V1", or "none"
    t_decided: Optional[float]


def classify_online(s, dc: DerivedConstants,
                    tol: ClassifyTolerances = ClassifyTolerances()) -> Classification:
    """Apply the online rules to a simulation state.

    The stepper maintains ``s.quiet_steps``, the count of consecutive
    accepted steps on which the instantaneous V1 conditions held (max w
    below w_dead_factor of its initial value and both front speeds below
    front_still); V1 fires once that count reaches the window.  S1 can
    only fire when r0 > 1 (the critical width does not exist otherwise).
    """
    if dc.r0 > 1.0 and dc.lambda_cap is not None and (s.h - s.g) >= dc.lambda_cap:
        return Classification(VERDICT_SPREADING, "S1", s.t)
    if s.quiet_steps >= tol.window:
        return Classification(VERDICT_VANISHING, "V1", s.t)
    return Classification(VERDICT_UNDETERMINED, "none", None)


@dataclass(frozen=True)
class Certificate:
    """An explicitly computable vanishing guarantee.

    Any run of the same parameters and initial data with
    gamma = max(mu, beta) <= mu0 vanishes, with final width at most 2l.
    """

    l: float
    lambda1: float
    phi_t: float
    M: float
    mu0: float


def initial_envelope_amplitude(init: InitialData, phi_t: float) -> float:
    """Smallest M with v0 <= M cos(pi x/(2 h0)) and w0 <= phi_t M cos(...)."""
    if init.kind == "cosine":
        return max(init.v0_amplitude, init.w0_amplitude / phi_t)
    h0 = init.h0
    xs = np.linspace(-h0, h0, 4097)[1:-1]
    cos_vals = np.cos(math.pi * xs / (2.0 * h0))
    mask = cos_vals > 1e-6
    ratio_v = np.max(init.v0(xs)[mask] / cos_vals[mask])
    ratio_w = np.max(init.w0(xs)[mask] / cos_vals[mask])
    # Endpoint slopes bound the ratio where the cosine vanishes.
    eps = 1e-6 * h0
    edge = max(
        float(init.v0(np.array([h0 - eps]))[0]),
        float(init.v0(np.array([-h0 + eps]))[0]),
        float(init.w0(np.array([h0 - eps]))[0]) / phi_t,
        float(init.w0(np.array([-h0 + eps]))[0]) / phi_t,
    ) / (math.pi * eps / (2.0 * h0))
    return float(max(ratio_v, ratio_w / phi_t, edge))


def vanishing_certificate(p: ModelParams, init: InitialData, l: float) -> Certificate:
    """Certified bound mu0 on gamma below which the run must vanish.

    Requires h0 < l and a negative principal eigenvalue on (-l, l) at
    ambient level theta/a (interval below the critical length).  The
    amplitude integral is exact when sup u0 = theta/a and otherwise
    evaluated by adaptive quadrature on [0, T] plus an analytic
    exponential tail below 1e-12 of the total.
    """
    if l <= p.h0:
        raise CertificateNotApplicable(f"l = {l} must exceed h0 = {p.h0}")
    lam1 = eigen_for_model(p.theta / p.a, p, -l, l).lambda1
    if lam1 >= 0:
        raise CertificateNotApplicable(
            f"lambda1 = {lam1} >= 0 on (-{l}, {l}); certificate needs 2l below the critical width")
    phi_t, _ = phi_tilde(p, l)
    M = initial_envelope_amplitude(init, phi_t)
    u_hat0 = max(init.u0_sup, p.theta / p.a)
    delta = u_hat0 - p.theta / p.a
    rate = -lam1
    if delta == 0.0:
        integral = M / rate
    else:
        c_d = phi_t * p.b * delta / p.a

        def f(s):
            return M * math.exp(lam1 * s + c_d * (1.0 - math.exp(-p.a * s)))

        # Tail of f is below M e^{c_d} e^{lam1 T}/rate; pick T so that is
        # under 1e-12 of the guaranteed lower bound M/rate of the total.
        T = (math.log(1e12) + c_d + 5.0) / rate
        head, _ = quad(f, 0.0, T, epsabs=0.0, epsrel=1e-12, limit=400)
        tail = M * math.exp(c_d + lam1 * T) / rate
        integral = head + tail
    mu0 = (l * l - p.h0 * p.h0) / (math.pi * phi_t * integral)
    return Certificate(l=l, lambda1=lam1, phi_t=phi_t, M=M, mu0=mu0)


def optimize_certificate(p: ModelParams, init: InitialData,
                         tol: float = 1e-6) -> Certificate:
    """Golden-section search for the half-width l maximizing mu0.

    The admissible range is (h0, Lambda/2); the default certificate
    half-width (h0 + Lambda/2)/2 is the midpoint of that range.
    """
    dc = derived_constants(p, init)
    if dc.lambda_cap is None:
        raise CertificateNotApplicable("certificate requires r0 > 1")
    lo = p.h0 * (1.0 + 1e-9)
    hi = 0.5 * dc.lambda_cap * (1.0 - 1e-9)
    if hi <= lo:
        raise CertificateNotApplicable(
            "certificate requires h0 below half the critical width")

    def mu0_at(l):
        return vanishing_certificate(p, init, l).mu0

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1v, f2v = mu0_at(x1), mu0_at(x2)
    while hi - lo > tol * max(1.0, hi):
        if f1v < f2v:
            lo, x1, f1v = x1, x2, f2v
            x2 = lo + invphi * (hi - lo)
            f2v = mu0_at(x2)
        else:
            hi, x2, f2v = x2, x1, f1v
            x1 = hi - invphi * (hi - lo)
            f1v = mu0_at(x1)
    return vanishing_certificate(p, init, 0.5 * (lo + hi))


def default_certificate_halfwidth(p: ModelParams, dc: DerivedConstants) -> float:
    """Midpoint of the admissible certificate range (h0, Lambda/2)."""
    if dc.lambda_cap is None:
        raise CertificateNotApplicable("certificate requires r0 > 1")
    return 0.5 * (p.h0 + 0.5 * dc.lambda_cap)


@dataclass(frozen=True)
class Probe:
    """One classification probe of the threshold search."""

    gamma: float
    verdict: str
    reason: str
    flagged: bool          # True when an Undetermined probe was assigned a side
    final_width: float
    t_final: float


@dataclass
class ThresholdBracket:
    """Bisection bracket for the sharp threshold in gamma."""

    mu_lo: float
    mu_hi: float
    rel_width: float
    probes: list[Probe] = field(default_factory=list)
    audit_ok: bool = True
    certificate: Optional[Certificate] = None

    def flip_count(self) -> int:
        """Number of Vanishing->Spreading flips over definite probes by gamma."""
        ordered = sorted((pr for pr in self.probes if not pr.flagged),
                         key=lambda pr: pr.gamma)
        flips = 0
        prev = None
        for pr in ordered:
            if pr.verdict == VERDICT_UNDETERMINED:
                continue
            if prev is not None and pr.verdict != prev:
                flips += 1
                if prev == VERDICT_SPREADING and pr.verdict == VERDICT_VANISHING:
                    # Spreading below a Vanishing probe breaks monotonicity.
                    return -1
            prev = pr.verdict
        return flips


def _run_probe(p, init, cfg, gamma):
    from .fb_solver import run  # deferred: fb_solver imports this module

    outcome = run(p.with_gamma(gamma), init, cfg)
    return outcome


def threshold_search(p: ModelParams, init: InitialData, cfg,
                     lo: float, hi: float, rel_tol: float) -> ThresholdBracket:
    """Bisection bracket for the sharp spreading threshold in gamma.

    Preconditions: r0 > 1 and 2 h0 below the critical width, 0 < lo < hi,
    rel_tol > 0.  The lo endpoint may be validated analytically when it
    falls under the optimized certificate bound; otherwise both endpoints
    are simulated and must classify Vanishing (lo) and Spreading (hi).

    Undetermined probes are assigned a side (toward Spreading when the
    probe's width exceeded 0.9 of the critical width, else toward
    Vanishing) and flagged; they do not enter the monotonicity audit.
    The returned bracket satisfies (mu_hi - mu_lo)/mu_hi <= rel_tol.
    """
    if not (0 < lo < hi):
        raise ValidationError("need 0 < lo < hi")
    if not rel_tol > 0:
        raise ValidationError("rel_tol must be positive")
    dc = derived_constants(p, init)
    if dc.lambda_cap is None or 2.0 * p.h0 >= dc.lambda_cap:
        raise BracketError(
            "threshold search requires r0 > 1 and 2*h0 below the critical width")
    probes: list[Probe] = []

    certificate = None
    try:
        certificate = optimize_certificate(p, init)
    except CertificateNotApplicable:
        pass

    def probe(gamma, flagged_as=None):
        outcome = _run_probe(p, init, cfg, gamma)
        cls = outcome.classification
        pr = Probe(gamma=gamma, verdict=cls.verdict, reason=cls.reason,
                   flagged=False, final_width=outcome.final_width,
                   t_final=outcome.t_final)
        probes.append(pr)
        return pr

    if certificate is not None and lo <= certificate.mu0:
        probes.append(Probe(gamma=lo, verdict=VERDICT_VANISHING,
                            reason="certificate", flagged=False,
                            final_width=math.nan, t_final=0.0))
    else:
        pr = probe(lo)
        if pr.verdict != VERDICT_VANISHING:
            raise BracketError(
                f"lo endpoint gamma = {lo} classified {pr.verdict}, expected Vanishing")
    pr = probe(hi)
    if pr.verdict != VERDICT_SPREADING:
        raise BracketError(
            f"hi endpoint gamma = {hi} classified {pr.verdict}, expected Spreading")

    while (hi - lo) / hi > rel_tol:
        mid = 0.5 * (lo + hi)
        outcome = _run_probe(p, init, cfg, mid)
        cls = outcome.classification
        flagged = cls.verdict == VERDICT_UNDETERMINED
        if cls.verdict == VERDICT_SPREADING:
            hi = mid
        elif cls.verdict == VERDICT_VANISHING:
            lo = mid
        elif outcome.final_width > 0.9 * dc.lambda_cap:
            hi = mid
        else:
            lo = mid
        probes.append(Probe(gamma=mid, verdict=cls.verdict, reason=cls.reason,
                            flagged=flagged, final_width=outcome.final_width,
                            t_final=outcome.t_final))

    bracket = ThresholdBracket(
        mu_lo=lo, mu_hi=hi, rel_width=(hi - lo) / hi,
        probes=probes, certificate=certificate)
    bracket.audit_ok = bracket.flip_count() == 1
    return bracket


def sweep(p_base: ModelParams, init: InitialData, axes: dict, cfg) -> list[dict]:
    """Phase table over axes drawn from {h0, d, gamma}.

    Each grid cell gets r0, the critical width, and a verdict: analytic
    when forced (r0 <= 1 gives Vanishing; initial width at or above the
    critical width gives Spreading), otherwise simulated.  Per-cell
    failures are recorded as verdict "Error" without aborting the sweep.
    Rows are emitted in row-major order of the given axes.
    """
    if not axes:
        raise ValidationError("sweep needs at least one axis")
    for name in axes:
        if name not in ("h0", "d", "gamma"):
            raise ValidationError(f"unknown sweep axis: {name}")
        values = np.asarray(axes[name], dtype=float)
        if values.size == 0 or not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise ValidationError(f"sweep axis {name} must be finite and positive")

    from dataclasses import replace as _replace

    names = list(axes.keys())
    grids = [np.asarray(axes[n], dtype=float) for n in names]
    rows: list[dict] = []

    def cells(prefix, remaining):
        if not remaining:
            yield dict(prefix)
            return
        name, rest = remaining[0], remaining[1:]
        for value in grids[names.index(name)]:
            prefix[name] = float(value)
            yield from cells(prefix, rest)
        del prefix[name]

    for cell in cells({}, names):
        p = p_base
        if "h0" in cell:
            p = _replace(p, h0=cell["h0"])
        if "d" in cell:
            p = _replace(p, d=cell["d"])
        if "gamma" in cell:
            p = p.with_gamma(cell["gamma"])
        cell_init = init.rebuilt_for_h0(p.h0) if init.kind == "cosine" else init
        dc = derived_constants(p, cell_init)
        row = {
            "h0": p.h0,
            "d": p.d,
            "gamma": p.gamma,
            "r0": dc.r0,
            "lambda_cap": dc.lambda_cap,
        }
        if dc.r0 <= 1.0:
            row["verdict"] = VERDICT_VANISHING
            row["source"] = "analytic"
        elif 2.0 * p.h0 >= dc.lambda_cap:
            row["verdict"] = VERDICT_SPREADING
            row["source"] = "analytic"
        else:
            try:
                outcome = _run_probe(p, cell_init, cfg, p.gamma)
                row["verdict"] = outcome.classification.verdict
            except Exception as exc:  # per-cell failures must not abort the sweep
                row["verdict"] = "Error"
                row["error"] = str(exc)
            row["source"] = "simulated"
        rows.append(row)
    return rows
