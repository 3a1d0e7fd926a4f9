"""Model parameters, reaction terms, and the closed-form threshold algebra.

The model couples three populations: uninfected cells u (present on the
whole line, no spatial movement), infected cells v, and free virions w
(both confined to an expanding interval).  Infection and virion production
saturate at high virion density, giving the reaction terms

    f1(u, w)    = theta - a*u - b*u*w/(1+w)
    f2(u, v, w) = b*u*w/(1+w) - c*v
    f3(v, w)    = k*v/(1+w) - q*w

Everything in this module is algebra: the basic reproduction number
R0 = theta*k*b/(a*c*q), the critical interval width and diffusion
thresholds it induces, the positive equilibrium of the full reaction
system, and a fixed-step integrator for the classical bilinear-rate
compartment model used as a reference dynamic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import (
    InvalidInitialData,
    NoPositiveRoot,
    NumericalError,
    ThresholdViolated,
    ValidationError,
)

PARAM_FIELDS = ("d", "theta", "a", "b", "c", "k", "q", "mu", "beta", "h0")


@dataclass(frozen=True)
class ModelParams:
    """The ten positive constants of the moving-boundary infection model.

    d      virion diffusion coefficient (length^2/time)
    theta  uninfected-cell production rate
    a      uninfected-cell death rate
    b      infection-rate coefficient
    c      infected-cell death rate
    k      virion production coefficient
    q      virion death rate
    mu     left-front expansion coefficient
    beta   right-front expansion coefficient
    h0     initial half-width of the infected interval
    """

    d: float
    theta: float
    a: float
    b: float
    c: float
    k: float
    q: float
    mu: float
    beta: float
    h0: float

    def __post_init__(self):
        for name in PARAM_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValidationError(f"model.{name} must be positive")
            value = float(value)
            if not math.isfinite(value) or value <= 0.0:
                raise ValidationError(f"model.{name} must be positive")
            object.__setattr__(self, name, value)

    @property
    def gamma(self) -> float:
        """Front expansion scale max(mu, beta)."""
        return max(self.mu, self.beta)

    def with_gamma(self, gamma: float) -> "ModelParams":
        """Rescale mu and beta jointly so that max(mu, beta) == gamma."""
        if not (gamma > 0 and math.isfinite(gamma)):
            raise ValidationError("gamma must be positive")
        s = gamma / self.gamma
        return replace(self, mu=self.mu * s, beta=self.beta * s)


def _check_w_nonneg(w) -> None:
    # The saturation factor 1/(1+w) has a pole at w = -1; the model only
    # makes sense for nonnegative virion density.
    if np.any(np.asarray(w) < 0):
        raise ValidationError("w must be nonnegative")


def f1(u, w, p: ModelParams):
    """Uninfected-cell rate: production minus death minus saturating infection."""
    _check_w_nonneg(w)
    return p.theta - p.a * u - p.b * u * w / (1.0 + w)


def f2(u, v, w, p: ModelParams):
    """Infected-cell rate: saturating infection gain minus death."""
    _check_w_nonneg(w)
    return p.b * u * w / (1.0 + w) - p.c * v


def f3(v, w, p: ModelParams):
    """Virion rate: saturating production by infected cells minus death."""
    _check_w_nonneg(w)
    return p.k * v / (1.0 + w) - p.q * w


def basic_reproduction_number(p: ModelParams) -> float:
    """R0 = theta*k*b / (a*c*q)."""
    return p.theta * p.k * p.b / (p.a * p.c * p.q)


@dataclass
class InitialData:
    """Initial profiles: u0 on the whole line, v0 and w0 on [-h0, h0].

    Profiles are held as vectorized callables.  ``u0_sup`` is the supremum
    of u0 (used for a-priori bounds and the vanishing certificate).  The
    cosine constructor builds the standard admissible family
    v0 = A*cos(pi*x/(2*h0)), w0 = Aw*cos(pi*x/(2*h0)) with constant u0.
    """

    h0: float
    u0: Callable[[np.ndarray], np.ndarray]
    v0: Callable[[np.ndarray], np.ndarray]
    w0: Callable[[np.ndarray], np.ndarray]
    u0_sup: float
    kind: str = "custom"
    v0_amplitude: Optional[float] = None
    w0_amplitude: Optional[float] = None
    u0_level: Optional[float] = None

    @classmethod
    def cosine(cls, h0: float, amplitude: float, u0_level: float,
               w_amplitude: Optional[float] = None) -> "InitialData":
        """Cosine arches for v0 and w0 plus a constant ambient u0."""
        if not (h0 > 0 and amplitude > 0 and u0_level > 0):
            raise ValidationError("cosine initial data needs h0, amplitude, u0 > 0")
        aw = amplitude if w_amplitude is None else float(w_amplitude)
        if aw <= 0:
            raise ValidationError("initial.w_amplitude must be positive")
        half_pi_over_h0 = math.pi / (2.0 * h0)

        def arch(amp):
            def profile(x):
                x = np.asarray(x, dtype=float)
                return np.where(np.abs(x) <= h0, amp * np.cos(half_pi_over_h0 * x), 0.0)
            return profile

        return cls(
            h0=float(h0),
            u0=lambda x: np.full_like(np.asarray(x, dtype=float), float(u0_level)),
            v0=arch(float(amplitude)),
            w0=arch(aw),
            u0_sup=float(u0_level),
            kind="cosine",
            v0_amplitude=float(amplitude),
            w0_amplitude=aw,
            u0_level=float(u0_level),
        )

    @classmethod
    def from_samples(cls, x: np.ndarray, u0: np.ndarray, v0: np.ndarray,
                     w0: np.ndarray) -> "InitialData":
        """Tabulated profiles on a common ascending grid spanning [-h0, h0].

        u0 is extended by its edge values beyond the sampled range; v0 and
        w0 are zero outside [-h0, h0].
        """
        x = np.asarray(x, dtype=float)
        u0 = np.asarray(u0, dtype=float)
        v0 = np.asarray(v0, dtype=float)
        w0 = np.asarray(w0, dtype=float)
        if x.ndim != 1 or x.size < 5 or np.any(np.diff(x) <= 0):
            raise ValidationError("initial.samples x must be strictly ascending with >= 5 points")
        if not (u0.shape == v0.shape == w0.shape == x.shape):
            raise ValidationError("initial.samples columns must share the x grid")
        h0 = float(x[-1])
        if not math.isclose(-x[0], h0, rel_tol=1e-12, abs_tol=1e-12):
            raise ValidationError("initial.samples grid must span a symmetric [-h0, h0]")

        def interp(vals, outside):
            def profile(xq):
                xq = np.asarray(xq, dtype=float)
                out = np.interp(xq, x, vals)
                if outside == 0.0:
                    out = np.where(np.abs(xq) <= h0, out, 0.0)
                return out
            return profile

        return cls(
            h0=h0,
            u0=interp(u0, None),
            v0=interp(v0, 0.0),
            w0=interp(w0, 0.0),
            u0_sup=float(u0.max()),
            kind="samples",
        )

    def rebuilt_for_h0(self, h0: float) -> "InitialData":
        """Same profile family on a rescaled initial interval (cosine only)."""
        if math.isclose(h0, self.h0, rel_tol=1e-12):
            return self
        if self.kind != "cosine":
            raise ValidationError("only cosine initial data can be rebuilt for a new h0")
        return InitialData.cosine(h0, self.v0_amplitude, self.u0_level,
                                  w_amplitude=self.w0_amplitude)


def validate_initial_data(init: InitialData, p: ModelParams,
                          n_check: int = 2049) -> None:
    """Check the admissibility clauses of the initial profiles.

    Raises InvalidInitialData naming the violated clause:
      - v0 and w0 vanish at +-h0,
      - w0 has strictly positive slope at -h0 and strictly negative at +h0,
      - u0 > 0 everywhere sampled,
      - v0, w0 > 0 strictly inside (-h0, h0).
    """
    h0 = p.h0
    if not math.isclose(init.h0, h0, rel_tol=1e-12, abs_tol=1e-12):
        raise InvalidInitialData(
            f"initial data half-width {init.h0} does not match model.h0 {h0}")
    xs = np.linspace(-h0, h0, n_check)
    v = init.v0(xs)
    w = init.w0(xs)
    scale_v = float(np.max(np.abs(v))) or 1.0
    scale_w = float(np.max(np.abs(w))) or 1.0
    edge_tol = 1e-9
    for name, vals, scale in (("v0", v, scale_v), ("w0", w, scale_w)):
        if abs(vals[0]) > edge_tol * scale or abs(vals[-1]) > edge_tol * scale:
            raise InvalidInitialData(f"{name} must vanish at x = -h0 and x = +h0")
    # One-sided slopes probed at two scales: a genuinely linear approach to
    # zero gives nearly equal estimates, while tangential (higher-order)
    # contact collapses at the finer scale.
    eps = 1e-6 * h0
    slope_tol = 1e-8 * scale_w / h0
    for side, sign, label in ((-h0, +1.0, "positive slope at x = -h0"),
                              (h0, -1.0, "negative slope at x = +h0")):
        coarse = float(init.w0(np.array([side + sign * eps]))[0]) / eps
        fine = float(init.w0(np.array([side + sign * eps / 8.0]))[0]) / (eps / 8.0)
        if not (fine > slope_tol and fine >= 0.5 * coarse):
            raise InvalidInitialData(f"w0 must have strictly {label}")
    u_span = np.linspace(-8.0 * h0, 8.0 * h0, n_check)
    if np.min(init.u0(u_span)) <= 0 or init.u0_sup <= 0:
        raise InvalidInitialData("u0 must be positive everywhere")
    interior = xs[1:-1]
    if np.min(init.v0(interior)) <= 0 or np.min(init.w0(interior)) <= 0:
        raise InvalidInitialData("v0 and w0 must be positive inside (-h0, h0)")


@dataclass(frozen=True)
class DerivedConstants:
    """Scalars derived from the parameters (and the initial data bound).

    lambda_cap (critical width) and d_cap (critical diffusion) exist only
    when r0 > 1; they satisfy the identity  h0 >= lambda_cap/2  <=>
    d <= d_cap.
    """

    r0: float
    lambda_cap: Optional[float]
    d_cap: Optional[float]
    u_bound: float


def derived_constants(p: ModelParams, init: Optional[InitialData] = None) -> DerivedConstants:
    """Reproduction number, critical width/diffusion, and the u a-priori bound."""
    r0 = basic_reproduction_number(p)
    if r0 > 1.0:
        denom = p.theta * p.k * p.b - p.a * p.c * p.q
        lambda_cap = math.pi * math.sqrt(p.a * p.c * p.d / denom)
        d_cap = 4.0 * p.h0 ** 2 * p.q * (r0 - 1.0) / math.pi ** 2
    else:
        lambda_cap = None
        d_cap = None
    u_sup = init.u0_sup if init is not None else p.theta / p.a
    return DerivedConstants(
        r0=r0,
        lambda_cap=lambda_cap,
        d_cap=d_cap,
        u_bound=max(u_sup, p.theta / p.a),
    )


@dataclass(frozen=True)
class EquilibriumTriple:
    u_star: float
    v_star: float
    w_star: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.u_star, self.v_star, self.w_star)


def equilibrium_full(p: ModelParams) -> EquilibriumTriple:
    """Unique positive root of f1 = f2 = f3 = 0 (requires r0 > 1).

    Eliminating u and v leaves the quadratic
        (a+b) w^2 + (2a+b) w + a (1 - r0) = 0,
    whose positive root is taken with the cancellation-free formula
    w = -2C / (B + sqrt(B^2 - 4AC)) (C < 0 exactly when r0 > 1).
    """
    r0 = basic_reproduction_number(p)
    if r0 <= 1.0:
        raise NoPositiveRoot(f"no positive equilibrium: r0 = {r0} <= 1")
    A = p.a + p.b
    B = 2.0 * p.a + p.b
    C = p.a * (1.0 - r0)
    w = -2.0 * C / (B + math.sqrt(B * B - 4.0 * A * C))
    u = p.c * p.q * (1.0 + w) ** 2 / (p.k * p.b)
    v = p.q * w * (1.0 + w) / p.k
    return EquilibriumTriple(u_star=u, v_star=v, w_star=w)


def w_hat(m: float, p: ModelParams) -> tuple[float, float]:
    """Saturated steady pair (v_hat, w_hat) at ambient uninfected level m.

    Solves f2(m, v, w) = f3(v, w) = 0 for the positive pair:
    w_hat = sqrt(k*b*m/(q*c)) - 1, defined when k*b*m > q*c.
    """
    if not m > 0:
        raise ValidationError("m must be positive")
    ratio = p.k * p.b * m / (p.q * p.c)
    if ratio <= 1.0:
        raise ThresholdViolated(
            f"k*b*m = {p.k * p.b * m} must exceed q*c = {p.q * p.c}")
    wh = math.sqrt(ratio) - 1.0
    vh = p.b * m * wh / (p.c * (1.0 + wh))
    return vh, wh


def baseline_equilibrium(p: ModelParams) -> tuple[float, float, float]:
    """Attractor of the bilinear-rate compartment model.

    (theta/a, 0, 0) when r0 <= 1, otherwise the positive equilibrium
    (q*c/(k*b), theta/c - a*q/(k*b), theta*k/(q*c) - a/b).
    """
    if basic_reproduction_number(p) <= 1.0:
        return (p.theta / p.a, 0.0, 0.0)
    return (
        p.q * p.c / (p.k * p.b),
        p.theta / p.c - p.a * p.q / (p.k * p.b),
        p.theta * p.k / (p.q * p.c) - p.a / p.b,
    )


def ode_baseline(p: ModelParams, init: tuple[float, float, float],
                 t_end: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Integrate the bilinear-rate compartment model with classical RK4.

    u' = theta - a*u - b*u*w,  v' = b*u*w - c*v,  w' = k*v - q*w.
    Fixed step; this is a reference dynamic, not a performance path.

    Returns (t, states) with states of shape (n_steps+1, 3).  Raises
    NumericalError if a component drops below -1e-10 (step too large);
    roundoff-level negatives are clipped to zero.
    """
    if dt <= 0:
        raise ValidationError("dt must be positive")
    if t_end <= 0:
        raise ValidationError("t_end must be positive")
    y = np.asarray(init, dtype=float)
    if y.shape != (3,) or np.any(y < 0):
        raise ValidationError("initial triple must be three nonnegative values")

    def rhs(s):
        u, v, w = s
        return np.array([
            p.theta - p.a * u - p.b * u * w,
            p.b * u * w - p.c * v,
            p.k * v - p.q * w,
        ])

    n = max(1, int(round(t_end / dt)))
    t = dt * np.arange(n + 1)
    states = np.empty((n + 1, 3))
    states[0] = y
    for i in range(n):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if np.any(y < -1e-10):
            raise NumericalError(
                f"baseline state went negative at t = {t[i + 1]:.6g}; reduce dt")
        y = np.maximum(y, 0.0)
        states[i + 1] = y
    return t, states
