"""Time integration of the two-front moving-boundary infection model.

The virion field w and infected-cell field v live between moving fronts
x = g(t) < x = h(t) and are tracked on the fixed grid y in [-1, 1] through
the straightening map x(t, y) = ((h-g) y + h + g)/2, writing

    z(t, y) = w(t, x(t, y)),   r(t, y) = v(t, x(t, y)).

The chain rule turns the virion equation into

    z_t = d xi z_yy + zeta z_y + f3(r, z),
    xi = 4/(h-g)^2,   zeta(t, y) = (h'+g')/(h-g) + (h'-g') y/(h-g),

and the infected-cell field, tracked on the same moving grid, picks up the
identical apparent advection:  r_t = f2(u, r, z) + zeta r_y.

The uninfected field u has no diffusion and lives on all of the line, so
it stays on a fixed physical grid: outside the fronts (where w = 0) its
update is the exact relaxation toward theta/a, making the truncation of
that grid harmless; inside, an explicit trapezoidal update with w
interpolated from the transformed grid.

One time step:
  1. front speeds from the current z via the flux conditions
     g' = -mu w_x(t, g), h' = -beta w_x(t, h), with a second-order
     one-sided 3-point stencil at y = -+1;
  2. two-stage predictor-corrector for the fronts (trapezoidal);
  3. z by an implicit-explicit scheme: diffusion trapezoidal in time with
     a tridiagonal solve, advection first-order upwind by the sign of
     zeta, reaction explicit; the explicit terms are themselves averaged
     between the predictor and corrector passes;
  4. r and the interior of u by explicit trapezoidal correctors;
  5. positivity enforced by clip-and-count, with step rejection (halve dt,
     retry) when the clip magnitude exceeds 1e-8;
  6. dt adapted from the advective limits and dt_max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import solve_banded

from .classify import (
    DEFAULT_FRONT_STILL,
    DEFAULT_W_DEAD_FACTOR,
    DEFAULT_WINDOW,
    VERDICT_UNDETERMINED,
    Classification,
    ClassifyTolerances,
    classify_online,
)
from .core_model import (
    DerivedConstants,
    InitialData,
    ModelParams,
    derived_constants,
    equilibrium_full,
    f1,
    f2,
    f3,
    validate_initial_data,
    w_hat,
)
from .errors import FrontCollapse, NumericalError, ValidationError

MIN_WIDTH = 1e-6
CLIP_REJECT = 1e-8
CLIP_COUNT_THRESHOLD = 1e-14
MAX_STEP_RETRIES = 12
BLOWUP_FACTOR = 1e3


@dataclass(frozen=True)
class TransformCoeffs:
    """Straightening-map coefficients: xi and the affine zeta(y)."""

    xi: float
    zeta0: float
    zeta1: float

    @classmethod
    def from_fronts(cls, g, h, g_speed, h_speed):
        width = h - g
        return cls(
            xi=4.0 / width ** 2,
            zeta0=(h_speed + g_speed) / width,
            zeta1=(h_speed - g_speed) / width,
        )

    def zeta_at(self, y):
        return self.zeta0 + self.zeta1 * y

    def max_abs_zeta(self) -> float:
        # zeta is affine in y, so the extremes sit at y = -1 and y = +1.
        return max(abs(self.zeta0 - self.zeta1), abs(self.zeta0 + self.zeta1))


@dataclass(frozen=True)
class StepperConfig:
    """Discretization and orchestration knobs for a simulation run.

    n_y must be odd (a node at y = 0) and at least 65.  x_half is the
    initial physical half-width of the u grid; None selects the default
    (h0 + 4*Lambda when r0 > 1, else 4*h0, capped) and the grid extends
    dynamically whenever a front approaches its edge.  The classification
    handoff tolerances (w_dead_factor, front_still, window) default to the
    values defined in the classify module.
    """

    n_y: int = 257
    dt_init: float = 1e-3
    dt_max: float = 0.02
    cfl_safety: float = 0.5
    t_end: float = 200.0
    x_half: Optional[float] = None
    snapshot_every: int = 10
    w_dead_factor: float = DEFAULT_W_DEAD_FACTOR
    front_still: float = DEFAULT_FRONT_STILL
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        if self.n_y < 65 or self.n_y % 2 == 0:
            raise ValidationError("stepper.n_y must be odd and at least 65")
        if not (0.0 < self.cfl_safety <= 0.9):
            raise ValidationError("stepper.cfl_safety must lie in (0, 0.9]")
        for name in ("dt_init", "dt_max", "t_end"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"stepper.{name} must be positive")
        if self.x_half is not None and not self.x_half > 0:
            raise ValidationError("stepper.x_half must be positive")
        if self.snapshot_every < 1:
            raise ValidationError("stepper.snapshot_every must be at least 1")
        if self.window < 1:
            raise ValidationError("stepper.window must be at least 1")
        if not (self.w_dead_factor > 0 and self.front_still > 0):
            raise ValidationError("stepper tolerances must be positive")

    def tolerances(self) -> ClassifyTolerances:
        return ClassifyTolerances(
            w_dead_factor=self.w_dead_factor,
            front_still=self.front_still,
            window=self.window,
        )


@dataclass
class SimState:
    """Full simulation state at one accepted time level.

    z_vals and r_vals hold w and v on the transformed grid (zero at the
    endpoints); u_grid/u_vals hold u on the fixed physical grid.
    quiet_steps counts consecutive accepted steps on which the
    instantaneous vanishing signature held (used by the V1 rule), and
    clip_count the accumulated number of counted positivity clips.
    """

    t: float
    g: float
    h: float
    y_grid: np.ndarray
    z_vals: np.ndarray
    r_vals: np.ndarray
    u_grid: np.ndarray
    u_vals: np.ndarray
    g_speed: float
    h_speed: float
    dt_next: float
    u_bound: float
    w_max_initial: float
    v_max_initial: float
    initial: InitialData
    clip_count: int = 0
    accepted_steps: int = 0
    quiet_steps: int = 0

    @property
    def width(self) -> float:
        return self.h - self.g

    def x_of_y(self) -> np.ndarray:
        """Physical positions of the transformed-grid nodes."""
        return 0.5 * ((self.h - self.g) * self.y_grid + self.h + self.g)

    def w_at(self, x) -> np.ndarray:
        """w interpolated at physical positions (zero outside the fronts)."""
        return _field_at(x, self.z_vals, self.g, self.h, self.y_grid)

    def v_at(self, x) -> np.ndarray:
        """v interpolated at physical positions (zero outside the fronts)."""
        return _field_at(x, self.r_vals, self.g, self.h, self.y_grid)

    def u_at(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.u_grid, self.u_vals)


def _field_at(x, vals, g, h, y_grid):
    x = np.asarray(x, dtype=float)
    y = (2.0 * x - (g + h)) / (h - g)
    out = np.interp(y, y_grid, vals)
    return np.where(np.abs(y) <= 1.0, out, 0.0)


def _front_speeds(z, width, dy, p):
    """Flux front speeds from the one-sided 3-point boundary stencils.

    Clamped to g' <= 0 <= h' (roundoff can flip the sign when z is at
    noise level near the fronts).
    """
    zy_left = (4.0 * z[1] - z[2]) / (2.0 * dy)
    zy_right = (z[-3] - 4.0 * z[-2]) / (2.0 * dy)
    wx_left = 2.0 * zy_left / width
    wx_right = 2.0 * zy_right / width
    g_speed = min(0.0, float(-p.mu * wx_left))
    h_speed = max(0.0, float(-p.beta * wx_right))
    return g_speed, h_speed


def _advection(tc: TransformCoeffs, vals, y_grid, dy, dt):
    """zeta * d(vals)/dy on the interior nodes, upwinded by the sign of zeta.

    Second-order upwind-biased differences (strictly stable under the
    two-stage explicit update for Courant numbers up to 0.5, which the dt
    adaptation enforces at the default safety factor), falling back to
    first-order upwind at the two nodes whose wide stencil would leave the
    grid and whenever the Courant number exceeds 0.5.
    """
    n = vals.size
    zeta = tc.zeta_at(y_grid[1:-1])
    fwd1 = (vals[2:] - vals[1:-1]) / dy
    bwd1 = (vals[1:-1] - vals[:-2]) / dy
    if np.max(np.abs(zeta)) * dt > 0.5 * dy:
        return zeta * np.where(zeta > 0.0, fwd1, bwd1)
    fwd2 = np.empty(n - 2)
    fwd2[:-1] = (-3.0 * vals[1:-2] + 4.0 * vals[2:-1] - vals[3:]) / (2.0 * dy)
    fwd2[-1] = fwd1[-1]
    bwd2 = np.empty(n - 2)
    bwd2[1:] = (3.0 * vals[2:-1] - 4.0 * vals[1:-2] + vals[:-3]) / (2.0 * dy)
    bwd2[0] = bwd1[0]
    return zeta * np.where(zeta > 0.0, fwd2, bwd2)


def _cn_diffusion_solve(z, explicit, alpha_old, alpha_new, dt):
    """Trapezoidal-in-time diffusion step with explicit source terms.

    Solves (I - alpha_new T) z_new = (I + alpha_old T) z + dt * explicit on
    the interior, T the second-difference stencil with zero endpoints.
    """
    n_int = z.size - 2
    ab = np.empty((3, n_int))
    ab[0, :] = -alpha_new
    ab[1, :] = 1.0 + 2.0 * alpha_new
    ab[2, :] = -alpha_new
    rhs = (z[1:-1]
           + alpha_old * (z[2:] - 2.0 * z[1:-1] + z[:-2])
           + dt * explicit)
    out = np.zeros_like(z)
    out[1:-1] = solve_banded((1, 1), ab, rhs)
    return out


def _default_x_half(p: ModelParams, dc: DerivedConstants) -> float:
    if dc.lambda_cap is None:
        return 4.0 * p.h0
    # Covers the vanishing width bound and the early spreading phase; the
    # cap keeps the initial grid bounded when r0 is barely above 1
    # (dynamic extension takes over from there).
    return min(p.h0 + 4.0 * dc.lambda_cap, max(8.0 * p.h0, p.h0 + 20.0))


def _build_u_grid(x_half, dx):
    n_side = int(math.ceil(x_half / dx))
    return dx * np.arange(-n_side, n_side + 1)


def initialize(p: ModelParams, init: InitialData, cfg: StepperConfig) -> SimState:
    """Sample the initial data through the straightening map.

    Validates the admissibility clauses numerically, sets h(0) = -g(0) =
    h0, and computes the initial front speeds by applying the flux
    conditions to the sampled w0.
    """
    validate_initial_data(init, p)
    y = np.linspace(-1.0, 1.0, cfg.n_y)
    dy = y[1] - y[0]
    z = np.asarray(init.w0(p.h0 * y), dtype=float)
    r = np.asarray(init.v0(p.h0 * y), dtype=float)
    z[0] = z[-1] = 0.0
    r[0] = r[-1] = 0.0
    dc = derived_constants(p, init)
    x_half = cfg.x_half if cfg.x_half is not None else _default_x_half(p, dc)
    dx_u = 2.0 * p.h0 / (cfg.n_y - 1)
    u_grid = _build_u_grid(x_half, dx_u)
    u_vals = np.asarray(init.u0(u_grid), dtype=float)
    if np.min(u_vals) <= 0:
        raise ValidationError("u0 must be positive on the physical grid")
    g_speed, h_speed = _front_speeds(z, 2.0 * p.h0, dy, p)
    dt0 = min(cfg.dt_init, _adapted_dt(cfg, dy, 2.0 * p.h0, g_speed, h_speed))
    return SimState(
        t=0.0,
        g=-p.h0,
        h=p.h0,
        y_grid=y,
        z_vals=z,
        r_vals=r,
        u_grid=u_grid,
        u_vals=u_vals,
        g_speed=g_speed,
        h_speed=h_speed,
        dt_next=dt0,
        u_bound=dc.u_bound,
        w_max_initial=float(z.max()),
        v_max_initial=float(r.max()),
        initial=init,
    )


def _adapted_dt(cfg, dy, width, g_speed, h_speed):
    max_speed = max(abs(g_speed), abs(h_speed))
    if max_speed > 0.0:
        max_zeta = 2.0 * max_speed / width
        advective = dy / max_zeta
        front = dy * width / (2.0 * max_speed)
    else:
        advective = math.inf
        front = math.inf
    return cfg.cfl_safety * min(advective, front, cfg.dt_max)


def _ensure_u_coverage(s: SimState, p: ModelParams):
    """Extend the physical u grid when a front approaches its edge.

    New nodes were outside the fronts for their whole history, so their
    value is the exact relaxation of u0 toward theta/a at the current t.
    """
    dx = s.u_grid[1] - s.u_grid[0]
    margin = max(4.0 * dx, s.width * (s.y_grid[1] - s.y_grid[0]))
    chunk = max(64, int(math.ceil(8.0 * margin / dx)))
    decay = math.exp(-p.a * s.t)
    amb = p.theta / p.a
    while s.u_grid[-1] - s.h < margin:
        xs = s.u_grid[-1] + dx * np.arange(1, chunk + 1)
        s.u_grid = np.concatenate([s.u_grid, xs])
        s.u_vals = np.concatenate(
            [s.u_vals, amb + (np.asarray(s.initial.u0(xs), dtype=float) - amb) * decay])
    while s.g - s.u_grid[0] < margin:
        xs = s.u_grid[0] - dx * np.arange(chunk, 0, -1)
        s.u_grid = np.concatenate([xs, s.u_grid])
        s.u_vals = np.concatenate(
            [amb + (np.asarray(s.initial.u0(xs), dtype=float) - amb) * decay, s.u_vals])


def _attempt_step(s: SimState, p: ModelParams, cfg: StepperConfig, dt: float):
    """One predictor-corrector step of size dt; None signals rejection."""
    y = s.y_grid
    dy = y[1] - y[0]
    g, h = s.g, s.h
    width = h - g
    z, r, u = s.z_vals, s.r_vals, s.u_vals
    amb = p.theta / p.a

    g_speed, h_speed = _front_speeds(z, width, dy, p)

    # --- predictor: fronts, then fields with time-n coefficients --------
    g_p = float(g + dt * g_speed)
    h_p = float(h + dt * h_speed)
    if h_p - g_p < MIN_WIDTH:
        raise FrontCollapse(f"front gap collapsed below {MIN_WIDTH} at t = {s.t}")
    tc_n = TransformCoeffs.from_fronts(g, h, g_speed, h_speed)
    xi_p = 4.0 / (h_p - g_p) ** 2

    x_nodes = 0.5 * (width * y + h + g)
    u_on_moving = np.interp(x_nodes, s.u_grid, u)
    f3_0 = f3(r[1:-1], z[1:-1], p)
    adv_z0 = _advection(tc_n, z, y, dy, dt)
    expl_z0 = adv_z0 + f3_0
    alpha_n = 0.5 * dt * p.d * tc_n.xi / dy ** 2
    alpha_p = 0.5 * dt * p.d * xi_p / dy ** 2
    z_p = _cn_diffusion_solve(z, expl_z0, alpha_n, alpha_p, dt)

    f2_0 = f2(u_on_moving[1:-1], r[1:-1], z[1:-1], p)
    adv_r0 = _advection(tc_n, r, y, dy, dt)
    r_p = np.zeros_like(r)
    r_p[1:-1] = r[1:-1] + dt * (f2_0 + adv_r0)

    w_on_u0 = _field_at(s.u_grid, z, g, h, y)
    inside_p = (s.u_grid > g_p) & (s.u_grid < h_p)
    decay = math.exp(-p.a * dt)
    u_p = amb + (u - amb) * decay
    f1_0 = f1(u, w_on_u0, p)
    u_p = np.where(inside_p, u + dt * f1_0, u_p)

    # --- corrector: speeds from the predicted state, then averaging -----
    g_speed2, h_speed2 = _front_speeds(z_p, h_p - g_p, dy, p)
    g_new = float(g + 0.5 * dt * (g_speed + g_speed2))
    h_new = float(h + 0.5 * dt * (h_speed + h_speed2))
    width_new = h_new - g_new
    if width_new < MIN_WIDTH:
        raise FrontCollapse(f"front gap collapsed below {MIN_WIDTH} at t = {s.t}")
    tc_new = TransformCoeffs.from_fronts(g_new, h_new, g_speed2, h_speed2)
    alpha_new = 0.5 * dt * p.d * tc_new.xi / dy ** 2

    f3_1 = f3(np.maximum(r_p[1:-1], 0.0), np.maximum(z_p[1:-1], 0.0), p)
    adv_z1 = _advection(tc_new, z_p, y, dy, dt)
    z_new = _cn_diffusion_solve(z, 0.5 * (expl_z0 + adv_z1 + f3_1),
                                alpha_n, alpha_new, dt)

    x_nodes_new = 0.5 * (width_new * y + h_new + g_new)
    u_on_moving_p = np.interp(x_nodes_new, s.u_grid, u_p)
    f2_1 = f2(u_on_moving_p[1:-1], np.maximum(r_p[1:-1], 0.0),
              np.maximum(z_p[1:-1], 0.0), p)
    adv_r1 = _advection(tc_new, r_p, y, dy, dt)
    r_new = np.zeros_like(r)
    r_new[1:-1] = r[1:-1] + 0.5 * dt * ((f2_0 + adv_r0) + (f2_1 + adv_r1))

    w_on_u1 = _field_at(s.u_grid, np.maximum(z_new, 0.0), g_new, h_new, y)
    inside_new = (s.u_grid > g_new) & (s.u_grid < h_new)
    f1_1 = f1(u_p, w_on_u1, p)
    u_new = np.where(inside_new,
                     u + 0.5 * dt * (f1_0 + f1_1),
                     amb + (u - amb) * decay)

    # --- positivity and bounds ------------------------------------------
    worst = min(float(z_new.min()), float(r_new.min()))
    if worst < -CLIP_REJECT:
        return None
    if np.min(u_new) <= 0.0:
        return None
    clips = int(np.count_nonzero(z_new < -CLIP_COUNT_THRESHOLD)
                + np.count_nonzero(r_new < -CLIP_COUNT_THRESHOLD))
    np.maximum(z_new, 0.0, out=z_new)
    np.maximum(r_new, 0.0, out=r_new)
    z_new[0] = z_new[-1] = 0.0
    r_new[0] = r_new[-1] = 0.0
    overshoot = float(np.max(u_new)) - s.u_bound
    if overshoot > 1e-9:
        raise NumericalError(f"u exceeded its a-priori bound by {overshoot}")
    if overshoot > 0.0:
        np.minimum(u_new, s.u_bound, out=u_new)

    dt_next = _adapted_dt(cfg, dy, width_new, g_speed2, h_speed2)
    quiet_now = (float(z_new.max()) < cfg.w_dead_factor * s.w_max_initial
                 and max(abs(g_speed2), abs(h_speed2)) < cfg.front_still)
    return SimState(
        t=s.t + dt,
        g=g_new,
        h=h_new,
        y_grid=y,
        z_vals=z_new,
        r_vals=r_new,
        u_grid=s.u_grid,
        u_vals=u_new,
        g_speed=g_speed2,
        h_speed=h_speed2,
        dt_next=dt_next,
        u_bound=s.u_bound,
        w_max_initial=s.w_max_initial,
        v_max_initial=s.v_max_initial,
        initial=s.initial,
        clip_count=s.clip_count + clips,
        accepted_steps=s.accepted_steps + 1,
        quiet_steps=s.quiet_steps + 1 if quiet_now else 0,
    )


def step(s: SimState, p: ModelParams, cfg: StepperConfig) -> SimState:
    """Advance one accepted time step (with rejection-halving retries)."""
    _ensure_u_coverage(s, p)
    dt = s.dt_next
    for _ in range(MAX_STEP_RETRIES):
        result = _attempt_step(s, p, cfg, dt)
        if result is not None:
            return result
        dt *= 0.5
    raise NumericalError(
        f"step at t = {s.t} still violates positivity after "
        f"{MAX_STEP_RETRIES} dt halvings")


@dataclass
class TimeSeries:
    """Sampled run series (strictly increasing in t)."""

    t: np.ndarray
    g: np.ndarray
    h: np.ndarray
    width: np.ndarray
    max_w: np.ndarray
    max_v: np.ndarray
    u_center: np.ndarray


@dataclass
class RunOutcome:
    """Classification, sampled series, final profiles, and diagnostics.

    profile_snapshots holds (t, x, u, v, w) tuples on the physical grid at
    snapshot times; v and w are NaN outside the fronts there.
    """

    classification: Classification
    series: TimeSeries
    x_profile: np.ndarray
    u_profile: np.ndarray
    v_profile: np.ndarray
    w_profile: np.ndarray
    r0: float
    lambda_cap: Optional[float]
    final_width: float
    t_final: float
    center_triple: tuple[float, float, float]
    equilibrium_triple: Optional[tuple[float, float, float]]
    clip_count: int
    g_final: float = 0.0
    h_final: float = 0.0
    g_speed_final: float = 0.0
    h_speed_final: float = 0.0
    profile_snapshots: list = field(default_factory=list)

    def summary(self) -> dict:
        """JSON-ready run summary."""
        return {
            "classification": {
                "verdict": self.classification.verdict,
                "reason": self.classification.reason,
                "t_decided": self.classification.t_decided,
            },
            "r0": self.r0,
            "lambda_cap": self.lambda_cap,
            "final_width": self.final_width,
            "t_final": self.t_final,
            "center_triple": list(self.center_triple),
            "equilibrium_triple": (list(self.equilibrium_triple)
                                   if self.equilibrium_triple is not None else None),
            "clip_count": self.clip_count,
        }


def _record(s: SimState, rows: list):
    rows.append((
        s.t, s.g, s.h, s.width,
        float(s.z_vals.max()), float(s.r_vals.max()),
        float(np.interp(0.0, s.u_grid, s.u_vals)),
    ))


def _profile_snapshot(s: SimState):
    inside = (s.u_grid > s.g) & (s.u_grid < s.h)
    v = np.where(inside, s.v_at(s.u_grid), np.nan)
    w = np.where(inside, s.w_at(s.u_grid), np.nan)
    return (s.t, s.u_grid.copy(), s.u_vals.copy(), v, w)


def run(p: ModelParams, init: InitialData, cfg: StepperConfig,
        profile_every: int = 0) -> RunOutcome:
    """Integrate to t_end or until the classification becomes definite.

    The time series is sampled every snapshot_every accepted steps; with
    profile_every = n > 0, a full profile snapshot is kept at every n-th
    series sample as well (the initial and final profiles always are).
    """
    dc = derived_constants(p, init)
    tol = cfg.tolerances()
    s = initialize(p, init, cfg)
    # No-blow-up guard: fields may legitimately grow from a small initial
    # amplitude up to the saturation pair at the ambient u bound, so that
    # scale joins the initial one.
    saturation = 0.0
    if p.k * p.b * dc.u_bound > p.q * p.c:
        vh, wh = w_hat(dc.u_bound, p)
        saturation = max(vh, wh)
    blowup_scale = BLOWUP_FACTOR * max(s.w_max_initial, s.v_max_initial, saturation)
    rows: list = []
    snapshots: list = [_profile_snapshot(s)]
    _record(s, rows)
    cls = classify_online(s, dc, tol)
    last_recorded = 0
    n_records = 1
    while cls.verdict == VERDICT_UNDETERMINED and s.t < cfg.t_end:
        s = step(s, p, cfg)
        if float(s.z_vals.max()) > blowup_scale or float(s.r_vals.max()) > blowup_scale:
            raise NumericalError(f"field blow-up detected at t = {s.t}")
        if s.accepted_steps - last_recorded >= cfg.snapshot_every:
            _record(s, rows)
            last_recorded = s.accepted_steps
            n_records += 1
            if profile_every > 0 and (n_records - 1) % profile_every == 0:
                snapshots.append(_profile_snapshot(s))
        cls = classify_online(s, dc, tol)
    if s.accepted_steps != last_recorded or not rows:
        _record(s, rows)
    if not snapshots or snapshots[-1][0] != s.t:
        snapshots.append(_profile_snapshot(s))

    data = np.array(rows, dtype=float)
    series = TimeSeries(t=data[:, 0], g=data[:, 1], h=data[:, 2],
                        width=data[:, 3], max_w=data[:, 4], max_v=data[:, 5],
                        u_center=data[:, 6])
    inside = (s.u_grid > s.g) & (s.u_grid < s.h)
    v_prof = np.where(inside, s.v_at(s.u_grid), np.nan)
    w_prof = np.where(inside, s.w_at(s.u_grid), np.nan)
    try:
        eq = equilibrium_full(p).as_tuple()
    except Exception:
        eq = None
    center = (float(np.interp(0.0, s.u_grid, s.u_vals)),
              float(s.v_at(np.array([0.0]))[0]),
              float(s.w_at(np.array([0.0]))[0]))
    return RunOutcome(
        classification=cls,
        series=series,
        x_profile=s.u_grid.copy(),
        u_profile=s.u_vals.copy(),
        v_profile=v_prof,
        w_profile=w_prof,
        r0=dc.r0,
        lambda_cap=dc.lambda_cap,
        final_width=s.width,
        t_final=s.t,
        center_triple=center,
        equilibrium_triple=eq,
        clip_count=s.clip_count,
        g_final=s.g,
        h_final=s.h,
        g_speed_final=s.g_speed,
        h_speed_final=s.h_speed,
        profile_snapshots=snapshots,
    )
