"""Command-line interface: subcommand dispatch and bit-stable output emission.

Subcommands:
    simulate          integrate a run, write series/profiles/summary
    eigen             principal eigenvalue on (-l, l) at ambient level m
    steady            steady profiles on (-l, l) at ambient level m
    thresholds        r0, critical width/diffusion, equilibria
    certificate       vanishing certificate bound mu0 at half-width l
    sweep             phase table over axes from {h0, d, gamma}
    threshold-search  bisection bracket for the sharp threshold in gamma
    ode-baseline      bilinear-rate compartment model reference dynamic

Exit status: 0 success, 2 validation error, 3 numerical failure.  Errors
carry a human-readable line plus a machine-readable JSON object on stderr.
All numeric file output uses 17 significant digits (round-trip exact).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .classify import (
    optimize_certificate,
    sweep,
    threshold_search,
    vanishing_certificate,
)
from .config import parse_config
from .core_model import (
    baseline_equilibrium,
    derived_constants,
    equilibrium_full,
    ode_baseline,
)
from .errors import (
    CertificateNotApplicable,
    NoPositiveRoot,
    NumericalError,
    ValidationError,
)
from .fb_solver import run
from .spectral import EigenProblem, principal_eigenvalue, thresholds
from .steady_states import (
    NoPositiveSolution,
    solve_bvp_with_boundary_value,
    solve_dirichlet_bvp,
)
from .textio import dumps, fmt, write_csv, write_json


def _emit_error(kind: str, message: str) -> None:
    print(f"error: {message}", file=sys.stderr)
    print(dumps({"error": {"kind": kind, "message": message}}), file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _emit_error("usage", message)
        raise SystemExit(2)


def _build_parser() -> _Parser:
    parser = _Parser(prog="viralfronts",
                     description="moving-boundary viral propagation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.add_argument("--config", required=True, metavar="F",
                        help="JSON run configuration")
        sp.set_defaults(func=func)
        return sp

    sp = add("simulate", cmd_simulate, help="integrate one run")
    sp.add_argument("--out", metavar="DIR", default=None,
                    help="output directory (default: outputs.dir)")

    sp = add("eigen", cmd_eigen, help="principal eigenvalue on (-l, l)")
    sp.add_argument("--m", required=True, type=float, help="ambient uninfected level")
    sp.add_argument("--l", required=True, type=float, help="interval half-width")

    sp = add("steady", cmd_steady, help="steady profiles on (-l, l)")
    sp.add_argument("--m", required=True, type=float, help="ambient uninfected level")
    sp.add_argument("--l", required=True, type=float, help="interval half-width")
    sp.add_argument("--boundary", type=float, default=None, metavar="K",
                    help="constant boundary value (default: zero Dirichlet)")
    sp.add_argument("--n", type=int, default=1025, help="grid nodes")

    add("thresholds", cmd_thresholds, help="closed-form thresholds")

    sp = add("certificate", cmd_certificate, help="vanishing certificate")
    sp.add_argument("--l", required=True, type=float, help="certificate half-width")

    sp = add("sweep", cmd_sweep, help="phase table over parameter axes")
    sp.add_argument("--axis", action="append", required=True, metavar="NAME=LO:HI:N",
                    help="axis over h0, d, or gamma (repeatable)")

    sp = add("threshold-search", cmd_threshold_search,
             help="bisection bracket for the sharp threshold")
    sp.add_argument("--lo", required=True, type=float, help="vanishing endpoint")
    sp.add_argument("--hi", required=True, type=float, help="spreading endpoint")
    sp.add_argument("--rtol", required=True, type=float, help="relative bracket width")

    sp = add("ode-baseline", cmd_ode_baseline, help="compartment model reference")
    sp.add_argument("--t-end", required=True, type=float, dest="t_end")
    sp.add_argument("--dt", type=float, default=1e-3)

    return parser


def dispatch(argv) -> int:
    """Run one subcommand; returns the process exit status."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    try:
        return ns.func(ns)
    except ValidationError as exc:
        _emit_error("validation", str(exc))
        return 2
    except NumericalError as exc:
        _emit_error("numerical", str(exc))
        return 3


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


def _prepare_outdir(cfg, override=None) -> Path:
    outdir = Path(override) if override else Path(cfg.outputs.dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_json(outdir / "effective_config.json", cfg.effective)
    return outdir


def _certificate_dict(cert) -> dict:
    return {"l": cert.l, "lambda1": cert.lambda1, "phi_t": cert.phi_t,
            "M": cert.M, "mu0": cert.mu0}


def cmd_simulate(ns) -> int:
    cfg = parse_config(ns.config)
    outdir = _prepare_outdir(cfg, ns.out)
    outcome = run(cfg.model, cfg.initial, cfg.stepper,
                  profile_every=cfg.outputs.profile_every)

    s = outcome.series
    write_csv(outdir / "series.csv",
              ["t", "g", "h", "width", "max_w", "max_v", "u_center"],
              zip(s.t, s.g, s.h, s.width, s.max_w, s.max_v, s.u_center))
    profile_rows = []
    for snap in outcome.profile_snapshots:
        t, x, u, v, w = snap
        for j in range(x.size):
            profile_rows.append((t, x[j], u[j], v[j], w[j]))
    write_csv(outdir / "profiles.csv", ["t", "x", "u", "v", "w"], profile_rows)

    summary = outcome.summary()
    try:
        cert = optimize_certificate(cfg.model, cfg.initial)
        summary["certificate"] = _certificate_dict(cert)
    except CertificateNotApplicable:
        summary["certificate"] = None
    summary["threshold_bracket"] = None
    write_json(outdir / "summary.json", summary)

    if cfg.outputs.plots:
        from . import plots
        plots.save_simulation_figures(outcome, outdir)

    cls = outcome.classification
    print(f"simulate: {cls.verdict} (rule {cls.reason}) "
          f"t_final={fmt(outcome.t_final)} width={fmt(outcome.final_width)} "
          f"out={outdir}")
    return 0


def cmd_eigen(ns) -> int:
    cfg = parse_config(ns.config)
    p = cfg.model
    if not ns.m > 0:
        raise ValidationError("--m must be positive")
    if not ns.l > 0:
        raise ValidationError("--l must be positive")
    ep = EigenProblem(d=p.d, a11=-p.q, a12=p.k, a21=p.b * ns.m, a22=-p.c,
                      l1=-ns.l, l2=ns.l)
    res = principal_eigenvalue(ep)
    ths = thresholds(ep)
    outdir = _prepare_outdir(cfg)
    write_json(outdir / "eigen.json", {
        "m": ns.m,
        "l1": ep.l1,
        "l2": ep.l2,
        "rho1": res.rho1,
        "lambda1": res.lambda1,
        "gamma": ths.gamma,
        "d_star": ths.d_star,
        "l_star": ths.l_star,
        "psi_amplitude": res.psi_profile.amplitude,
    })
    if cfg.outputs.plots:
        from . import plots
        plots.save_eigen_figure(res, ep.l1, ep.l2, outdir)
    print(f"eigen: lambda1={fmt(res.lambda1)} rho1={fmt(res.rho1)} "
          f"gamma={fmt(ths.gamma)} out={outdir}")
    return 0


def cmd_steady(ns) -> int:
    cfg = parse_config(ns.config)
    if not ns.m > 0:
        raise ValidationError("--m must be positive")
    if not ns.l > 0:
        raise ValidationError("--l must be positive")
    outdir = _prepare_outdir(cfg)
    if ns.boundary is None:
        sol = solve_dirichlet_bvp(ns.m, cfg.model, ns.l, ns.n)
    else:
        sol = solve_bvp_with_boundary_value(ns.m, cfg.model, ns.l, ns.boundary, ns.n)
    if isinstance(sol, NoPositiveSolution):
        write_json(outdir / "steady.json",
                   {"exists": False, "lambda1": sol.lambda1})
        print(f"steady: no positive solution (lambda1={fmt(sol.lambda1)}) "
              f"out={outdir}")
        return 0
    write_csv(outdir / "steady.csv", ["x", "v", "w"],
              zip(sol.grid, sol.v_vals, sol.w_vals))
    write_json(outdir / "steady.json", {
        "exists": True,
        "converged": sol.converged,
        "iterations": sol.iterations,
        "center_v": float(sol.v_vals[sol.v_vals.size // 2]),
        "center_w": float(sol.w_vals[sol.w_vals.size // 2]),
    })
    if cfg.outputs.plots:
        from . import plots
        plots.save_steady_figure(sol, outdir)
    print(f"steady: center_w={fmt(float(sol.w_vals[sol.w_vals.size // 2]))} "
          f"iterations={sol.iterations} out={outdir}")
    return 0


def cmd_thresholds(ns) -> int:
    cfg = parse_config(ns.config)
    dc = derived_constants(cfg.model, cfg.initial)
    try:
        eq = list(equilibrium_full(cfg.model).as_tuple())
    except NoPositiveRoot:
        eq = None
    outdir = _prepare_outdir(cfg)
    write_json(outdir / "thresholds.json", {
        "r0": dc.r0,
        "lambda_cap": dc.lambda_cap,
        "d_cap": dc.d_cap,
        "u_bound": dc.u_bound,
        "equilibrium_triple": eq,
        "baseline_equilibrium": list(baseline_equilibrium(cfg.model)),
    })
    print(f"thresholds: r0={fmt(dc.r0)} lambda_cap={fmt(dc.lambda_cap)} "
          f"d_cap={fmt(dc.d_cap)} out={outdir}")
    return 0


def cmd_certificate(ns) -> int:
    cfg = parse_config(ns.config)
    if not ns.l > 0:
        raise ValidationError("--l must be positive")
    cert = vanishing_certificate(cfg.model, cfg.initial, ns.l)
    outdir = _prepare_outdir(cfg)
    write_json(outdir / "certificate.json", _certificate_dict(cert))
    print(f"certificate: mu0={fmt(cert.mu0)} l={fmt(cert.l)} "
          f"lambda1={fmt(cert.lambda1)} M={fmt(cert.M)} out={outdir}")
    return 0


def _parse_axis(spec: str):
    try:
        name, rng = spec.split("=", 1)
        lo_s, hi_s, n_s = rng.split(":")
        lo, hi, count = float(lo_s), float(hi_s), int(n_s)
    except ValueError:
        raise ValidationError(
            f"axis must look like name=LO:HI:N, got {spec!r}") from None
    if count < 1:
        raise ValidationError(f"axis {name} needs at least one point")
    if count > 1 and not hi > lo:
        raise ValidationError(f"axis {name} needs HI > LO")
    return name.strip(), np.linspace(lo, hi, count)


def cmd_sweep(ns) -> int:
    cfg = parse_config(ns.config)
    axes = {}
    for spec in ns.axis:
        name, values = _parse_axis(spec)
        if name in axes:
            raise ValidationError(f"duplicate sweep axis: {name}")
        axes[name] = values
    rows = sweep(cfg.model, cfg.initial, axes, cfg.stepper)
    outdir = _prepare_outdir(cfg)
    write_csv(outdir / "sweep.csv",
              ["h0", "d", "gamma", "r0", "lambda_cap", "verdict", "source"],
              ((row["h0"], row["d"], row["gamma"], row["r0"],
                row["lambda_cap"], row["verdict"], row["source"])
               for row in rows))
    if cfg.outputs.plots:
        from . import plots
        plots.save_sweep_figure(rows, list(axes.keys()), outdir)
    counts = {}
    for row in rows:
        counts[row["verdict"]] = counts.get(row["verdict"], 0) + 1
    breakdown = " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    print(f"sweep: {len(rows)} cells ({breakdown}) out={outdir}")
    return 0


def cmd_threshold_search(ns) -> int:
    cfg = parse_config(ns.config)
    bracket = threshold_search(cfg.model, cfg.initial, cfg.stepper,
                               ns.lo, ns.hi, ns.rtol)
    outdir = _prepare_outdir(cfg)
    summary = {
        "threshold_bracket": {
            "mu_lo": bracket.mu_lo,
            "mu_hi": bracket.mu_hi,
            "rel_width": bracket.rel_width,
            "audit_ok": bracket.audit_ok,
            "probes": [
                {"gamma": pr.gamma, "verdict": pr.verdict, "reason": pr.reason,
                 "flagged": pr.flagged, "final_width": pr.final_width,
                 "t_final": pr.t_final}
                for pr in bracket.probes
            ],
        },
        "certificate": (_certificate_dict(bracket.certificate)
                        if bracket.certificate is not None else None),
    }
    write_json(outdir / "summary.json", summary)
    if not bracket.audit_ok:
        _emit_error("numerical",
                    "monotonicity violation: verdicts do not flip exactly once")
        return 3
    print(f"threshold-search: bracket=[{fmt(bracket.mu_lo)}, {fmt(bracket.mu_hi)}] "
          f"rel_width={fmt(bracket.rel_width)} probes={len(bracket.probes)} "
          f"out={outdir}")
    return 0


def cmd_ode_baseline(ns) -> int:
    cfg = parse_config(ns.config)
    if not ns.t_end > 0:
        raise ValidationError("--t-end must be positive")
    if not ns.dt > 0:
        raise ValidationError("--dt must be positive")
    init = cfg.initial
    zero = np.array([0.0])
    triple = (float(init.u0(zero)[0]), float(init.v0(zero)[0]),
              float(init.w0(zero)[0]))
    t, states = ode_baseline(cfg.model, triple, ns.t_end, ns.dt)
    stride = max(1, (t.size - 1) // 20000)
    outdir = _prepare_outdir(cfg)
    write_csv(outdir / "baseline.csv", ["t", "u", "v", "w"],
              ((t[i], states[i, 0], states[i, 1], states[i, 2])
               for i in range(0, t.size, stride)))
    eq = baseline_equilibrium(cfg.model)
    write_json(outdir / "baseline.json", {
        "initial_triple": list(triple),
        "final_triple": [float(v) for v in states[-1]],
        "equilibrium": list(eq),
        "r0": derived_constants(cfg.model).r0,
        "t_end": ns.t_end,
        "dt": ns.dt,
    })
    if cfg.outputs.plots:
        from . import plots
        plots.save_baseline_figure(t[::stride], states[::stride], eq, outdir)
    print(f"ode-baseline: final=({fmt(float(states[-1, 0]))}, "
          f"{fmt(float(states[-1, 1]))}, {fmt(float(states[-1, 2]))}) out={outdir}")
    return 0
