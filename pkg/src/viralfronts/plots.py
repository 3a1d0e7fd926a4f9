"""Figure rendering for the report path.

Each CLI report writes PNG figures next to its delimited output: front
trajectories and final profiles for a simulation, the verdict map for a
sweep, trajectories for the baseline, profiles for steady states and
eigenfunctions.  Rendering is headless (Agg) and deterministic (fixed
dpi, fixed metadata).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE = dict(dpi=150, metadata={"Software": "viralfronts"})

_VERDICT_COLORS = {
    "Spreading": "#c44e52",
    "Vanishing": "#4c72b0",
    "Undetermined": "#bbbbbb",
    "Error": "#000000",
}


def _save(fig, outdir, name):
    path = Path(outdir) / name
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return path


def save_simulation_figures(outcome, outdir) -> list:
    """fronts.png (front paths and width) and profiles.png (final fields)."""
    written = []
    s = outcome.series

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
    ax1.plot(s.t, s.g, label="g(t)", color="#4c72b0")
    ax1.plot(s.t, s.h, label="h(t)", color="#c44e52")
    if outcome.lambda_cap is not None:
        ax1.axhline(outcome.lambda_cap / 2, ls="--", lw=0.8, color="gray")
        ax1.axhline(-outcome.lambda_cap / 2, ls="--", lw=0.8, color="gray",
                    label="critical half-width")
    ax1.set_xlabel("t")
    ax1.set_ylabel("front position")
    ax1.legend(fontsize=8)
    ax2.semilogy(s.t, np.maximum(s.max_w, 1e-300), label="max w", color="#c44e52")
    ax2.semilogy(s.t, np.maximum(s.max_v, 1e-300), label="max v", color="#4c72b0")
    ax2.set_xlabel("t")
    ax2.set_ylabel("field maxima")
    ax2.legend(fontsize=8)
    fig.suptitle(f"{outcome.classification.verdict} "
                 f"(rule {outcome.classification.reason})", fontsize=10)
    fig.tight_layout()
    written.append(_save(fig, outdir, "fronts.png"))

    fig, ax = plt.subplots(figsize=(6, 3.4))
    ax.plot(outcome.x_profile, outcome.u_profile, label="u", color="#55a868")
    ax.plot(outcome.x_profile, outcome.v_profile, label="v", color="#4c72b0")
    ax.plot(outcome.x_profile, outcome.w_profile, label="w", color="#c44e52")
    for x0 in (outcome.g_final, outcome.h_final):
        ax.axvline(x0, ls=":", lw=0.8, color="gray")
    ax.set_xlabel("x")
    ax.set_ylabel("final profiles")
    ax.set_title(f"t = {outcome.t_final:.6g}", fontsize=10)
    ax.legend(fontsize=8)
    fig.tight_layout()
    written.append(_save(fig, outdir, "profiles.png"))
    return written


def save_sweep_figure(rows, axis_names, outdir):
    """phase.png: verdict map over one or two sweep axes."""
    if len(axis_names) not in (1, 2):
        return None
    fig, ax = plt.subplots(figsize=(5.4, 4))
    xname = axis_names[0]
    yname = axis_names[1] if len(axis_names) == 2 else None
    for verdict, color in _VERDICT_COLORS.items():
        xs = [row[xname] for row in rows if row["verdict"] == verdict]
        if not xs:
            continue
        ys = ([row[yname] for row in rows if row["verdict"] == verdict]
              if yname else [0.0] * len(xs))
        ax.scatter(xs, ys, s=26, color=color, label=verdict, marker="s")
    ax.set_xlabel(xname)
    ax.set_ylabel(yname if yname else "")
    if yname is None:
        ax.set_yticks([])
    ax.legend(fontsize=8)
    ax.set_title("phase map", fontsize=10)
    fig.tight_layout()
    return _save(fig, outdir, "phase.png")


def save_baseline_figure(t, states, equilibrium, outdir):
    """baseline.png: compartment trajectories and their attractor."""
    fig, ax = plt.subplots(figsize=(6, 3.4))
    for idx, (name, color) in enumerate(
            (("u", "#55a868"), ("v", "#4c72b0"), ("w", "#c44e52"))):
        ax.plot(t, states[:, idx], label=name, color=color)
        ax.axhline(equilibrium[idx], ls=":", lw=0.8, color=color)
    ax.set_xlabel("t")
    ax.set_ylabel("compartments")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, outdir, "baseline.png")


def save_steady_figure(sol, outdir):
    """steady.png: steady v and w profiles."""
    fig, ax = plt.subplots(figsize=(6, 3.4))
    ax.plot(sol.grid, sol.w_vals, label="w", color="#c44e52")
    ax.plot(sol.grid, sol.v_vals, label="v", color="#4c72b0")
    ax.set_xlabel("x")
    ax.set_ylabel("steady profiles")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, outdir, "steady.png")


def save_eigen_figure(res, l1, l2, outdir):
    """eigen.png: the positive principal eigenfunction pair."""
    xs = np.linspace(l1, l2, 401)
    fig, ax = plt.subplots(figsize=(6, 3.4))
    ax.plot(xs, res.phi_profile(xs), label="phi", color="#c44e52")
    ax.plot(xs, res.psi_profile(xs), label="psi", color="#4c72b0")
    ax.set_xlabel("x")
    ax.set_title(f"lambda1 = {res.lambda1:.6g}", fontsize=10)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, outdir, "eigen.png")
