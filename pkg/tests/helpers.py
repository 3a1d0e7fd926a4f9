"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

import viralfronts as vf

REFERENCE = dict(d=1.0, theta=1.0, a=1.0, b=2.0, c=1.0, k=2.0, q=1.0,
                 mu=1.0, beta=1.0)


def make_params(**overrides) -> vf.ModelParams:
    """Reference parameter set (r0 = 4) with optional overrides."""
    kw = dict(REFERENCE, h0=0.4)
    kw.update(overrides)
    return vf.ModelParams(**kw)


def draw_params(rng: np.random.Generator, r0_lo: float, r0_hi: float,
                **overrides) -> vf.ModelParams:
    """Random positive parameter set with r0 drawn uniformly in [r0_lo, r0_hi].

    All rates are drawn in moderate ranges and b is then solved from the
    target r0, so the draw covers genuinely different parameter shapes.
    """
    r0 = rng.uniform(r0_lo, r0_hi)
    theta = rng.uniform(0.5, 2.0)
    a = rng.uniform(0.5, 2.0)
    c = rng.uniform(0.5, 2.0)
    k = rng.uniform(0.5, 2.0)
    q = rng.uniform(0.5, 2.0)
    b = r0 * a * c * q / (theta * k)
    kw = dict(
        d=rng.uniform(0.5, 2.0),
        theta=theta, a=a, b=b, c=c, k=k, q=q,
        mu=rng.uniform(0.5, 2.0),
        beta=rng.uniform(0.5, 2.0),
        h0=rng.uniform(0.3, 1.0),
    )
    kw.update(overrides)
    return vf.ModelParams(**kw)


def draw_eigenproblem(rng: np.random.Generator) -> vf.EigenProblem:
    """Random admissible coupled eigenproblem."""
    l1 = rng.uniform(-3.0, 1.0)
    return vf.EigenProblem(
        d=rng.uniform(0.1, 3.0),
        a11=-rng.uniform(0.1, 3.0),
        a12=rng.uniform(0.1, 3.0),
        a21=rng.uniform(0.1, 3.0),
        a22=-rng.uniform(0.1, 3.0),
        l1=l1,
        l2=l1 + rng.uniform(0.5, 4.0),
    )


def cosine_initial(p: vf.ModelParams, amplitude: float = 0.5,
                   u0_level: float | None = None,
                   w_amplitude: float | None = None) -> vf.InitialData:
    level = p.theta / p.a if u0_level is None else u0_level
    return vf.InitialData.cosine(p.h0, amplitude, level, w_amplitude=w_amplitude)
