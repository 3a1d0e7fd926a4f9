"""Configuration ingestion: a strict JSON document with four blocks.

Top-level keys: ``model`` (required; the ten positive constants),
``initial``, ``stepper``, ``outputs`` (each optional, defaults applied).
Unknown keys anywhere are rejected with their full path.  The effective
configuration - with every default materialized - is echoed next to the
outputs so a run can be reproduced byte-identically from the echo.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core_model import InitialData, ModelParams, PARAM_FIELDS, validate_initial_data
from .errors import ValidationError
from .fb_solver import StepperConfig

STEPPER_DEFAULTS = {
    "n_y": 257,
    "dt_init": 1e-3,
    "dt_max": 0.02,
    "cfl_safety": 0.5,
    "t_end": 200.0,
    "x_half": None,
    "snapshot_every": 10,
    "w_dead_factor": 1e-5,
    "front_still": 1e-7,
    "window": 50,
}

INITIAL_DEFAULTS = {
    "profile": "cosine",
    "amplitude": 1.0,
    "w_amplitude": None,   # None -> same as amplitude
    "u0": None,            # None -> theta/a
}

OUTPUT_DEFAULTS = {
    "dir": "out",
    "profile_every": 0,    # 0 -> initial and final profile snapshots only
    "plots": True,
}


@dataclass
class OutputConfig:
    dir: str
    profile_every: int
    plots: bool


@dataclass
class RunConfig:
    model: ModelParams
    initial: InitialData
    stepper: StepperConfig
    outputs: OutputConfig
    effective: dict


def _reject_unknown(block: dict, allowed, prefix: str) -> None:
    for key in block:
        if key not in allowed:
            raise ValidationError(f"unknown config key: {prefix}{key}")


def _require_number(block, key, prefix):
    if key not in block:
        raise ValidationError(f"{prefix}{key} is required")
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{prefix}{key} must be a number")
    return float(value)


def parse_config(path) -> RunConfig:
    """Parse and validate a run configuration file."""
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("config document must be a JSON object")
    _reject_unknown(doc, ("model", "initial", "stepper", "outputs"), "")
    if "model" not in doc:
        raise ValidationError("model block is required")

    model_block = doc["model"]
    if not isinstance(model_block, dict):
        raise ValidationError("model must be an object")
    _reject_unknown(model_block, PARAM_FIELDS, "model.")
    values = {}
    for name in PARAM_FIELDS:
        value = _require_number(model_block, name, "model.")
        if not (math.isfinite(value) and value > 0):
            raise ValidationError(f"model.{name} must be positive")
        values[name] = value
    model = ModelParams(**values)

    stepper_block = dict(doc.get("stepper", {}))
    if not isinstance(stepper_block, dict):
        raise ValidationError("stepper must be an object")
    _reject_unknown(stepper_block, STEPPER_DEFAULTS, "stepper.")
    stepper_eff = dict(STEPPER_DEFAULTS)
    stepper_eff.update(stepper_block)
    for key in ("n_y", "snapshot_every", "window"):
        value = stepper_eff[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f"stepper.{key} must be an integer")
    stepper = StepperConfig(**stepper_eff)

    initial_block = dict(doc.get("initial", {}))
    if not isinstance(initial_block, dict):
        raise ValidationError("initial must be an object")
    _reject_unknown(initial_block, ("profile", "amplitude", "w_amplitude",
                                    "u0", "samples"), "initial.")
    if "samples" in initial_block:
        for key in ("profile", "amplitude", "w_amplitude"):
            if key in initial_block:
                raise ValidationError(
                    f"initial.samples excludes initial.{key}")
        sample_path = Path(initial_block["samples"])
        if not sample_path.is_absolute():
            sample_path = path.parent / sample_path
        if not sample_path.is_file():
            raise ValidationError(f"initial.samples file not found: {sample_path}")
        initial = _load_samples(sample_path)
        # the echoed config must reproduce the run from anywhere, so the
        # materialized path is absolute
        initial_eff = {"samples": str(sample_path.resolve())}
    else:
        initial_eff = dict(INITIAL_DEFAULTS)
        initial_eff.update(initial_block)
        if initial_eff["profile"] != "cosine":
            raise ValidationError(
                f"initial.profile must be \"cosine\", got {initial_eff['profile']!r}")
        amplitude = initial_eff["amplitude"]
        w_amplitude = initial_eff["w_amplitude"]
        u0_level = initial_eff["u0"]
        if u0_level is None:
            u0_level = model.theta / model.a
        for label, value in (("amplitude", amplitude),
                             ("w_amplitude", w_amplitude), ("u0", u0_level)):
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not value > 0:
                raise ValidationError(f"initial.{label} must be positive")
        initial = InitialData.cosine(model.h0, float(amplitude), float(u0_level),
                                     w_amplitude=w_amplitude)
        initial_eff["u0"] = float(u0_level)
        initial_eff["w_amplitude"] = float(
            amplitude if w_amplitude is None else w_amplitude)
    validate_initial_data(initial, model)

    outputs_block = dict(doc.get("outputs", {}))
    if not isinstance(outputs_block, dict):
        raise ValidationError("outputs must be an object")
    _reject_unknown(outputs_block, OUTPUT_DEFAULTS, "outputs.")
    outputs_eff = dict(OUTPUT_DEFAULTS)
    outputs_eff.update(outputs_block)
    if not isinstance(outputs_eff["dir"], str) or not outputs_eff["dir"]:
        raise ValidationError("outputs.dir must be a nonempty string")
    if isinstance(outputs_eff["profile_every"], bool) \
            or not isinstance(outputs_eff["profile_every"], int) \
            or outputs_eff["profile_every"] < 0:
        raise ValidationError("outputs.profile_every must be a nonnegative integer")
    if not isinstance(outputs_eff["plots"], bool):
        raise ValidationError("outputs.plots must be a boolean")
    outputs = OutputConfig(dir=outputs_eff["dir"],
                           profile_every=outputs_eff["profile_every"],
                           plots=outputs_eff["plots"])

    effective = {
        "model": {name: values[name] for name in PARAM_FIELDS},
        "initial": initial_eff,
        "stepper": stepper_eff,
        "outputs": outputs_eff,
    }
    return RunConfig(model=model, initial=initial, stepper=stepper,
                     outputs=outputs, effective=effective)


def _load_samples(path: Path) -> InitialData:
    """Tabulated initial data: CSV with header x,u0,v0,w0."""
    lines = path.read_text().strip().splitlines()
    if not lines or lines[0].strip() != "x,u0,v0,w0":
        raise ValidationError(
            f"initial.samples must be CSV with header x,u0,v0,w0: {path}")
    try:
        data = np.array([[float(v) for v in line.split(",")]
                         for line in lines[1:]], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"initial.samples has a non-numeric entry: {exc}")
    if data.ndim != 2 or data.shape[1] != 4:
        raise ValidationError("initial.samples rows must have 4 columns")
    return InitialData.from_samples(data[:, 0], data[:, 1], data[:, 2], data[:, 3])
