"""Run configuration: a single JSON document in SI base units.

Grammar (every key optional; omitted values take the defaults shown)::

    {
      "chip": {
        "dyn_const": 1.06e-8,   # W/(V^2 Hz)
        "i_leak": 0.0797,       # A
        "k2": 4.02e9,           # Hz-consistent, see model.K2_UNIT_NOTE
        "v_th": 0.23,           # V
        "h": 1.5,
        "v_max": 1.2,           # V
        "v_min": null           # V; null means v_th + 0.01
      },
      "reference": {"f_s": 3.2e9, "v_s": 1.2, "t_s": 1.0},
      "speedup": {"kind": "amdahl", "f": 0.9}
               | {"kind": "table", "path": "speedup.csv"},
      "targets": [1.0],
      "p_range": [1, 64],
      "validate": {"fractions": [0.5, 0.9, 0.99, 1.0], "targets": [0.25, 0.5, 1.0]},
      "output": {"dir": "out", "formats": ["csv", "report"]}
    }

Relative paths are resolved against the config file's directory.  A table
speedup model truncates ``p_range`` to the table's core counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError, DataError
from .model import (
    TABLE1_PARAMS,
    TABLE1_REFERENCE,
    ChipParams,
    ReferencePoint,
    chip_param_problems,
    reference_problems,
)
from .planner import clip_p_range
from .speedup import Amdahl, SpeedupModel, load_speedup_csv, validate_model

DEFAULT_FRACTION = 0.9
DEFAULT_TARGETS = (1.0,)
DEFAULT_P_RANGE = (1, 64)
STANDARD_FRACTIONS = (0.5, 0.9, 0.99, 1.0)
STANDARD_TARGETS = (0.25, 0.5, 1.0)
OUTPUT_FORMATS = ("csv", "report", "svg")

_CHIP_KEYS = ("dyn_const", "i_leak", "k2", "v_th", "h", "v_max", "v_min")
_REF_KEYS = ("f_s", "v_s", "t_s")
_TOP_KEYS = ("chip", "reference", "speedup", "targets", "p_range", "validate", "output")


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "."
    formats: tuple[str, ...] = ("csv", "report")


@dataclass(frozen=True)
class ValidationGrid:
    fractions: tuple[float, ...] = STANDARD_FRACTIONS
    targets: tuple[float, ...] = STANDARD_TARGETS


@dataclass(frozen=True)
class RunConfig:
    chip: ChipParams = TABLE1_PARAMS
    reference: ReferencePoint = TABLE1_REFERENCE
    speedup: SpeedupModel = field(default_factory=lambda: Amdahl(DEFAULT_FRACTION))
    speedup_path: str | None = None
    targets: tuple[float, ...] = DEFAULT_TARGETS
    p_range: tuple[int, int] = DEFAULT_P_RANGE
    validate: ValidationGrid = ValidationGrid()
    output: OutputSpec = OutputSpec()


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _section(raw: dict, key: str, allowed: tuple[str, ...], errs: list[str]) -> dict:
    sec = raw.get(key, {})
    if not isinstance(sec, dict):
        errs.append(f"{key}: expected an object")
        return {}
    for k in sec:
        if k not in allowed:
            errs.append(f"{key}.{k}: unknown key")
    return sec


def _numbers(sec: dict, prefix: str, keys: tuple[str, ...], defaults: dict, errs: list[str]) -> dict:
    out = {}
    for k in keys:
        val = sec.get(k, defaults.get(k))
        if val is None and k == "v_min":
            out[k] = None
            continue
        if not _is_number(val):
            errs.append(f"{prefix}.{k}: expected a finite number (got {val!r})")
            continue
        out[k] = float(val)
    return out


def _number_list(val: Any, path: str, errs: list[str]) -> tuple[float, ...]:
    if not isinstance(val, list) or not val:
        errs.append(f"{path}: expected a non-empty list of numbers")
        return ()
    out = []
    for i, x in enumerate(val):
        if not _is_number(x):
            errs.append(f"{path}[{i}]: expected a finite number (got {x!r})")
        else:
            out.append(float(x))
    return tuple(out)


def config_from_dict(raw: Any, base_dir: str | Path = ".") -> RunConfig:
    """Build and validate a RunConfig, reporting every violation at once."""
    base_dir = Path(base_dir)
    errs: list[str] = []
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    for k in raw:
        if k not in _TOP_KEYS:
            errs.append(f"{k}: unknown key")

    chip_sec = _section(raw, "chip", _CHIP_KEYS, errs)
    chip_defaults = {k: getattr(TABLE1_PARAMS, k) for k in _CHIP_KEYS}
    if "v_th" in chip_sec and "v_min" not in chip_sec:
        chip_defaults["v_min"] = None
    chip_vals = _numbers(chip_sec, "chip", _CHIP_KEYS, chip_defaults, errs)
    chip = None
    if len(chip_vals) == len(_CHIP_KEYS):
        problems = chip_param_problems(**chip_vals)
        errs.extend(f"chip: {m}" for m in problems)
        if not problems:
            chip = ChipParams(**chip_vals)

    ref_sec = _section(raw, "reference", _REF_KEYS, errs)
    ref_vals = _numbers(
        ref_sec, "reference", _REF_KEYS, {k: getattr(TABLE1_REFERENCE, k) for k in _REF_KEYS}, errs
    )
    ref = None
    if len(ref_vals) == len(_REF_KEYS):
        for k, v in ref_vals.items():
            if not v > 0:
                errs.append(f"reference.{k}: must be > 0 (got {v!r})")
        if all(v > 0 for v in ref_vals.values()):
            ref = ReferencePoint(**ref_vals)
            if chip is not None:
                errs.extend(f"reference: {m}" for m in reference_problems(ref, chip))

    sp_sec = _section(raw, "speedup", ("kind", "f", "path"), errs)
    kind = sp_sec.get("kind", "amdahl")
    model: SpeedupModel | None = None
    sp_path = None
    if kind == "amdahl":
        if "path" in sp_sec:
            errs.append("speedup.path: only valid with kind 'table'")
        f = sp_sec.get("f", DEFAULT_FRACTION)
        if not _is_number(f):
            errs.append(f"speedup.f: expected a finite number (got {f!r})")
        else:
            model = Amdahl(float(f))
    elif kind == "table":
        if "f" in sp_sec:
            errs.append("speedup.f: only valid with kind 'amdahl'")
        p = sp_sec.get("path")
        if not isinstance(p, str):
            errs.append("speedup.path: required string for kind 'table'")
        else:
            resolved = (base_dir / p).resolve()
            if not resolved.is_file():
                errs.append(f"speedup.path: file not found: {resolved}")
            else:
                try:
                    model = load_speedup_csv(resolved)
                    sp_path = str(resolved)
                except DataError as exc:
                    errs.append(f"speedup.path: {exc}")
    else:
        errs.append(f"speedup.kind: expected 'amdahl' or 'table' (got {kind!r})")
    if model is not None:
        rep = validate_model(model)
        errs.extend(f"speedup: {m}" for m in rep.violations)

    targets = _number_list(raw.get("targets", list(DEFAULT_TARGETS)), "targets", errs)
    for i, t in enumerate(targets):
        if not t > 0:
            errs.append(f"targets[{i}]: t_r must be > 0 (got {t!r})")

    pr = raw.get("p_range", list(DEFAULT_P_RANGE))
    p_range = None
    if (
        not isinstance(pr, list)
        or len(pr) != 2
        or not all(isinstance(x, int) and not isinstance(x, bool) for x in pr)
    ):
        errs.append(f"p_range: expected [start, stop] integers (got {pr!r})")
    elif not 1 <= pr[0] <= pr[1]:
        errs.append(f"p_range: need 1 <= start <= stop (got {pr!r})")
    else:
        p_range = (pr[0], pr[1])
        if model is not None:
            p_range = clip_p_range(model, p_range)
            if p_range[1] < p_range[0]:
                errs.append(f"p_range: {pr!r} does not overlap the speedup table")

    val_sec = _section(raw, "validate", ("fractions", "targets"), errs)
    fr = _number_list(val_sec.get("fractions", list(STANDARD_FRACTIONS)), "validate.fractions", errs)
    for i, x in enumerate(fr):
        if not 0 <= x <= 1:
            errs.append(f"validate.fractions[{i}]: must be in [0, 1] (got {x!r})")
    vt = _number_list(val_sec.get("targets", list(STANDARD_TARGETS)), "validate.targets", errs)
    for i, x in enumerate(vt):
        if not x > 0:
            errs.append(f"validate.targets[{i}]: must be > 0 (got {x!r})")

    out_sec = _section(raw, "output", ("dir", "formats"), errs)
    out_dir = out_sec.get("dir", ".")
    if not isinstance(out_dir, str):
        errs.append("output.dir: expected a string")
        out_dir = "."
    formats = out_sec.get("formats", list(OutputSpec().formats))
    if not isinstance(formats, list) or any(x not in OUTPUT_FORMATS for x in formats):
        errs.append(f"output.formats: expected a list drawn from {list(OUTPUT_FORMATS)} (got {formats!r})")
        formats = []

    if errs:
        raise ConfigError("invalid configuration:", errs)
    return RunConfig(
        chip=chip,
        reference=ref,
        speedup=model,
        speedup_path=sp_path,
        targets=targets,
        p_range=p_range,
        validate=ValidationGrid(fr, vt),
        output=OutputSpec(str((base_dir / out_dir).resolve()), tuple(formats)),
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not text.strip():
        raw: Any = {}
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}:{exc.lineno}:{exc.colno}: parse error: {exc.msg}"
            ) from None
    return config_from_dict(raw, path.parent)


def config_to_dict(cfg: RunConfig) -> dict[str, Any]:
    c = cfg.chip
    if isinstance(cfg.speedup, Amdahl):
        sp: dict[str, Any] = {"kind": "amdahl", "f": cfg.speedup.f}
    else:
        sp = {"kind": "table", "path": cfg.speedup_path}
    return {
        "chip": {k: getattr(c, k) for k in _CHIP_KEYS},
        "reference": {k: getattr(cfg.reference, k) for k in _REF_KEYS},
        "speedup": sp,
        "targets": list(cfg.targets),
        "p_range": list(cfg.p_range),
        "validate": {"fractions": list(cfg.validate.fractions), "targets": list(cfg.validate.targets)},
        "output": {"dir": cfg.output.dir, "formats": list(cfg.output.formats)},
    }


def save_config(cfg: RunConfig, path: str | Path) -> Path:
    path = Path(path)
    # json writes floats with repr(), which round-trips exactly
    path.write_text(json.dumps(config_to_dict(cfg), indent=2) + "\n")
    return path
