"""Fit the power and V/F constants from measured samples.

``fit_power`` is an ordinary least-squares solve, since power is linear in
``dyn_const`` and ``i_leak``.  ``fit_vf`` uses a one-dimensional search over
``v_th``; for a fixed ``v_th`` the model is linear in ``k2``, so ``k2`` has
a closed form.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError, DegenerateDataError, InsufficientDataError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class VFSample:
    v: float
    f_max: float

    def __post_init__(self):
        if not (self.v > 0 and self.f_max >= 0):
            raise DataError(f"VF sample needs v > 0 and f_max >= 0 (got {self})")


@dataclass(frozen=True)
class PowerSample:
    v: float
    f: float
    p_w: float

    def __post_init__(self):
        if not (self.v >= 0 and self.f >= 0 and self.p_w >= 0):
            raise DataError(f"power sample fields must be >= 0 (got {self})")


@dataclass(frozen=True)
class CalibrationFit:
    """Fitted constants with residual diagnostics.

    ``rms_residual`` is in the units of the fitted observable (Hz for V/F
    fits, W for power fits); ``relative_rms`` divides it by the RMS of the
    observations.
    """

    constants: dict[str, float]
    rms_residual: float
    sample_count: int
    relative_rms: float
    warnings: tuple[str, ...] = field(default=())

    def __getitem__(self, name: str) -> float:
        return self.constants[name]


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(x * x)))


def _k2_and_sse(vth: float, v: np.ndarray, f: np.ndarray, h: float) -> tuple[float, float]:
    g = (v - vth) ** h / v
    gg = float(g @ g)
    if gg == 0.0:
        return 0.0, float(f @ f)
    k2 = float(f @ g) / gg
    r = f - k2 * g
    return k2, float(r @ r)


def _search_vth(
    v: np.ndarray, f: np.ndarray, h: float, grid: int, iterations: int
) -> tuple[float, float]:
    """Coarse grid over (0, min v), then golden-section on the best bracket.

    Returns the best ``(v_th, sse)`` evaluated; the best-so-far is kept, so
    more iterations never increase the residual.
    """
    upper = float(v.min())
    xs = [upper * (i + 1) / (grid + 1) for i in range(grid)]
    sses = [_k2_and_sse(x, v, f, h)[1] for x in xs]
    i = int(np.argmin(sses))
    best_x, best_s = xs[i], sses[i]
    a = xs[i - 1] if i > 0 else 0.0
    b = xs[i + 1] if i < grid - 1 else upper

    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = _k2_and_sse(c, v, f, h)[1]
    fd = _k2_and_sse(d, v, f, h)[1]
    for _ in range(iterations):
        for x, s in ((c, fc), (d, fd)):
            if s < best_s:
                best_x, best_s = x, s
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = _k2_and_sse(c, v, f, h)[1]
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = _k2_and_sse(d, v, f, h)[1]
    for x, s in ((c, fc), (d, fd)):
        if s < best_s:
            best_x, best_s = x, s
    return best_x, best_s


def fit_vf(
    samples: Sequence[VFSample],
    h: float = 1.5,
    *,
    grid: int = 64,
    iterations: int = 120,
) -> CalibrationFit:
    """Fit ``k2`` and ``v_th`` of ``f_max = k2 (v - v_th)^h / v`` with ``h`` fixed."""
    if len(samples) < 2:
        raise InsufficientDataError(f"need at least 2 V/F samples (got {len(samples)})")
    v = np.array([s.v for s in samples], dtype=float)
    f = np.array([s.f_max for s in samples], dtype=float)
    if np.unique(v).size < 2:
        raise DegenerateDataError("V/F samples need at least 2 distinct voltages")
    if not np.any(f > 0):
        raise DegenerateDataError("all measured frequencies are zero")

    vth, sse = _search_vth(v, f, h, grid, iterations)
    k2, _ = _k2_and_sse(vth, v, f, h)
    if not (k2 > 0 and vth > 0):
        raise DegenerateDataError(f"fit produced non-physical constants (k2={k2}, v_th={vth})")
    rms = math.sqrt(sse / len(samples))
    return CalibrationFit(
        constants={"k2": k2, "v_th": vth, "h": h},
        rms_residual=rms,
        sample_count=len(samples),
        relative_rms=rms / _rms(f),
    )


def fit_power(samples: Sequence[PowerSample]) -> CalibrationFit:
    """Least-squares fit of ``p_w = dyn_const * v^2 f + i_leak * v``.

    Negative coefficients are clamped to zero and flagged in ``warnings``.
    """
    if len(samples) < 2:
        raise InsufficientDataError(f"need at least 2 power samples (got {len(samples)})")
    v = np.array([s.v for s in samples], dtype=float)
    f = np.array([s.f for s in samples], dtype=float)
    y = np.array([s.p_w for s in samples], dtype=float)
    X = np.column_stack([v * v * f, v])
    # column scaling: v^2 f is ~1e9 times larger than v
    scale = np.linalg.norm(X, axis=0)
    if np.any(scale == 0) or np.linalg.matrix_rank(X / np.where(scale == 0, 1, scale)) < 2:
        raise DegenerateDataError(
            "power samples are underdetermined: regressors v^2*f and v are collinear"
        )
    beta, *_ = np.linalg.lstsq(X / scale, y, rcond=None)
    dyn, leak = (beta / scale).tolist()

    warnings = []
    if dyn < 0:
        warnings.append(f"dyn_const fitted negative ({dyn:.6g}); clamped to 0")
        dyn = 0.0
    if leak < 0:
        warnings.append(f"i_leak fitted negative ({leak:.6g}); clamped to 0")
        leak = 0.0
    resid = y - X @ np.array([dyn, leak])
    rms = _rms(resid)
    y_rms = _rms(y)
    return CalibrationFit(
        constants={"dyn_const": dyn, "i_leak": leak},
        rms_residual=rms,
        sample_count=len(samples),
        relative_rms=rms / y_rms if y_rms > 0 else 0.0,
        warnings=tuple(warnings),
    )


def _read_csv(path: str | Path, columns: list[str]) -> list[list[float]]:
    path = Path(path)
    out = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = [c.strip() for c in (reader.fieldnames or [])]
        if header != columns:
            raise DataError(f"{path}: expected header {','.join(columns)!r} (got {reader.fieldnames})")
        for lineno, rec in enumerate(reader, start=2):
            try:
                out.append([float(rec[c]) for c in columns])
            except (TypeError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: bad row {rec!r} ({exc})") from None
    return out


def load_vf_samples(path: str | Path) -> list[VFSample]:
    return [VFSample(v, fm) for v, fm in _read_csv(path, ["v", "f_max"])]


def load_power_samples(path: str | Path) -> list[PowerSample]:
    return [PowerSample(v, f, p) for v, f, p in _read_csv(path, ["v", "f", "p_w"])]
