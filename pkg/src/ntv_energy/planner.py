"""Sweeps over core counts, energy-optimal points and per-target frontiers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import DataError, NTVError
from .model import ChipParams, PlanRow, ReferencePoint, TargetSpec, plan_row
from .speedup import SpeedupModel, ensure_valid, speedup_at


@dataclass(frozen=True)
class OperatingPlan:
    """One energy/voltage curve over core counts plus its minimum."""

    target: TargetSpec
    model_summary: str
    rows: tuple[PlanRow, ...]
    optimal_p: int | None

    @property
    def feasible_rows(self) -> list[PlanRow]:
        return [r for r in self.rows if r.feasible]

    def row(self, p: int) -> PlanRow:
        for r in self.rows:
            if r.p == p:
                return r
        raise KeyError(p)

    @property
    def min_energy(self) -> float:
        """Minimum feasible energy, ``inf`` when nothing is feasible."""
        best = optimal_point(self)
        return math.inf if best is None else best.e_j


def clip_p_range(model: SpeedupModel, p_range: tuple[int, int]) -> tuple[int, int]:
    """Intersect ``p_range`` with the range the model is defined on."""
    lo, hi = p_range
    m_lo, m_hi = model.p_bounds
    lo = max(lo, m_lo)
    if m_hi is not None:
        hi = min(hi, m_hi)
    return lo, hi


def _argmin(rows: Iterable[PlanRow]) -> PlanRow | None:
    best = None
    for r in rows:
        if r.feasible and (best is None or r.e_j < best.e_j):
            best = r
    return best


def sweep(
    params: ChipParams,
    ref: ReferencePoint,
    model: SpeedupModel,
    target: TargetSpec,
    p_range: tuple[int, int],
) -> OperatingPlan:
    """Evaluate every integer core count in ``p_range`` (inclusive).

    Table models are not extrapolated: the range is truncated to the table's
    core counts first.
    """
    ensure_valid(model)
    if p_range[0] < 1:
        raise DataError(f"p_range must start at >= 1 (got {p_range!r})")
    lo, hi = clip_p_range(model, p_range)
    if hi < lo:
        raise DataError(f"empty core-count range {p_range!r} for {model.describe()}")
    rows = tuple(plan_row(p, speedup_at(model, p), target, ref, params) for p in range(lo, hi + 1))
    best = _argmin(sorted(rows, key=lambda r: r.p))
    return OperatingPlan(target, model.describe(), rows, None if best is None else best.p)


def optimal_point(plan: OperatingPlan) -> PlanRow | None:
    """Feasible row of minimum energy; ties go to the smaller core count."""
    return _argmin(sorted(plan.rows, key=lambda r: r.p))


class FrontierEntry(NamedTuple):
    target: TargetSpec | float
    plan: OperatingPlan | None
    error: Exception | None = None


def frontier(
    params: ChipParams,
    ref: ReferencePoint,
    model: SpeedupModel,
    targets: Sequence[TargetSpec | float],
    p_range: tuple[int, int],
) -> list[FrontierEntry]:
    """One sweep per target, in input order.

    A target whose sweep fails yields an entry with ``plan=None`` and the
    error attached; the rest of the batch still runs.
    """
    if not targets:
        raise DataError("frontier needs at least one target")
    out = []
    for t in targets:
        try:
            spec = t if isinstance(t, TargetSpec) else TargetSpec(float(t))
            out.append(FrontierEntry(spec, sweep(params, ref, model, spec, p_range)))
        except NTVError as exc:
            out.append(FrontierEntry(t, None, exc))
    return out
