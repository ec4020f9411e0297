"""Trace-driven execution and energy accounting, used as an independent check.

A workload is expanded into a per-core trace of busy intervals (a serial
phase on core 0, then a parallel phase split evenly over ``p`` cores).
Energy is integrated per core over the interval the core is powered:

* ``all-cores-on``: every allocated core is powered for the whole run,
  which is what the closed-form energy assumes;
* ``serial-phase-gated``: cores 1..p-1 are gated off during the serial
  phase.

Nothing here calls the planner; it only shares the per-core power function.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .model import ChipParams, core_power


class AccountingMode(str, Enum):
    ALL_ON = "all-cores-on"
    GATED = "serial-phase-gated"


@dataclass(frozen=True)
class Workload:
    total_cycles: float
    parallel_fraction: float

    def __post_init__(self):
        if not self.total_cycles > 0:
            raise DomainError(f"total_cycles must be > 0 (got {self.total_cycles!r})")
        if not 0 <= self.parallel_fraction <= 1:
            raise DomainError(
                f"parallel_fraction must be in [0, 1] (got {self.parallel_fraction!r})"
            )


@dataclass(frozen=True)
class TraceEvent:
    core: int
    phase: str
    start_s: float
    end_s: float
    cycles: float


@dataclass(frozen=True)
class SimResult:
    t_serial_phase: float
    t_parallel_phase: float
    t_total: float
    energy_j: float
    accounting_mode: AccountingMode
    per_core_energy_j: tuple[float, ...] = ()


def build_trace(w: Workload, p: int, f_p: float) -> list[TraceEvent]:
    """Busy intervals per core, in start-time order."""
    if p < 1:
        raise DomainError(f"core count must be >= 1 (got {p!r})")
    if not f_p > 0:
        raise DomainError(f"frequency must be > 0 (got {f_p!r})")
    serial_cycles = (1.0 - w.parallel_fraction) * w.total_cycles
    chunk = w.parallel_fraction * w.total_cycles / p
    t_serial = serial_cycles / f_p
    t_chunk = chunk / f_p
    events = []
    if serial_cycles > 0:
        events.append(TraceEvent(0, "serial", 0.0, t_serial, serial_cycles))
    if chunk > 0:
        for core in range(p):
            events.append(TraceEvent(core, "parallel", t_serial, t_serial + t_chunk, chunk))
    return events


def simulate(
    w: Workload,
    p: int,
    f_p: float,
    v_p: float,
    params: ChipParams,
    mode: AccountingMode | str = AccountingMode.ALL_ON,
) -> SimResult:
    mode = AccountingMode(mode)
    if not v_p >= params.v_th:
        raise DomainError(f"voltage {v_p!r} V is below v_th={params.v_th!r} V")
    events = build_trace(w, p, f_p)

    t_serial = sum(e.end_s - e.start_s for e in events if e.phase == "serial")
    par = [e for e in events if e.phase == "parallel"]
    t_parallel = max((e.end_s - e.start_s for e in par), default=0.0)
    t_total = t_serial + t_parallel

    watts = core_power(v_p, f_p, params).total_w
    per_core = []
    for core in range(p):
        if mode is AccountingMode.ALL_ON:
            powered = t_total
        else:
            # gated cores only wake for their parallel chunk
            powered = t_serial if core == 0 else 0.0
            powered += t_parallel
        per_core.append(watts * powered)
    return SimResult(
        t_serial_phase=t_serial,
        t_parallel_phase=t_parallel,
        t_total=t_total,
        energy_j=sum(per_core),
        accounting_mode=mode,
        per_core_energy_j=tuple(per_core),
    )


def measured_speedup(w: Workload, p: int, f_ref: float = 1.0e9) -> float:
    """Single-core over ``p``-core runtime at a common frequency."""
    t1 = _runtime(w, 1, f_ref)
    tp = _runtime(w, p, f_ref)
    return t1 / tp


def _runtime(w: Workload, p: int, f: float) -> float:
    events = build_trace(w, p, f)
    return max(e.end_s for e in events)
