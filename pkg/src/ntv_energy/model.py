"""CMOS power, voltage/frequency relation and per-core-count energy.

All quantities are SI base units: volts, hertz, seconds, watts, amperes,
joules.  Every function here is pure and every type is frozen.

The chain for one core count ``p`` is::

    f_p = f_s / (s_p * t_r)                      required per-core frequency
    v_p = min V such that max_frequency(V) >= f_p
    P   = dyn_const * v_p**2 * f_p + i_leak * v_p
    E   = p * P * t_p,   t_p = w_cycles / (s_p * f_p) = t_r * t_s
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, InfeasibleError, InvalidParamsError

# Printed value is 4.02e-9; only 4.02e9 reproduces F_s = 3.2 GHz at V_s = 1.2 V.
K2_UNIT_NOTE = (
    "k2 is stored as 4.02e9 (hertz-consistent: F in Hz when V is in volts). "
    "The source parameter table prints 4.02e-9, which would give "
    "max_frequency(1.2 V) ~ 3.2e-9 Hz and contradict the same table's "
    "reference pair F_s = 3.2 GHz at V_s = 1.2 V; the sign of the exponent "
    "is taken to be a typo."
)

BISECTION_TOL_V = 1e-9
BISECTION_MAX_ITER = 200
_BRACKET_EPS_V = 1e-12


def _validation_messages(
    dyn_const: float,
    i_leak: float,
    k2: float,
    v_th: float,
    h: float,
    v_max: float,
    v_min: float,
) -> list[str]:
    msgs = []
    if not dyn_const > 0:
        msgs.append(f"dyn_const must be > 0 (got {dyn_const!r})")
    if not i_leak >= 0:
        msgs.append(f"i_leak must be >= 0 (got {i_leak!r})")
    if not k2 > 0:
        msgs.append(f"k2 must be > 0 (got {k2!r})")
    if not v_th > 0:
        msgs.append(f"v_th must be > 0 (got {v_th!r})")
    if not h >= 1:
        msgs.append(f"h must be >= 1 (got {h!r})")
    if not (v_th < v_min < v_max):
        msgs.append(
            f"v_th < v_min < v_max violated (v_th={v_th!r}, v_min={v_min!r}, v_max={v_max!r})"
        )
    return msgs


@dataclass(frozen=True)
class ChipParams:
    """Model constants of one processing core.

    ``dyn_const`` is the lumped switching constant (activity factor times
    capacitance times proportionality constant), W / (V^2 Hz).  ``v_min``
    defaults to ``v_th + 0.01`` when omitted.
    """

    dyn_const: float
    i_leak: float
    k2: float
    v_th: float
    h: float = 1.5
    v_max: float = 1.2
    v_min: float | None = None

    def __post_init__(self):
        if self.v_min is None:
            object.__setattr__(self, "v_min", self.v_th + 0.01)
        msgs = self.problems()
        if msgs:
            raise InvalidParamsError("; ".join(msgs))

    def problems(self) -> list[str]:
        return _validation_messages(
            self.dyn_const, self.i_leak, self.k2, self.v_th, self.h, self.v_max, self.v_min
        )

    @property
    def f_cap(self) -> float:
        """Highest frequency reachable at ``v_max``."""
        return max_frequency(self.v_max, self)


def chip_param_problems(**fields: float) -> list[str]:
    """Invariant violations for raw chip fields, without raising."""
    v_min = fields.get("v_min")
    if v_min is None:
        v_min = fields["v_th"] + 0.01
    return _validation_messages(
        fields["dyn_const"],
        fields["i_leak"],
        fields["k2"],
        fields["v_th"],
        fields.get("h", 1.5),
        fields.get("v_max", 1.2),
        v_min,
    )


@dataclass(frozen=True)
class ReferencePoint:
    """Single-core reference run: frequency, voltage and execution time.

    ``w_cycles`` is derived (``f_s * t_s``); time at any other frequency is
    ``w_cycles / F``.
    """

    f_s: float
    v_s: float
    t_s: float
    w_cycles: float = field(init=False)

    def __post_init__(self):
        if not self.f_s > 0:
            raise DomainError(f"f_s must be > 0 (got {self.f_s!r})")
        if not self.t_s > 0:
            raise DomainError(f"t_s must be > 0 (got {self.t_s!r})")
        if not self.v_s > 0:
            raise DomainError(f"v_s must be > 0 (got {self.v_s!r})")
        object.__setattr__(self, "w_cycles", self.f_s * self.t_s)

    def time_at(self, f: float) -> float:
        return self.w_cycles / f


def reference_problems(ref: ReferencePoint, params: ChipParams) -> list[str]:
    """Check that the reference pair is reachable under the V/F relation (1% slack)."""
    if ref.v_s < params.v_th:
        return [f"v_s={ref.v_s!r} is below v_th={params.v_th!r}"]
    f_reach = max_frequency(ref.v_s, params)
    if ref.f_s > 1.01 * f_reach:
        return [
            f"f_s={ref.f_s!r} Hz exceeds max_frequency(v_s)={f_reach!r} Hz by more than 1%"
            " (check the units of k2)"
        ]
    return []


@dataclass(frozen=True)
class TargetSpec:
    """Target parallel time as a fraction of the reference time (0.25 = 4x faster)."""

    t_r: float

    def __post_init__(self):
        if not (self.t_r > 0 and math.isfinite(self.t_r)):
            raise DomainError(f"t_r must be a finite value > 0 (got {self.t_r!r})")


@dataclass(frozen=True)
class PowerBreakdown:
    dynamic_w: float
    leakage_w: float
    total_w: float


class Feasibility(str, Enum):
    OK = "ok"
    ABOVE_CAP = "frequency-exceeds-vmax-cap"
    BELOW_FLOOR = "below-vmin-floor"


@dataclass(frozen=True)
class PlanRow:
    """One core count's operating point.

    Rows whose required frequency exceeds the chip cap carry NaN voltage,
    power and energy; below-floor rows keep their computed values.
    """

    p: int
    s_p: float
    f_p: float
    v_p: float
    power: PowerBreakdown
    t_p: float
    e_j: float
    reason: Feasibility = Feasibility.OK

    @property
    def feasible(self) -> bool:
        return self.reason is Feasibility.OK


TABLE1_PARAMS = ChipParams(
    dyn_const=1.06e-8,
    i_leak=7.97e-2,
    k2=4.02e9,
    v_th=0.23,
    h=1.5,
    v_max=1.2,
)

# t_s is not part of the parameter table; 1 s makes energies read as watts.
TABLE1_REFERENCE = ReferencePoint(f_s=3.2e9, v_s=1.2, t_s=1.0)


def max_frequency(v: float, params: ChipParams) -> float:
    """Maximum clock frequency sustainable at supply voltage ``v``.

    ``k2 * (v - v_th)**h / v``.  Raises DomainError for ``v < v_th``.
    """
    if params.h < 1:
        raise InvalidParamsError(f"h must be >= 1 (got {params.h!r})")
    if not v >= params.v_th:
        raise DomainError(f"voltage {v!r} V is below v_th={params.v_th!r} V")
    return params.k2 * (v - params.v_th) ** params.h / v


def min_voltage_for_frequency(
    f: float,
    params: ChipParams,
    *,
    tol: float = BISECTION_TOL_V,
    max_iter: int = BISECTION_MAX_ITER,
) -> float:
    """Smallest supply voltage at which ``f`` is reachable.

    Bisection on ``[v_th + 1e-12, v_max]``.  The bracket shrinks identically
    for every ``f``, so the result is monotone in ``f`` even at the tolerance
    scale.
    """
    if not f >= 0:
        raise DomainError(f"frequency must be >= 0 (got {f!r})")
    if f == 0:
        return params.v_th
    cap = max_frequency(params.v_max, params)
    if f > cap:
        raise InfeasibleError(
            f"frequency {f!r} Hz exceeds max_frequency(v_max={params.v_max!r})={cap!r} Hz"
        )
    lo = params.v_th + _BRACKET_EPS_V
    hi = params.v_max
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if max_frequency(mid, params) >= f:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def core_power(v: float, f: float, params: ChipParams) -> PowerBreakdown:
    if not (v >= 0 and f >= 0):
        raise DomainError(f"voltage and frequency must be >= 0 (got v={v!r}, f={f!r})")
    dyn = params.dyn_const * v * v * f
    leak = params.i_leak * v
    return PowerBreakdown(dynamic_w=dyn, leakage_w=leak, total_w=dyn + leak)


def required_frequency(s_p: float, target: TargetSpec, ref: ReferencePoint) -> float:
    """Per-core frequency at which ``p`` cores finish in ``t_r * t_s``."""
    if not s_p >= 1:
        raise DomainError(f"speedup must be >= 1 (got {s_p!r})")
    return ref.f_s / (s_p * target.t_r)


_NAN_POWER = PowerBreakdown(math.nan, math.nan, math.nan)


def plan_row(
    p: int,
    s_p: float,
    target: TargetSpec,
    ref: ReferencePoint,
    params: ChipParams,
) -> PlanRow:
    """Operating point for ``p`` cores; infeasibility is reported, not raised."""
    if p < 1:
        raise DomainError(f"core count must be >= 1 (got {p!r})")
    f_p = required_frequency(s_p, target, ref)
    t_p = ref.w_cycles / (s_p * f_p)
    if f_p > params.f_cap:
        return PlanRow(p, s_p, f_p, math.nan, _NAN_POWER, t_p, math.nan, Feasibility.ABOVE_CAP)
    v_p = min_voltage_for_frequency(f_p, params)
    power = core_power(v_p, f_p, params)
    e_j = p * power.total_w * t_p
    reason = Feasibility.BELOW_FLOOR if v_p < params.v_min else Feasibility.OK
    return PlanRow(p, s_p, f_p, v_p, power, t_p, e_j, reason)


def explain_params(params: ChipParams = TABLE1_PARAMS, ref: ReferencePoint = TABLE1_REFERENCE) -> str:
    """Human-readable parameter table with units and the k2 unit note."""
    lines = [
        "Chip parameters (SI units)",
        f"  dyn_const  {params.dyn_const:<12.6g} W/(V^2*Hz)  lumped switching constant",
        f"  i_leak     {params.i_leak:<12.6g} A           leakage current per core",
        f"  k2         {params.k2:<12.6g} Hz*V^(1-h)  V/F proportionality constant",
        f"  v_th       {params.v_th:<12.6g} V           threshold voltage",
        f"  h          {params.h:<12.6g} -           V/F exponent",
        f"  v_min      {params.v_min:<12.6g} V           model-validity floor",
        f"  v_max      {params.v_max:<12.6g} V           supply ceiling",
        "Reference point",
        f"  f_s        {ref.f_s:<12.6g} Hz",
        f"  v_s        {ref.v_s:<12.6g} V",
        f"  t_s        {ref.t_s:<12.6g} s",
        f"  max_frequency(v_s) = {max_frequency(ref.v_s, params):.6g} Hz",
        "",
        "Note: " + K2_UNIT_NOTE,
    ]
    return "\n".join(lines)
