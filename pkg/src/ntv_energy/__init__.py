"""Voltage, frequency and energy planning for parallel workloads on CMOS multicores."""

from .calibration import CalibrationFit, PowerSample, VFSample, fit_power, fit_vf
from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    DataError,
    DegenerateDataError,
    DomainError,
    InfeasibleError,
    InsufficientDataError,
    InvalidParamsError,
    NTVError,
    OutOfRangeError,
)
from .model import (
    TABLE1_PARAMS,
    TABLE1_REFERENCE,
    ChipParams,
    Feasibility,
    PlanRow,
    PowerBreakdown,
    ReferencePoint,
    TargetSpec,
    core_power,
    max_frequency,
    min_voltage_for_frequency,
    plan_row,
    required_frequency,
)
from .oracle import AccountingMode, SimResult, Workload, measured_speedup, simulate
from .planner import OperatingPlan, frontier, optimal_point, sweep
from .speedup import Amdahl, SpeedupTable, speedup_at, validate_model

__version__ = "0.1.0"
