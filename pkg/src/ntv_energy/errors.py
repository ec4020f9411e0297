"""Exception hierarchy.

Every error carries the process exit code the CLI maps it to, so the
command layer never has to guess a category.
"""

from __future__ import annotations


class NTVError(Exception):
    """Base class for all package errors."""

    exit_code = 5


class ConfigError(NTVError):
    """Malformed or invalid run configuration."""

    exit_code = 2

    def __init__(self, message: str, violations: list[str] | None = None):
        self.violations = list(violations or [])
        if self.violations:
            message = message + "\n" + "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(message)


class InfeasiblePlanError(NTVError):
    """No core count can meet the performance target."""

    exit_code = 3


class DataError(NTVError):
    """Input data or arguments outside a model's domain."""

    exit_code = 4


class DomainError(DataError, ValueError):
    """Argument outside the domain of a model function (e.g. V below V_th)."""


class InvalidParamsError(DataError, ValueError):
    """Chip parameters violate their invariants."""


class InfeasibleError(DataError, ValueError):
    """Requested frequency exceeds what the chip reaches at v_max."""


class OutOfRangeError(DataError, ValueError):
    """Speedup table queried outside its measured core-count range."""


class InsufficientDataError(DataError, ValueError):
    """Too few calibration samples."""


class DegenerateDataError(DataError, ValueError):
    """Calibration samples cannot identify the model constants."""


EXIT_OK = 0
EXIT_CONFIG = ConfigError.exit_code
EXIT_INFEASIBLE = InfeasiblePlanError.exit_code
EXIT_DATA = DataError.exit_code
EXIT_INTERNAL = NTVError.exit_code


def exit_code_for(exc: BaseException) -> int:
    """Map any exception to its category exit code (internal if unknown)."""
    if isinstance(exc, NTVError):
        return exc.exit_code
    return EXIT_INTERNAL
