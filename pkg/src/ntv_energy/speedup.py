"""Speedup models: Amdahl parallel fraction or a measured ``(p, s_p)`` table."""

from __future__ import annotations

import bisect
import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .errors import DataError, DomainError, OutOfRangeError


@dataclass(frozen=True)
class Amdahl:
    """Workload with parallel fraction ``f``; ``s_p = 1 / ((1 - f) + f / p)``."""

    f: float

    def describe(self) -> str:
        return f"amdahl(f={self.f:g})"

    @property
    def p_bounds(self) -> tuple[int, int | None]:
        return (1, None)


@dataclass(frozen=True)
class SpeedupTable:
    """Measured speedups, linearly interpolated between listed core counts.

    Construction does not validate; use :func:`validate_model` for a report
    or :func:`ensure_valid` to raise.
    """

    rows: tuple[tuple[int, float], ...]
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple((int(p), float(s)) for p, s in self.rows))

    def describe(self) -> str:
        src = f", source={self.source}" if self.source else ""
        return f"table({len(self.rows)} rows{src})"

    @property
    def p_bounds(self) -> tuple[int, int | None]:
        return (self.rows[0][0], self.rows[-1][0])


SpeedupModel = Union[Amdahl, SpeedupTable]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_model(model: SpeedupModel) -> ValidationReport:
    violations: list[str] = []
    warnings: list[str] = []
    if isinstance(model, Amdahl):
        if not 0 <= model.f <= 1:
            violations.append(f"parallel fraction f must be in [0, 1] (got {model.f!r})")
        return ValidationReport(tuple(violations))

    rows = model.rows
    if not rows:
        return ValidationReport(("table is empty",))
    ps = [p for p, _ in rows]
    if any(b <= a for a, b in zip(ps, ps[1:])):
        violations.append("rows not sorted by p (strictly increasing, no duplicates)")
    if any(p < 1 for p in ps):
        violations.append("core counts must be >= 1")
    one = [s for p, s in rows if p == 1]
    if not one:
        violations.append("table must contain p = 1")
    elif one[0] != 1.0:
        violations.append(f"s_1 must equal 1 (got {one[0]!r})")
    low = [p for p, s in rows if s < 1]
    if low:
        violations.append(f"s_p < 1 at p = {low}")
    if not violations:
        ss = [s for _, s in rows]
        if any(b < a for a, b in zip(ss, ss[1:])):
            warnings.append(
                "speedup is non-monotone in p; voltage need not decrease with core count"
            )
    return ValidationReport(tuple(violations), tuple(warnings))


def ensure_valid(model: SpeedupModel) -> None:
    report = validate_model(model)
    if not report.ok:
        raise DataError("invalid speedup model: " + "; ".join(report.violations))


def speedup_at(model: SpeedupModel, p: float) -> float:
    if p < 1:
        raise DomainError(f"core count must be >= 1 (got {p!r})")
    if isinstance(model, Amdahl):
        f = model.f
        # algebraically 1 / ((1 - f) + f / p); this form is exact at f = 0 and f = 1
        return p / ((1.0 - f) * p + f)

    ps = [q for q, _ in model.rows]
    if not ps or p < ps[0] or p > ps[-1]:
        raise OutOfRangeError(
            f"p={p!r} outside table range [{ps[0] if ps else '-'}, {ps[-1] if ps else '-'}]"
        )
    i = bisect.bisect_left(ps, p)
    if ps[i] == p:
        return model.rows[i][1]
    (p0, s0), (p1, s1) = model.rows[i - 1], model.rows[i]
    return s0 + (s1 - s0) * (p - p0) / (p1 - p0)


def load_speedup_csv(path: str | Path) -> SpeedupTable:
    """Read a ``p,s_p`` CSV.  The result is validated."""
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != ["p", "s_p"]:
            raise DataError(f"{path}: expected header 'p,s_p' (got {reader.fieldnames})")
        for lineno, rec in enumerate(reader, start=2):
            try:
                p_txt = rec["p"].strip()
                p = int(p_txt)
                rows.append((p, float(rec["s_p"])))
            except (TypeError, ValueError, AttributeError) as exc:
                raise DataError(f"{path}:{lineno}: bad row {rec!r} ({exc})") from None
    table = SpeedupTable(tuple(rows), source=str(path))
    ensure_valid(table)
    return table
