"""Plan serialization: CSV rows, JSON reports and SVG line charts.

Floats are written with 17 significant digits so every value re-parses
to the same double.  SVG output depends only on its inputs (no
timestamps, no random ids), so identical calls give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Sequence

from .errors import DataError
from .model import Feasibility, PlanRow, PowerBreakdown
from .planner import OperatingPlan

CSV_SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "p",
    "s_p",
    "f_p_hz",
    "v_p_v",
    "p_dyn_w",
    "p_leak_w",
    "p_total_w",
    "t_p_s",
    "e_j",
    "feasible",
    "reason",
)


def fmt(x: float) -> str:
    return format(x, ".17g")


def row_to_record(row: PlanRow) -> list[str]:
    return [
        str(row.p),
        fmt(row.s_p),
        fmt(row.f_p),
        fmt(row.v_p),
        fmt(row.power.dynamic_w),
        fmt(row.power.leakage_w),
        fmt(row.power.total_w),
        fmt(row.t_p),
        fmt(row.e_j),
        "true" if row.feasible else "false",
        row.reason.value,
    ]


def record_to_row(rec: dict[str, str]) -> PlanRow:
    feasible = rec["feasible"] == "true"
    reason = Feasibility(rec["reason"])
    if feasible != (reason is Feasibility.OK):
        raise DataError(f"feasible={rec['feasible']} contradicts reason={rec['reason']}")
    return PlanRow(
        p=int(rec["p"]),
        s_p=float(rec["s_p"]),
        f_p=float(rec["f_p_hz"]),
        v_p=float(rec["v_p_v"]),
        power=PowerBreakdown(
            float(rec["p_dyn_w"]), float(rec["p_leak_w"]), float(rec["p_total_w"])
        ),
        t_p=float(rec["t_p_s"]),
        e_j=float(rec["e_j"]),
        reason=reason,
    )


def plan_csv(plan: OperatingPlan) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in plan.rows:
        writer.writerow(row_to_record(row))
    return buf.getvalue()


def write_plan_csv(plan: OperatingPlan, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(plan_csv(plan))
    return path


def read_plan_csv(path: str | Path) -> list[PlanRow]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise DataError(f"{path}: unexpected header {reader.fieldnames}")
        return [record_to_row(rec) for rec in reader]


def row_to_dict(row: PlanRow) -> dict[str, Any]:
    def num(x: float) -> float | None:
        # JSON has no NaN
        return None if math.isnan(x) else float(fmt(x))

    return {
        "p": row.p,
        "s_p": num(row.s_p),
        "f_p_hz": num(row.f_p),
        "v_p_v": num(row.v_p),
        "p_dyn_w": num(row.power.dynamic_w),
        "p_leak_w": num(row.power.leakage_w),
        "p_total_w": num(row.power.total_w),
        "t_p_s": num(row.t_p),
        "e_j": num(row.e_j),
        "feasible": row.feasible,
        "reason": row.reason.value,
    }


def plan_report(plan: OperatingPlan) -> dict[str, Any]:
    """Structured summary of a plan: target, model, optimum."""
    best = None if plan.optimal_p is None else plan.row(plan.optimal_p)
    return {
        "schema_version": CSV_SCHEMA_VERSION,
        "t_r": plan.target.t_r,
        "model": plan.model_summary,
        "p_range": [plan.rows[0].p, plan.rows[-1].p] if plan.rows else None,
        "feasible_rows": len(plan.feasible_rows),
        "optimal_p": plan.optimal_p,
        "optimal": None if best is None else row_to_dict(best),
    }


def dump_json(obj: Any, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


# --- SVG -------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
_W, _H = 720, 480
_ML, _MR, _MT, _MB = 80, 170, 40, 60


def _c(x: float) -> str:
    return f"{x:.4f}"


def _nice_linear_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    span = hi - lo
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * span:
        ticks.append(round(t, 12))
        t += step
    return ticks


def render_svg(
    plans: Sequence[OperatingPlan],
    axis: str,
    labels: Sequence[str] | None = None,
    title: str | None = None,
) -> str:
    """Line chart of energy (log axis) or voltage (linear axis) against p.

    Infeasible rows are left out of each polyline; plans with no feasible
    row get a legend entry marked ``(infeasible)`` and no line.
    """
    if axis not in ("energy", "voltage"):
        raise ValueError(f"axis must be 'energy' or 'voltage' (got {axis!r})")
    if labels is None:
        labels = [f"{pl.model_summary}, t_r={pl.target.t_r:g}" for pl in plans]
    series = []
    for pl in plans:
        pts = [(r.p, r.e_j if axis == "energy" else r.v_p) for r in pl.rows if r.feasible]
        series.append(pts)
    all_pts = [pt for s in series for pt in s]
    if not all_pts:
        raise DataError("no feasible rows to plot")

    p_lo = min(pl.rows[0].p for pl in plans if pl.rows)
    p_hi = max(pl.rows[-1].p for pl in plans if pl.rows)
    if p_hi == p_lo:
        p_hi = p_lo + 1
    ys = [y for _, y in all_pts]
    log = axis == "energy"
    if log:
        y_lo = 10 ** math.floor(math.log10(min(ys)))
        y_hi = 10 ** math.ceil(math.log10(max(ys)))
        if y_hi == y_lo:
            y_hi = y_lo * 10
        tf = math.log10
    else:
        y_lo, y_hi = 0.0, max(ys) * 1.05
        tf = float
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def sx(p: float) -> float:
        return _ML + (p - p_lo) / (p_hi - p_lo) * pw

    def sy(y: float) -> float:
        return _MT + ph - (tf(y) - tf(y_lo)) / (tf(y_hi) - tf(y_lo)) * ph

    ylabel = "Energy E [J] (log)" if log else "Supply voltage V [V]"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{_W / 2:.1f}" y="22" text-anchor="middle" font-size="14">{_esc(title)}</text>')
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="#333333"/>'
    )

    # y ticks
    if log:
        ticks = [10.0**k for k in range(round(math.log10(y_lo)), round(math.log10(y_hi)) + 1)]
    else:
        ticks = _nice_linear_ticks(y_lo, y_hi)
    for t in ticks:
        y = sy(t)
        out.append(f'<line x1="{_ML - 5}" y1="{_c(y)}" x2="{_ML + pw}" y2="{_c(y)}" stroke="#dddddd"/>')
        out.append(
            f'<text x="{_ML - 8}" y="{_c(y + 4)}" text-anchor="end">{t:g}</text>'
        )
    # x ticks
    for t in _nice_linear_ticks(p_lo, p_hi, 8):
        if t != int(t):
            continue
        x = sx(t)
        out.append(f'<line x1="{_c(x)}" y1="{_MT + ph}" x2="{_c(x)}" y2="{_MT + ph + 5}" stroke="#333333"/>')
        out.append(f'<text x="{_c(x)}" y="{_MT + ph + 20}" text-anchor="middle">{int(t)}</text>')
    out.append(
        f'<text x="{_ML + pw / 2:.1f}" y="{_H - 15}" text-anchor="middle">Number of cores p</text>'
    )
    out.append(
        f'<text x="18" y="{_MT + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MT + ph / 2:.1f})">{ylabel}</text>'
    )

    for i, (pts, label) in enumerate(zip(series, labels)):
        color = _PALETTE[i % len(_PALETTE)]
        ly = _MT + 10 + 18 * i
        lx = _ML + pw + 12
        if pts:
            coords = " ".join(f"{_c(sx(p))},{_c(sy(y))}" for p, y in pts)
            out.append(
                f'<polyline data-series="{i}" fill="none" stroke="{color}" '
                f'stroke-width="1.5" points="{coords}"/>'
            )
            text = label
        else:
            text = label + " (infeasible)"
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 18}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 24}" y="{ly + 4}">{_esc(text)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_svg(
    plans: Sequence[OperatingPlan],
    axis: str,
    path: str | Path,
    labels: Sequence[str] | None = None,
    title: str | None = None,
) -> Path:
    path = Path(path)
    path.write_text(render_svg(plans, axis, labels, title))
    return path
