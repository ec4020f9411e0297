"""Command-line entry point.

    ntv-energy <command> --config <path> [--out <dir>] [--svg] [--samples <csv>]

Exit codes: 0 ok, 2 config, 3 no feasible operating point, 4 data, 5 internal.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import report
from .calibration import fit_power, fit_vf, load_power_samples, load_vf_samples
from .config import RunConfig, load_config
from .errors import (
    EXIT_INFEASIBLE,
    EXIT_INTERNAL,
    EXIT_OK,
    ConfigError,
    DataError,
    exit_code_for,
)
from .model import TABLE1_PARAMS, TABLE1_REFERENCE, TargetSpec, explain_params
from .oracle import AccountingMode, Workload, simulate
from .planner import OperatingPlan, frontier, optimal_point, sweep
from .speedup import Amdahl

log = logging.getLogger("ntv_energy")

COMMANDS = ("sweep", "optimize", "frontier", "calibrate-vf", "calibrate-power", "validate")
VALIDATE_REL_TOL = 1e-9


def _tag(x: float) -> str:
    return format(x, "g")


def _out_dir(cfg: RunConfig, args: argparse.Namespace) -> Path:
    d = Path(args.out) if args.out else Path(cfg.output.dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _want_svg(cfg: RunConfig, args: argparse.Namespace) -> bool:
    return args.svg or "svg" in cfg.output.formats


def _models(cfg: RunConfig, args: argparse.Namespace) -> list[tuple[str, object]]:
    if args.fractions:
        return [(f"f{_tag(f)}_", Amdahl(f)) for f in args.fractions]
    return [("", cfg.speedup)]


def _emit_svgs(plans: list[OperatingPlan], labels: list[str], stem: Path, title: str) -> None:
    if not any(p.feasible_rows for p in plans):
        log.warning("no feasible rows; skipping %s.*.svg", stem.name)
        return
    for axis in ("energy", "voltage"):
        path = report.emit_svg(plans, axis, stem.with_name(f"{stem.name}_{axis}.svg"), labels, title)
        print(f"wrote {path}")


def cmd_sweep(cfg: RunConfig, args: argparse.Namespace) -> int:
    out = _out_dir(cfg, args)
    models = _models(cfg, args)
    any_feasible = False
    for t_r in cfg.targets:
        target = TargetSpec(t_r)
        plans = []
        for prefix, model in models:
            plan = sweep(cfg.chip, cfg.reference, model, target, cfg.p_range)
            plans.append(plan)
            any_feasible |= plan.optimal_p is not None
            path = report.write_plan_csv(plan, out / f"sweep_{prefix}tr{_tag(t_r)}.csv")
            print(f"wrote {path}")
        if _want_svg(cfg, args):
            labels = [pl.model_summary for pl in plans]
            _emit_svgs(plans, labels, out / f"sweep_tr{_tag(t_r)}", f"t_r = {_tag(t_r)}")
    return EXIT_OK if any_feasible else EXIT_INFEASIBLE


def cmd_frontier(cfg: RunConfig, args: argparse.Namespace) -> int:
    out = _out_dir(cfg, args)
    entries = frontier(cfg.chip, cfg.reference, cfg.speedup, list(cfg.targets), cfg.p_range)
    plans, labels, summary = [], [], []
    for entry in entries:
        if entry.plan is None:
            log.error("target %s failed: %s", entry.target, entry.error)
            summary.append({"t_r": getattr(entry.target, "t_r", entry.target), "error": str(entry.error)})
            continue
        t_r = entry.plan.target.t_r
        path = report.write_plan_csv(entry.plan, out / f"frontier_tr{_tag(t_r)}.csv")
        print(f"wrote {path}")
        plans.append(entry.plan)
        labels.append(f"t_r={_tag(t_r)}")
        summary.append(report.plan_report(entry.plan))
    report.dump_json(summary, out / "frontier_report.json")
    if _want_svg(cfg, args) and plans:
        _emit_svgs(plans, labels, out / "frontier", cfg.speedup.describe())
    if any(e.error is not None for e in entries):
        return exit_code_for(next(e.error for e in entries if e.error is not None))
    return EXIT_OK if any(p.optimal_p is not None for p in plans) else EXIT_INFEASIBLE


def cmd_optimize(cfg: RunConfig, args: argparse.Namespace) -> int:
    out = _out_dir(cfg, args)
    status = EXIT_OK
    for t_r in cfg.targets:
        plan = sweep(cfg.chip, cfg.reference, cfg.speedup, TargetSpec(t_r), cfg.p_range)
        rep = report.plan_report(plan)
        path = report.dump_json(rep, out / f"optimize_tr{_tag(t_r)}.json")
        best = optimal_point(plan)
        if best is None:
            print(f"t_r={_tag(t_r)}: no feasible core count")
            status = EXIT_INFEASIBLE
        else:
            print(
                f"t_r={_tag(t_r)}: optimal p={best.p} f_p={best.f_p:.6g} Hz "
                f"v_p={best.v_p:.6g} V E={best.e_j:.6g} J"
            )
        print(f"wrote {path}")
    return status


def cmd_validate(cfg: RunConfig, args: argparse.Namespace) -> int:
    """Compare every feasible closed-form energy against the trace oracle."""
    out = _out_dir(cfg, args)
    lines = ["f,t_r,p,e_model_j,e_oracle_j,rel_err,status"]
    worst = 0.0
    failed = checked = 0
    for frac in cfg.validate.fractions:
        model = Amdahl(frac)
        w = Workload(cfg.reference.w_cycles, frac)
        for t_r in cfg.validate.targets:
            plan = sweep(cfg.chip, cfg.reference, model, TargetSpec(t_r), cfg.p_range)
            for row in plan.feasible_rows:
                sim = simulate(w, row.p, row.f_p, row.v_p, cfg.chip, AccountingMode.ALL_ON)
                rel = abs(sim.energy_j - row.e_j) / abs(row.e_j)
                ok = rel <= VALIDATE_REL_TOL
                worst = max(worst, rel)
                checked += 1
                failed += not ok
                lines.append(
                    f"{_tag(frac)},{_tag(t_r)},{row.p},{report.fmt(row.e_j)},"
                    f"{report.fmt(sim.energy_j)},{rel:.3e},{'pass' if ok else 'FAIL'}"
                )
    path = out / "validate.csv"
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")
    print(f"{checked} points checked, {failed} failed, worst relative error {worst:.3e}")
    if failed:
        raise DataError(f"{failed} oracle mismatches above {VALIDATE_REL_TOL:g}")
    return EXIT_OK


def _calibration_output(fit, out: Path, name: str) -> int:
    rep = {
        "constants": fit.constants,
        "rms_residual": fit.rms_residual,
        "relative_rms": fit.relative_rms,
        "sample_count": fit.sample_count,
        "warnings": list(fit.warnings),
    }
    path = report.dump_json(rep, out / name)
    for k, v in fit.constants.items():
        print(f"{k} = {report.fmt(v)}")
    print(f"rms_residual = {fit.rms_residual:.6g} (relative {fit.relative_rms:.3e})")
    for w in fit.warnings:
        print(f"warning: {w}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_calibrate_vf(cfg: RunConfig, args: argparse.Namespace) -> int:
    if not args.samples:
        raise ConfigError("calibrate-vf requires --samples <csv with v,f_max>")
    fit = fit_vf(load_vf_samples(args.samples), cfg.chip.h)
    return _calibration_output(fit, _out_dir(cfg, args), "calibrate_vf.json")


def cmd_calibrate_power(cfg: RunConfig, args: argparse.Namespace) -> int:
    if not args.samples:
        raise ConfigError("calibrate-power requires --samples <csv with v,f,p_w>")
    fit = fit_power(load_power_samples(args.samples))
    return _calibration_output(fit, _out_dir(cfg, args), "calibrate_power.json")


_DISPATCH = {
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "frontier": cmd_frontier,
    "validate": cmd_validate,
    "calibrate-vf": cmd_calibrate_vf,
    "calibrate-power": cmd_calibrate_power,
}


def _fraction_list(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals or any(not 0 <= v <= 1 for v in vals):
        raise argparse.ArgumentTypeError("fractions must lie in [0, 1]")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ntv-energy",
        description="Voltage, frequency and energy planning for parallel workloads.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--config", help="JSON run configuration (omit for built-in defaults)")
    parser.add_argument("--out", help="output directory (overrides output.dir)")
    parser.add_argument("--svg", action="store_true", help="also write SVG curve plots")
    parser.add_argument("--samples", help="calibration CSV for calibrate-* commands")
    parser.add_argument(
        "--fractions",
        type=_fraction_list,
        help="sweep: comma-separated Amdahl fractions plotted together (overrides config speedup)",
    )
    parser.add_argument(
        "--explain-params", action="store_true", help="print parameters, units and unit notes"
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.explain_params:
            print(explain_params(cfg.chip, cfg.reference))
            if args.command is None:
                return EXIT_OK
        if args.command is None:
            parser.print_usage(sys.stderr)
            return ConfigError.exit_code
        return _DISPATCH[args.command](cfg, args)
    except Exception as exc:  # every failure maps to a category code
        code = exit_code_for(exc)
        if code == EXIT_INTERNAL:
            log.exception("internal error")
        else:
            print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
