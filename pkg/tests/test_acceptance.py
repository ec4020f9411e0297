"""Exit criteria, one test per criterion, each at its pinned tolerance.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
lists one PASS/FAIL line per criterion.
"""

import json

import numpy as np
import pytest

from ntv_energy import (
    TABLE1_PARAMS as CHIP,
    TABLE1_REFERENCE as REF,
    AccountingMode,
    Amdahl,
    PowerSample,
    TargetSpec,
    VFSample,
    Workload,
    fit_power,
    fit_vf,
    max_frequency,
    min_voltage_for_frequency,
    simulate,
    sweep,
)
from ntv_energy.cli import main
from ntv_energy.report import emit_svg, read_plan_csv, write_plan_csv

from conftest import record
from test_report import rows_equal

FULL = (1, 64)
FRACTIONS = (0.5, 0.9, 0.99, 1.0)


def test_c1_reference_pair_self_consistent(capsys):
    f = max_frequency(1.2, CHIP)
    err = abs(f - 3.2e9) / 3.2e9
    assert main(["--explain-params"]) == 0
    text = capsys.readouterr().out
    has_note = "4.02e9" in text and "4.02e-9" in text
    ok = err <= 5e-3 and has_note and CHIP.k2 == 4.02e9
    record("C1 reference pair", ok, f"max_frequency(1.2 V)={f:.6g} Hz rel.err={err:.2e} (tol 5e-3), note={has_note}")
    assert ok


def test_c2_inversion_round_trip():
    rng = np.random.default_rng(20240601)
    vs = rng.uniform(CHIP.v_min, CHIP.v_max, 1000)
    worst = max(abs(min_voltage_for_frequency(max_frequency(v, CHIP), CHIP) - v) for v in vs)
    ok = worst <= 1e-6
    record("C2 inversion round-trip", ok, f"1000 voltages, worst |dV|={worst:.2e} V (tol 1e-6)")
    assert ok


def test_c3_oracle_equivalence():
    worst, n = 0.0, 0
    for frac in FRACTIONS:
        w = Workload(REF.w_cycles, frac)
        for t_r in (0.25, 0.5, 1.0):
            plan = sweep(CHIP, REF, Amdahl(frac), TargetSpec(t_r), FULL)
            for row in plan.feasible_rows:
                sim = simulate(w, row.p, row.f_p, row.v_p, CHIP, AccountingMode.ALL_ON)
                worst = max(worst, abs(sim.energy_j - row.e_j) / row.e_j)
                n += 1
    ok = worst <= 1e-9 and n > 0
    record("C3 oracle equivalence", ok, f"{n} feasible cells, worst rel.err={worst:.2e} (tol 1e-9)")
    assert ok


def test_c4_figure_trends():
    plans = [sweep(CHIP, REF, Amdahl(f), TargetSpec(0.25), FULL) for f in FRACTIONS]
    v_ok = all(
        b.v_p <= a.v_p for pl in plans for a, b in zip(pl.feasible_rows, pl.feasible_rows[1:])
    )
    # no feasible row (f = 0.5 here) counts as infinite minimum energy
    e_min = [pl.min_energy for pl in plans]
    e_ok = all(b <= a for a, b in zip(e_min, e_min[1:]))
    opt = [pl.optimal_p for pl in plans if pl.optimal_p is not None]
    p_ok = all(b >= a for a, b in zip(opt, opt[1:]))
    ok = v_ok and e_ok and p_ok and len(opt) >= 3
    record(
        "C4 trend reproduction",
        ok,
        f"t_r=0.25 f={list(FRACTIONS)} Emin={[round(e, 4) for e in e_min]} optimal_p={[pl.optimal_p for pl in plans]}",
    )
    assert ok


def test_c5_energy_reduction_magnitude():
    plan = sweep(CHIP, REF, Amdahl(1.0), TargetSpec(1.0), FULL)
    e1 = plan.row(1).e_j
    ratio = e1 / plan.min_energy
    ok = plan.min_energy <= e1 / 10
    record("C5 energy reduction", ok, f"E(1)={e1:.4f} J, min E={plan.min_energy:.4f} J at p={plan.optimal_p}, ratio={ratio:.2f} (need >= 10)")
    assert ok


def test_c6_worked_point():
    row = sweep(CHIP, REF, Amdahl(0.9), TargetSpec(1.0), FULL).row(16)
    ok = (
        row.f_p == pytest.approx(5e8, rel=1e-15)
        and abs(row.v_p - 0.3549) <= 1e-3
        and abs(row.e_j - 11.13) <= 0.01 * 11.13
    )
    record("C6 worked point", ok, f"F_p={row.f_p:.10g} Hz V_p={row.v_p:.6f} V E={row.e_j:.5f} J")
    assert ok


def test_c7_calibration_recovery():
    vs = (0.3, 0.45, 0.6, 0.9, 1.2)
    vf = fit_vf([VFSample(v, max_frequency(v, CHIP)) for v in vs], CHIP.h)
    pts = ((1.2, 3.2e9), (0.8, 1.5e9), (0.4, 0.5e9))
    pw = fit_power([PowerSample(v, f, CHIP.dyn_const * v * v * f + CHIP.i_leak * v) for v, f in pts])
    errs = {
        "k2": abs(vf["k2"] / CHIP.k2 - 1),
        "v_th": abs(vf["v_th"] / CHIP.v_th - 1),
        "dyn_const": abs(pw["dyn_const"] / CHIP.dyn_const - 1),
        "i_leak": abs(pw["i_leak"] / CHIP.i_leak - 1),
    }
    ok = errs["k2"] <= 1e-2 and errs["v_th"] <= 1e-2 and errs["dyn_const"] <= 1e-6 and errs["i_leak"] <= 1e-6
    record("C7 calibration recovery", ok, " ".join(f"{k}={v:.1e}" for k, v in errs.items()))
    assert ok


def test_c8_cli_contract(tmp_path):
    rc_validate = main(["validate", "--out", str(tmp_path / "v")])
    bad = tmp_path / "infeasible.json"
    bad.write_text(json.dumps({"targets": [0.01]}))
    rc_infeasible = main(["sweep", "--config", str(bad), "--out", str(tmp_path / "s")])

    plans = [sweep(CHIP, REF, Amdahl(f), TargetSpec(t), FULL) for f in FRACTIONS for t in (0.25, 1.0)]
    reparsed = all(
        all(rows_equal(a, b, rel=1e-12) for a, b in zip(pl.rows, read_plan_csv(write_plan_csv(pl, tmp_path / "r.csv"))))
        for pl in plans
    )
    svg_a = emit_svg(plans, "energy", tmp_path / "a.svg").read_bytes()
    svg_b = emit_svg(plans, "energy", tmp_path / "b.svg").read_bytes()
    ok = rc_validate == 0 and rc_infeasible == 3 and reparsed and svg_a == svg_b
    record(
        "C8 CLI contract",
        ok,
        f"validate rc={rc_validate}, infeasible sweep rc={rc_infeasible}, csv re-parse={reparsed}, svg identical={svg_a == svg_b}",
    )
    assert ok
