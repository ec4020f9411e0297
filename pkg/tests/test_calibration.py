import pytest
from hypothesis import given, settings, strategies as st

from ntv_energy import (
    DataError,
    DegenerateDataError,
    InsufficientDataError,
    PowerSample,
    VFSample,
    fit_power,
    fit_vf,
)
from ntv_energy.calibration import load_power_samples, load_vf_samples


def vf_gen(k2, vth, h, vs):
    # generator is the oracle: direct evaluation of the V/F relation
    return [VFSample(v, k2 * (v - vth) ** h / v) for v in vs]


def power_gen(dyn, leak, pts):
    return [PowerSample(v, f, dyn * v * v * f + leak * v) for v, f in pts]


def test_fit_vf_recovers_table_constants():
    fit = fit_vf(vf_gen(4.02e9, 0.23, 1.5, [0.3, 0.45, 0.6, 0.9, 1.2]), 1.5)
    assert fit["k2"] == pytest.approx(4.02e9, rel=1e-2)
    assert fit["v_th"] == pytest.approx(0.23, rel=1e-2)
    assert fit.relative_rms <= 1e-3
    assert fit.sample_count == 5


def test_fit_vf_two_points_exact():
    fit = fit_vf(vf_gen(2.5e9, 0.31, 1.5, [0.5, 1.0]), 1.5)
    assert fit.relative_rms == pytest.approx(0.0, abs=1e-9)
    assert fit["v_th"] == pytest.approx(0.31, rel=1e-6)


def test_fit_vf_degenerate():
    with pytest.raises(DegenerateDataError):
        fit_vf([VFSample(0.9, 2e9), VFSample(0.9, 2.1e9), VFSample(0.9, 1.9e9)])


def test_fit_vf_insufficient():
    with pytest.raises(InsufficientDataError):
        fit_vf([VFSample(0.9, 2e9)])


def test_fit_vf_refinement_monotone():
    # noisy data so the optimum has a nonzero residual
    samples = vf_gen(3.0e9, 0.25, 1.5, [0.35, 0.5, 0.7, 0.9, 1.1])
    samples = [VFSample(s.v, s.f_max * (1 + 0.01 * (-1) ** i)) for i, s in enumerate(samples)]
    rms = [fit_vf(samples, 1.5, iterations=n).rms_residual for n in range(0, 60, 3)]
    assert all(b <= a for a, b in zip(rms, rms[1:]))
    assert rms[-1] < rms[0]


@settings(max_examples=40, deadline=None)
@given(st.floats(1e8, 1e11), st.floats(0.1, 0.4), st.sampled_from([1.0, 1.3, 1.5, 2.0]))
def test_fit_vf_round_trip(k2, vth, h):
    vs = [vth + d for d in (0.1, 0.3, 0.6, 0.9)]
    fit = fit_vf(vf_gen(k2, vth, h, vs), h)
    assert fit["k2"] == pytest.approx(k2, rel=1e-2)
    assert fit["v_th"] == pytest.approx(vth, rel=1e-2)


TABLE_PTS = [(1.2, 3.2e9), (0.8, 1.5e9), (0.4, 0.5e9)]


def test_fit_power_recovers_table_constants():
    fit = fit_power(power_gen(1.06e-8, 7.97e-2, TABLE_PTS))
    assert fit["dyn_const"] == pytest.approx(1.06e-8, rel=1e-6)
    assert fit["i_leak"] == pytest.approx(7.97e-2, rel=1e-6)
    assert fit.relative_rms <= 1e-9
    assert fit.warnings == ()


def test_fit_power_single_sample():
    with pytest.raises(InsufficientDataError):
        fit_power(power_gen(1e-8, 0.1, TABLE_PTS[:1]))


def test_fit_power_zero_frequency_is_underdetermined():
    with pytest.raises(DegenerateDataError):
        fit_power(power_gen(1e-8, 0.1, [(0.5, 0.0), (0.8, 0.0), (1.1, 0.0)]))


def test_fit_power_clamps_negative():
    # generated with i_leak = -1 A, which is non-physical
    samples = [PowerSample(v, f, 1e-8 * v * v * f - v) for v, f in [(1.0, 1e9), (0.5, 2e9), (1.2, 1e9)]]
    fit = fit_power(samples)
    assert fit["i_leak"] >= 0 and fit["dyn_const"] >= 0
    assert any("clamped" in w for w in fit.warnings)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-10, 1e-7), st.floats(1e-3, 1.0))
def test_fit_power_round_trip(dyn, leak):
    # leakage must stay above ~1e-6 of total power or float64 rounding of
    # the samples themselves hides it
    pts = [(0.4, 3e8), (0.7, 1.1e9), (1.0, 2.0e9), (1.2, 3.0e9)]
    fit = fit_power(power_gen(dyn, leak, pts))
    assert fit["dyn_const"] == pytest.approx(dyn, rel=1e-6)
    assert fit["i_leak"] == pytest.approx(leak, rel=1e-6)
    assert fit.relative_rms <= 1e-9


def test_sample_csvs(tmp_path):
    vf = tmp_path / "vf.csv"
    vf.write_text("v,f_max\n" + "".join(f"{s.v!r},{s.f_max!r}\n" for s in vf_gen(4.02e9, 0.23, 1.5, [0.3, 0.6, 1.2])))
    assert len(load_vf_samples(vf)) == 3
    pw = tmp_path / "p.csv"
    pw.write_text("v,f,p_w\n1.2,3.2e9,49\n0.8,1.5e9,10\n")
    assert load_power_samples(pw)[0] == PowerSample(1.2, 3.2e9, 49.0)
    bad = tmp_path / "bad.csv"
    bad.write_text("v,f\n1,2\n")
    with pytest.raises(DataError):
        load_power_samples(bad)
