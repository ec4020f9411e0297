import pytest

from ntv_energy import TABLE1_PARAMS, TABLE1_REFERENCE

# Frozen with an independent 40-digit mpmath root finder (findroot on the
# V/F relation) and direct evaluation of the power/energy formulas.
V_AT_500MHZ = 0.35490157642545673658
V_AT_3_2GHZ = 1.1998307124545914502
F_AT_1_2V = 3200386342.6936442293
F_AT_0_5V = 1127980767.9211556486
P_AT_500MHZ = 0.69584783907226273878
E_P16_F09 = 11.133565425156203821
E_P1 = 48.926646119374632908
E_GATED_P16 = 4.4534261700624811574


@pytest.fixture
def params():
    return TABLE1_PARAMS


@pytest.fixture
def ref():
    return TABLE1_REFERENCE


def write(path, text):
    path.write_text(text)
    return path


ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[criterion] = (ok, detail)
    print(f"{criterion}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
