import numpy as np
import pytest

from coherence_cost import tolerances

ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(autouse=True)
def _default_tolerances():
    tolerances.reset()
    yield
    tolerances.reset()


@pytest.fixture
def record_criterion():
    def record(number, name, ok, detail=""):
        ACCEPTANCE[number] = (name, bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {name}  {detail}")
