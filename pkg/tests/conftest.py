import numpy as np
import pytest

RESULTS = []


def record_criterion(number, passed, detail):
    RESULTS.append((number, bool(passed), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number, passed, detail in sorted(RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
