import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

import polydense as pd

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def plan():
    return pd.QuadraturePlan()


@pytest.fixture(scope="session")
def gaussian_basis30():
    return pd.build_basis(pd.gaussian(), 30)


@pytest.fixture(scope="session")
def lognormal_basis10():
    return pd.build_basis(pd.lognormal(), 10)


ACCEPTANCE = {}


def record_acceptance(number, passed, detail):
    """Store one acceptance verdict for the terminal summary."""
    ACCEPTANCE[number] = (bool(passed), detail)
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
