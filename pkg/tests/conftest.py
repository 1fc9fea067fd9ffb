import math

import pytest

from plasmonqd.config import RunConfig
from plasmonqd.constants import E_CHARGE
from plasmonqd.material import material_preset
from plasmonqd.sweeps import build_system

ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE[criterion] = (passed, detail)


@pytest.fixture(scope="session")
def silver():
    return material_preset()


@pytest.fixture(scope="session")
def mu():
    return E_CHARGE * 0.8e-9


@pytest.fixture(scope="session")
def default_cfg():
    return RunConfig()


@pytest.fixture(scope="session")
def default_eff(default_cfg):
    return build_system(default_cfg, 30e-9, 30e-9, 10).eff


@pytest.fixture
def gamma0():
    return 2 * math.pi * 1e8


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
