import math

import pytest

from uavjam import EnvironmentParams, JammerPlacement, NetworkConfig, QuadratureSettings

URBAN = EnvironmentParams()


@pytest.fixture
def env():
    return URBAN


@pytest.fixture
def cfg():
    # offset sweep setting: Rx at 340 m, 5e-7 eavesdroppers per m^2
    return NetworkConfig(ell_r=340.0, lambda_e=5e-7)


@pytest.fixture
def placement():
    return JammerPlacement(d_tu=200.0, z_u=100.0, theta_r=math.pi)


@pytest.fixture
def quad():
    return QuadratureSettings()


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(criterion: str, ok: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
