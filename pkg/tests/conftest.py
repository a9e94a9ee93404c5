import math

import numpy as np
import pytest
from hypothesis import settings

from wmkg.grid import SimParams, build_grid

settings.register_profile("wmkg", deadline=None, max_examples=25)
settings.load_profile("wmkg")

SQRT3 = math.sqrt(3.0)
# period that puts sqrt(3), sqrt(3)/2 and 0 on the k grid (dk = sqrt(3)/2 / m)
TWO_WAVE_L = 4.0 * math.pi / SQRT3


@pytest.fixture
def unit_params():
    return SimParams()


@pytest.fixture
def plane_grid(unit_params):
    """n=256 grid on which k0 = sqrt(3) is a node."""
    return build_grid(256, TWO_WAVE_L * 8, unit_params)


def rel_err(a, b):
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(np.asarray(b)))


ACCEPTANCE_LINES = []


def report(number, name, ok, detail):
    """Record and print one acceptance line; returns ``ok`` for asserting."""
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
