import numpy as np
import pytest

from bjjdip.potential import lab_defaults
from bjjdip.schrodinger import Grid
from bjjdip.twomode import locate_resonance


@pytest.fixture(scope="session")
def trap():
    return lab_defaults()


@pytest.fixture(scope="session")
def grid():
    return Grid()


@pytest.fixture(scope="session")
def resonance(trap, grid):
    return locate_resonance(trap, 14.0, 15.0, grid)


@pytest.fixture(scope="session")
def sweep_i0(resonance):
    coarse = np.arange(0.0, 25.01, 0.5)
    dense = np.linspace(resonance - 0.06, resonance + 0.06, 25)
    return np.unique(np.concatenate((coarse, dense)))


_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
