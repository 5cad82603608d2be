import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sqgvar.fields import single_mode
from sqgvar.grid import make_grid
from sqgvar.solver import SolverConfig, picard_solve

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid32():
    return make_grid(32)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64)


@pytest.fixture(scope="session")
def grid128():
    return make_grid(128)


def small_data(grid, eps=1.0):
    """Two modes on different wavenumber shells, so the nonlinearity is active."""
    return (single_mode(grid, 1, 1, "sin") + single_mode(grid, 1, -2, "cos")) * eps


@pytest.fixture(scope="session")
def small_run64(grid64):
    cfg = SolverConfig(grid64, alpha=1.5, T=0.25, n_time=16, p=6, p_bar_family="logdecay:base=6,amp=1")
    return picard_solve(small_data(grid64), None, cfg)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_line(request):
    """Record one ``criterion N: PASS|FAIL ...`` line, printed now and in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
