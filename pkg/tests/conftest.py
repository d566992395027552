import numpy as np
import pytest

from fqate.potentials import parabolic_problem
from fqate.scheduling import optimal_schedule
from fqate.spectra import indicator_table
from fqate.structopt import h2plus_problem

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def parabolic():
    return parabolic_problem(10.0, 6, 1.0)


@pytest.fixture(scope="session")
def parabolic_table(parabolic):
    return indicator_table(parabolic, np.linspace(0.0, 1.0, 257))


@pytest.fixture(scope="session")
def parabolic_opt(parabolic_table):
    return optimal_schedule(parabolic_table.a, parabolic_table.f)


@pytest.fixture(scope="session")
def h2plus():
    return h2plus_problem(15.0, 6, (2.0, 4.0, 6.0, 8.0), 2, 0.1)


@pytest.fixture(scope="session")
def h2plus_table(h2plus):
    return indicator_table(h2plus[0], np.linspace(0.0, 1.0, 257))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def acceptance():
    def record(label: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)
