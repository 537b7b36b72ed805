import numpy as np
import pytest

from bellbath import dephasing

_acceptance = []


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


def random_bath(rng, n_modes=None):
    n = int(rng.integers(1, 6)) if n_modes is None else n_modes
    omegas = rng.uniform(0.2, 3.0, size=n)
    couplings = rng.uniform(0.01, 0.3, size=n) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
    return dephasing.DiscreteBath.from_arrays(omegas, couplings)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
