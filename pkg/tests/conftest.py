import numpy as np
import pytest

from cmcq.states import bell_diagonal, pure_from_schmidt


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def bell():
    return bell_diagonal([1, 0, 0, 0])


@pytest.fixture
def pure532():
    return pure_from_schmidt([0.5, 0.3, 0.2])


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, report_line

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(report_line(n))
