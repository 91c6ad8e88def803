import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from truncfourier.halfline import default_log_grid, default_mu_grid

settings.register_profile(
    "numeric", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("numeric")


@pytest.fixture(scope="session")
def grid():
    return default_log_grid()


@pytest.fixture(scope="session")
def mu_grid():
    return default_mu_grid()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys
    test_acceptance = sys.modules.get("test_acceptance")
    if test_acceptance is not None and test_acceptance.REPORT:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.REPORT):
            terminalreporter.write_line(test_acceptance.REPORT[number])
