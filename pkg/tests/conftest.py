import numpy as np
import pytest

from skewalg.workspace import fixture_path, parse_workspace


@pytest.fixture(scope="session")
def swap_ws():
    return parse_workspace(fixture_path("swap"))


@pytest.fixture(scope="session")
def kron_ws():
    return parse_workspace(fixture_path("kron"))


@pytest.fixture(scope="session")
def gentle_ws():
    return parse_workspace(fixture_path("gentle"))


@pytest.fixture(scope="session")
def brauer_ws():
    return parse_workspace(fixture_path("brauer"))


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k].line())
