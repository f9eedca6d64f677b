import pytest

from kidmodel.data import adl_context, adl_reference_times
from kidmodel.space import build_memory

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def ctx():
    return adl_context()


@pytest.fixture(scope="session")
def reftimes(ctx):
    return adl_reference_times(ctx)


@pytest.fixture(scope="session")
def memory(ctx):
    return build_memory(ctx)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
