import pytest

from egroups.coordgroup import GroupParams, make_group
from egroups.fpgroup import builtin_presentation, todd_coxeter

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture(scope="session")
def g311():
    return make_group(GroupParams.of(3, 1, 1))


@pytest.fixture(scope="session")
def g221():
    return make_group(GroupParams.of(2, 2, 1))


@pytest.fixture(scope="session")
def g211_pres():
    pres = builtin_presentation("coord", params=GroupParams.of(2, 1, 1))
    return todd_coxeter(pres), pres


@pytest.fixture(scope="session")
def q8():
    pres = builtin_presentation("q8xc2n", n=0)
    return todd_coxeter(pres), pres
