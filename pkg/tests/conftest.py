import random

import pytest

from qsphere.algebras import build_s7q, build_sigma4q, build_uq4

# lines printed by the acceptance module, replayed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def sigma4():
    return build_sigma4q()


@pytest.fixture(scope="session")
def s7():
    return build_s7q()


@pytest.fixture(scope="session")
def uq4():
    return build_uq4()


@pytest.fixture
def rng():
    return random.Random(20240611)
