import math

import pytest

from compositems import HilbertConfig, build_B1, build_B2, build_single


@pytest.fixture(scope="session")
def b2():
    return build_B2(math.pi / 4, "sin32", 1.0, (0.0, 2 * math.pi))


@pytest.fixture(scope="session")
def b1():
    return build_B1(math.pi / 4, "sin32", 1.0, (0.0, 2 * math.pi))


@pytest.fixture(scope="session")
def standard():
    return build_single(math.pi / 4, "const", 1.0, (0.0, 2 * math.pi))


@pytest.fixture(scope="session")
def cfg14():
    return HilbertConfig(14)


@pytest.fixture(scope="session")
def cfg40():
    return HilbertConfig(40)


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
