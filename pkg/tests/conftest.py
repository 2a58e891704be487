import numpy as np
import pytest

from pjacobi.generate import example1, random_symmetric

EX1_EIGS = np.array([-1.0, 1.0, 1.0, 3.0])


@pytest.fixture
def ex1():
    return example1()


@pytest.fixture
def rand8():
    return random_symmetric(8, seed=3)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
