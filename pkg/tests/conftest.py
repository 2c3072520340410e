from fractions import Fraction

import pytest

from sagecircuits import HPolyhedron, Support

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def line_support(*alphas) -> Support:
    return Support([[Fraction(a)] for a in alphas])


@pytest.fixture
def half_line() -> HPolyhedron:
    return HPolyhedron([[-1]], [0])


@pytest.fixture
def real_line() -> HPolyhedron:
    return HPolyhedron.free(1)


@pytest.fixture
def s012() -> Support:
    return line_support(0, 1, 2)


@pytest.fixture
def shifted_orthant():
    """Three points in the plane over the shifted orthant ``x >= (1, 1)``."""
    s = Support([[0, 0], [1, 0], [0, 1]])
    x = HPolyhedron([[-1, 0], [0, -1]], [-1, -1])
    return s, x
