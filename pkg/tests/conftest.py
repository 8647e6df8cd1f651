import random
from fractions import Fraction
from pathlib import Path

import pytest

from qbst.generate import GeneratorConfig, random_instance
from qbst.model import bidirect, validate_instance

FIXTURES = Path(__file__).parent / "fixtures"

R, A, B = 0, 1, 2


def star_instance():
    """Terminals r=0, a=1, b=2 around Steiner vertex v=3, unit costs."""
    return validate_instance(4, [(0, 3, 1), (1, 3, 1), (2, 3, 1)], [0, 1, 2], 0)


def path_instance():
    """r=0 -- v=2 -- a=1, unit costs."""
    return validate_instance(3, [(0, 2, 1), (1, 2, 1)], [0, 1], 0)


@pytest.fixture
def star():
    return star_instance()


@pytest.fixture
def star_dg():
    return bidirect(star_instance())


@pytest.fixture
def path():
    return path_instance()


@pytest.fixture
def path_dg():
    return bidirect(path_instance())


def small_instances(seed, count, **overrides):
    rng = random.Random(seed)
    cfg = GeneratorConfig(**overrides)
    return [random_instance(rng, cfg) for _ in range(count)]


def F(s):
    return Fraction(s)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
