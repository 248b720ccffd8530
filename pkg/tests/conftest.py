import random

import pytest

from edenca.groups import FreeGroup, FreeProduct, Lattice
from edenca.treefield import build_tree_field
from edenca.converse import build_theta

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def F2():
    return FreeGroup(2)


@pytest.fixture(scope="session")
def C222():
    return FreeProduct((2, 2, 2))


@pytest.fixture(scope="session")
def Z2():
    return Lattice(2)


@pytest.fixture(scope="session")
def field_F2(F2):
    return build_tree_field(F2)


@pytest.fixture(scope="session")
def theta_F2(field_F2):
    return build_theta(field_F2)


@pytest.fixture
def acceptance():
    """Recorder: ``acceptance(n, ok, detail)`` adds one summary line."""
    def record(n, ok, detail=""):
        ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
    return record


@pytest.fixture
def rng():
    return random.Random(20070922)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
