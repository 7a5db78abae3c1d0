from __future__ import annotations

import pytest

from kgraph import generators
from kgraph.ksystem import build


@pytest.fixture
def o2():
    return generators.cuntz(2)


@pytest.fixture
def single_loop():
    return generators.loop()


@pytest.fixture
def two_vertex():
    """Loop at 1, edge with range 1 and source 2, two loops at 2."""
    return generators.lattice_example()


@pytest.fixture
def flip22():
    return generators.grid(2, 2, "flip")


@pytest.fixture
def transpose22():
    return generators.grid(2, 2, "transpose")


@pytest.fixture
def dangling():
    """Loop at 1; vertex 2 receives nothing."""
    return build(1, ["1", "2"], {1: [("l", "1", "1"), ("e", "1", "2")]})


# -- acceptance summary ----------------------------------------------------------


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance_log(request):
    return request.config._acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
