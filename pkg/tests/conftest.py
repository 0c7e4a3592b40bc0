import sys

import pytest

from clusternet import (
    BasisCache,
    enumerate_elementary,
    find_positive_grading,
    partition_transitions,
)
from clusternet.io import parse_state, permanganate_matrix

INITIAL = "2 MnO4- + 6 H+ + 5 H2C2O4"
FINAL = "2 Mn^2+ + 8 H2O + 10 CO2"


@pytest.fixture
def toy():
    """x1 <-> x2 reversible, x2 -> x3 irreversible."""
    return {"U": [(1, -1, 0)], "D": [(0, -1, 1)], "S": [(1, 0, 0)], "g": (1, 1, 1)}


@pytest.fixture
def diamond():
    """Cluster {x1, x2} reaches x3 by two labels; x3 -> x4 is the only way on."""
    return {
        "U": [(1, -1, 0, 0)],
        "D": [(-1, 0, 1, 0), (0, -1, 1, 0), (0, 0, -1, 1)],
        "S": [(1, 0, 0, 0)],
        "g": (1, 1, 1, 1),
    }


@pytest.fixture
def witness_gap():
    """Smallest system found where one witness per (cluster, move) misses an arc."""
    return {"U": [(-1, -1, 2), (2, 0, -2)], "D": [(-1, 1, 0)], "S": [(0, 0, 2)], "g": (1, 1, 1)}


@pytest.fixture(scope="session")
def permanganate():
    A = permanganate_matrix()
    g = find_positive_grading(A.rows)
    en = enumerate_elementary(A, g)
    ts = partition_transitions(en.distinct, A.species, g)
    return {
        "A": A,
        "g": g,
        "enum": en,
        "ts": ts,
        "s": parse_state(INITIAL, A.species),
        "t": parse_state(FINAL, A.species),
    }


@pytest.fixture(scope="session")
def permanganate_cache(permanganate):
    ts = permanganate["ts"]
    cache = BasisCache(ts.U, permanganate["g"])
    cache.populate(ts.D)
    return cache


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda x: int(x.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
