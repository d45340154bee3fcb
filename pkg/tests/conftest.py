import random

import pytest

from seqinterdict.graph import Arc, DirectedGraph, DisconnectedGraph, check_not_k_separable
from seqinterdict.instances import diamond, doubled_chain, single_arc, zero_chain_with_shortcuts


@pytest.fixture
def diamond_net():
    return diamond(6)


@pytest.fixture
def shortcut_net():
    return zero_chain_with_shortcuts()


@pytest.fixture
def doubled_net():
    return doubled_chain(6, 5)


@pytest.fixture
def two_node():
    return single_arc(0)


def random_graph(rng: random.Random, n: int, m: int, unremovable: float = 0.0, max_cost: int = 9):
    """Random connected multigraph with s=0, f=n-1 (redrawn until an s-f path exists)."""
    while True:
        arcs = []
        for i in range(m):
            u = rng.randrange(n)
            v = rng.randrange(n)
            while v == u:
                v = rng.randrange(n)
            arcs.append(Arc(i, u, v, rng.randint(0, max_cost), rng.random() >= unremovable))
        try:
            return DirectedGraph(n, arcs, 0, n - 1)
        except DisconnectedGraph:
            continue


def separable_free_graph(rng: random.Random, n: int, m: int, k: int, max_cost: int = 20):
    """Random graph in which no k removable arcs cut s from f."""
    while True:
        g = random_graph(rng, n, m, max_cost=max_cost)
        if check_not_k_separable(g, k):
            return g


# -- acceptance report ------------------------------------------------------

ACCEPTANCE_LINES: dict = {}


def report(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
