import itertools
import random

import networkx as nx
import pytest

from conftest import separable_free_graph
from seqinterdict.graph import Arc, DirectedGraph, shortest_value
from seqinterdict.instances import arc_ids, diamond, single_arc
from seqinterdict.interdiction import ObservedView, semi_oracle_select
from seqinterdict.oracle import (
    Case,
    DistinctCostsViolated,
    RandomInstanceStats,
    TooManyPaths,
    brute_force_two_epoch,
    check_cheaper_paths_blocked,
    check_pair_structure,
    enumerate_paths,
    greedy_two_epoch,
    min_disjoint_pair,
    random_distinct_cost_instance,
)


def test_diamond_paths(diamond_net):
    ranked = enumerate_paths(diamond_net)
    # 1234, 124, 134, 14, 154
    assert len(ranked.paths) == 5
    assert diamond_net.path_nodes(ranked.paths[0].arc_ids) == [0, 1, 2, 3]
    assert ranked.paths[0].cost == 3
    assert not ranked.distinct_costs
    assert ranked.rank(ranked.paths[2]) == 3


def test_trivial_enumerations(diamond_net):
    assert len(enumerate_paths(single_arc(0)).paths) == 1
    assert enumerate_paths(diamond_net, forbidden=diamond_net.arc_ids).paths == ()


def test_path_cap():
    # 2^6 paths through a chain of doubled arcs
    arcs = [Arc(2 * i + j, i, i + 1, j) for i in range(6) for j in range(2)]
    g = DirectedGraph(7, arcs, 0, 6)
    assert len(enumerate_paths(g, cap=64).paths) == 64
    with pytest.raises(TooManyPaths):
        enumerate_paths(g, cap=63)


@pytest.mark.parametrize("seed", range(15))
def test_enumeration_matches_networkx(seed):
    rng = random.Random(seed)
    g = separable_free_graph(rng, rng.randint(3, 6), rng.randint(5, 11), 1)
    h = nx.MultiDiGraph()
    for a in g.arcs:
        h.add_edge(a.tail, a.head, key=a.id)
    expected = {tuple(k for _, _, k in p) for p in nx.all_simple_edge_paths(h, g.source, g.sink)}
    assert {p.arc_ids for p in enumerate_paths(g, cap=10**5).paths} == expected


def test_brute_force_examples(diamond_net, shortcut_net, doubled_net):
    best = brute_force_two_epoch(diamond_net, (), 2)
    assert best.total == 8 and best.first.cost == 4 and best.second.cost == 4
    assert best.blocked_first == frozenset()
    assert brute_force_two_epoch(shortcut_net, (), 3).total == 10
    assert brute_force_two_epoch(doubled_net, (), 2).total == 10


def test_greedy_trace_diamond(diamond_net):
    trace = greedy_two_epoch(diamond_net, 2)
    assert trace.total == 9
    assert trace.blocked_second == arc_ids(diamond_net, (1, 2), (3, 4))


def test_diamond_structure(diamond_net):
    with pytest.raises(DistinctCostsViolated):
        check_pair_structure(diamond_net, 2)
    rep = check_pair_structure(diamond_net, 2, require_distinct=False)
    assert rep.case is Case.ALTERNATIVE_PAIR
    assert rep.shares_with_shortest and rep.beats_greedy and rep.ranks_inside and rep.ok
    assert (rep.greedy_total, rep.optimum_total) == (9, 8)
    assert check_cheaper_paths_blocked(diamond_net, 2, require_distinct=False)


def test_alternative_pair_flags_detect_violations(diamond_net):
    rep = check_pair_structure(diamond_net, 2, require_distinct=False)
    from dataclasses import replace

    assert not replace(rep, shares_with_shortest=False).ok
    assert not replace(rep, ranks_inside=False).ok
    assert not replace(rep, case=Case.GREEDY_OPTIMAL).ok


def test_min_disjoint_pair(diamond_net, doubled_net, two_node):
    assert min_disjoint_pair(doubled_net) == 25
    assert min_disjoint_pair(two_node) is None
    paths = enumerate_paths(diamond_net).paths
    expected = min(p.cost + q.cost for p, q in itertools.combinations(paths, 2) if not p.meets(q.arc_set))
    assert min_disjoint_pair(diamond_net) == expected


@pytest.mark.parametrize("seed", range(20))
def test_brute_force_agrees_with_plain_sweep(seed):
    """The pruned DFS equals a sweep over every first path with no pruning."""
    rng = random.Random(300 + seed)
    g = separable_free_graph(rng, rng.randint(3, 6), rng.randint(6, 11), 2)
    k = rng.randint(1, 2)
    first_block = semi_oracle_select(ObservedView(g, ()), k).blocked
    totals = []
    for p in enumerate_paths(g, first_block, cap=10**5).paths:
        second_block = semi_oracle_select(ObservedView(g, p.arc_ids), k).blocked
        totals.append(p.cost + shortest_value(g, second_block))
    assert brute_force_two_epoch(g, (), k).total == min(totals)


def test_random_instances_are_valid():
    stats = RandomInstanceStats()
    for seed in range(10):
        g = random_distinct_cost_instance(seed, 2, stats=stats)
        assert 4 <= g.node_count <= 8
        ranked = enumerate_paths(g)
        assert ranked.distinct_costs
        assert len({p.cost for p in ranked.paths}) == len(ranked.paths)
    assert random_distinct_cost_instance(3, 2) == random_distinct_cost_instance(3, 2)


def test_alternative_pairs_occur_in_larger_pool():
    """The pair-structure checker also meets non-greedy optima on random instances."""
    seen = 0
    for seed in range(400):
        g = random_distinct_cost_instance(seed, 3, cost_range=20)
        rep = check_pair_structure(g, 3)
        assert rep.ok
        seen += rep.case is Case.ALTERNATIVE_PAIR
        if seen >= 3:
            break
    assert seen >= 3
