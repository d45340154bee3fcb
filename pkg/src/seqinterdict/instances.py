"""Small hand-built networks used by the regressions and the CLI.

Nodes are numbered from 0; ``label`` arguments use the 1-based node names
of the original drawings, so ``arc_id(g, 1, 2)`` is the arc from the first
node to the second.
"""

from seqinterdict.graph import Arc, DirectedGraph


def _build(node_count, triples, source, sink):
    arcs = [Arc(i, u - 1, v - 1, c) for i, (u, v, c) in enumerate(triples)]
    return DirectedGraph(node_count, arcs, source - 1, sink - 1)


def arc_id(g: DirectedGraph, tail_label: int, head_label: int) -> int:
    """Id of the unique arc between two 1-based node labels."""
    ids = g.arcs_between(tail_label - 1, head_label - 1)
    if len(ids) != 1:
        raise KeyError(f"{len(ids)} arcs from {tail_label} to {head_label}")
    return ids[0]


def arc_ids(g: DirectedGraph, *pairs) -> frozenset:
    return frozenset(arc_id(g, u, v) for u, v in pairs)


def diamond(M: int = 6) -> DirectedGraph:
    """Five-node network with a unit-cost chain 1-2-3-4 and two cost-M bypasses."""
    return _build(
        5,
        [
            (1, 2, 1),
            (2, 3, 1),
            (3, 4, 1),
            (1, 3, 3),
            (1, 4, M),
            (2, 4, 3),
            (1, 5, M),
            (5, 4, 0),
        ],
        1,
        4,
    )


DIAMOND_KNOWN_PAIRS = ((1, 3), (2, 4), (1, 4), (1, 5), (5, 4))


def diamond_known(g: DirectedGraph) -> frozenset:
    return arc_ids(g, *DIAMOND_KNOWN_PAIRS)


def zero_chain_with_shortcuts() -> DirectedGraph:
    """Twelve-node network: a zero-cost chain 1..11 with priced shortcuts."""
    chain = [(i, i + 1, 0) for i in range(1, 11)]
    extra = [
        (1, 3, 1),
        (5, 11, 6),
        (7, 11, 4),
        (9, 11, 2),
        (1, 10, 9),
        (2, 4, 2),
        (2, 6, 4),
        (2, 8, 6),
        (1, 12, 11),
        (12, 11, 0),
    ]
    return _build(12, chain + extra, 1, 11)


def doubled_chain(node_count: int = 6, M: int = 5) -> DirectedGraph:
    """Chain where every segment has a zero-cost arc and a parallel cost-M arc."""
    arcs = []
    for i in range(node_count - 1):
        arcs.append(Arc(len(arcs), i, i + 1, 0))
        arcs.append(Arc(len(arcs), i, i + 1, M))
    return DirectedGraph(node_count, arcs, 0, node_count - 1)


def single_arc(cost: int = 0) -> DirectedGraph:
    return DirectedGraph(2, [Arc(0, 0, 1, cost)], 0, 1)


# (x1 v x2 v x3) ^ (~x1 v ~x2 v x3) ^ (~x1 v x2 v ~x3)
THREE_CLAUSE_FORMULA = ((1, 2, 3), (-1, -2, 3), (-1, 2, -3))
