"""Ground-truth network: arcs, paths, shortest paths and structural checks.

Arc sets are always sets of arc ids; parallel arcs are distinct arcs.
Costs are nonnegative Python ints that fit in a signed 64-bit word.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path as FsPath
from typing import Iterable, Optional

from seqinterdict.kernel import Topology

MAX_COST = (1 << 62) - 1


class Unreachable(int):
    """The value of a disconnected network; compares above every cost."""

    def __new__(cls):
        return super().__new__(cls, (1 << 63) - 1)

    def __repr__(self):
        return "UNREACHABLE"

    __str__ = __repr__


UNREACHABLE = Unreachable()


class GraphError(ValueError):
    pass


class InvalidArcId(GraphError):
    pass


class DisconnectedGraph(GraphError):
    pass


class InstanceFormatError(GraphError):
    pass


@dataclass(frozen=True)
class Arc:
    id: int
    tail: int
    head: int
    cost: int
    removable: bool = True

    def __post_init__(self):
        if self.cost < 0 or self.cost > MAX_COST:
            raise GraphError(f"arc {self.id}: cost {self.cost} out of range")
        if self.tail == self.head:
            raise GraphError(f"arc {self.id}: self-loop at node {self.tail}")


@dataclass(frozen=True)
class Path:
    """An s-f path as an ordered tuple of arc ids plus its cost."""

    arc_ids: tuple
    cost: int

    def __len__(self):
        return len(self.arc_ids)

    def __iter__(self):
        return iter(self.arc_ids)

    @cached_property
    def arc_set(self) -> frozenset:
        return frozenset(self.arc_ids)

    def meets(self, arcs) -> bool:
        return not self.arc_set.isdisjoint(arcs)


class DirectedGraph:
    """Immutable directed multigraph with a source and a sink.

    ``active`` turns the graph into a view on a subset of its arcs (the
    induced subgraph ``G[A']``); arc ids and nodes are unchanged.
    """

    def __init__(
        self,
        node_count: int,
        arcs: Iterable[Arc],
        source: int,
        sink: int,
        *,
        active: Optional[Iterable[int]] = None,
    ):
        arcs = tuple(arcs)
        if node_count < 1:
            raise GraphError("node_count must be positive")
        if source == sink:
            raise GraphError("source and sink coincide")
        for node in (source, sink):
            if not 0 <= node < node_count:
                raise GraphError(f"node {node} out of range")
        for i, a in enumerate(arcs):
            if a.id != i:
                raise GraphError(f"arc ids must be dense; position {i} holds id {a.id}")
            if not (0 <= a.tail < node_count and 0 <= a.head < node_count):
                raise GraphError(f"arc {a.id}: endpoint out of range")
        self.node_count = node_count
        self.arcs = arcs
        self.source = source
        self.sink = sink
        if active is not None:
            active = frozenset(active)
            if len(active) == len(arcs):
                active = None
        self.active = active
        if active is None and shortest_path(self) is None:
            raise DisconnectedGraph("no source-sink path")

    # -- derived data -------------------------------------------------
    @cached_property
    def topology(self):
        return Topology(
            self.node_count,
            [a.tail for a in self.arcs],
            [a.head for a in self.arcs],
        )

    @cached_property
    def out_adj(self) -> tuple:
        outs = [[] for _ in range(self.node_count)]
        for a in self.arcs:
            outs[a.tail].append(a.id)
        return tuple(tuple(x) for x in outs)

    @cached_property
    def in_adj(self) -> tuple:
        ins = [[] for _ in range(self.node_count)]
        for a in self.arcs:
            ins[a.head].append(a.id)
        return tuple(tuple(x) for x in ins)

    @cached_property
    def costs(self) -> array:
        return array("q", [a.cost for a in self.arcs])

    @cached_property
    def removable(self) -> bytearray:
        return bytearray(1 if a.removable else 0 for a in self.arcs)

    @cached_property
    def base_mask(self) -> bytes:
        """Per-arc 1 for arcs outside the view."""
        if self.active is None:
            return bytes(len(self.arcs))
        return bytes(0 if a.id in self.active else 1 for a in self.arcs)

    @property
    def arc_ids(self) -> frozenset:
        if self.active is None:
            return frozenset(range(len(self.arcs)))
        return self.active

    @property
    def arc_count(self) -> int:
        return len(self.arc_ids)

    def arc(self, arc_id: int) -> Arc:
        return self.arcs[arc_id]

    def path_cost(self, arc_ids: Iterable[int]) -> int:
        costs = self.costs
        return sum(costs[a] for a in arc_ids)

    def path_nodes(self, arc_ids) -> list:
        arc_ids = tuple(arc_ids)
        if not arc_ids:
            return [self.source]
        return [self.arcs[arc_ids[0]].tail] + [self.arcs[a].head for a in arc_ids]

    def is_simple_path(self, arc_ids) -> bool:
        arc_ids = tuple(arc_ids)
        if not arc_ids:
            return False
        if self.arcs[arc_ids[0]].tail != self.source or self.arcs[arc_ids[-1]].head != self.sink:
            return False
        for x, y in zip(arc_ids, arc_ids[1:]):
            if self.arcs[x].head != self.arcs[y].tail:
                return False
        nodes = self.path_nodes(arc_ids)
        return len(set(nodes)) == len(nodes)

    def make_path(self, arc_ids) -> Path:
        arc_ids = tuple(arc_ids)
        return Path(arc_ids, self.path_cost(arc_ids))

    def arcs_between(self, tail: int, head: int) -> list:
        return [a.id for a in self.arcs if a.tail == tail and a.head == head]

    def _key(self):
        return (self.node_count, self.arcs, self.source, self.sink, self.active)

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        view = "" if self.active is None else f", view of {len(self.active)}"
        return (
            f"DirectedGraph(nodes={self.node_count}, arcs={len(self.arcs)}, "
            f"s={self.source}, f={self.sink}{view})"
        )


def blocked_mask(g: DirectedGraph, forbidden: Iterable[int] = ()) -> bytearray:
    mask = bytearray(g.base_mask)
    m = len(mask)
    for a in forbidden:
        if 0 <= a < m:
            mask[a] = 1
    return mask


def shortest_path(g: DirectedGraph, forbidden: Iterable[int] = (), costs=None) -> Optional[Path]:
    """Min-cost simple s-f path avoiding ``forbidden``; None when f is unreachable.

    Ties are broken by hop count, then by the lexicographically smallest
    arc-id sequence. Unknown ids in ``forbidden`` are ignored. ``costs``
    overrides the nominal arc costs (an ``array('q')`` indexed by arc id).
    """
    found = g.topology.shortest(
        blocked_mask(g, forbidden), g.costs if costs is None else costs, g.source, g.sink
    )
    if found is None:
        return None
    return Path(found[1], found[0])


def shortest_value(g: DirectedGraph, forbidden: Iterable[int] = (), costs=None) -> int:
    p = shortest_path(g, forbidden, costs)
    return UNREACHABLE if p is None else p.cost


def restrict(g: DirectedGraph, keep: Iterable[int]) -> DirectedGraph:
    """View of ``g`` with only the arcs in ``keep`` (ids preserved)."""
    keep = frozenset(keep)
    bad = [a for a in keep if not (isinstance(a, int) and 0 <= a < len(g.arcs))]
    if bad or not keep <= g.arc_ids:
        raise InvalidArcId(f"unknown arc ids: {sorted(keep - g.arc_ids)}")
    return DirectedGraph(g.node_count, g.arcs, g.source, g.sink, active=keep)


def expand_unremovable(g: DirectedGraph, k: int) -> DirectedGraph:
    """Replace every unremovable arc by k+1 removable parallel copies.

    The first copy keeps the original id; extra copies are appended.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if all(a.removable for a in g.arcs):
        return g
    arcs = [Arc(a.id, a.tail, a.head, a.cost, True) for a in g.arcs]
    active = None if g.active is None else set(g.active)
    for a in g.arcs:
        if a.removable:
            continue
        for _ in range(k):
            arcs.append(Arc(len(arcs), a.tail, a.head, a.cost, True))
            if active is not None and a.id in g.active:
                active.add(len(arcs) - 1)
    return DirectedGraph(g.node_count, arcs, g.source, g.sink, active=active)


def min_cut_size(g: DirectedGraph, limit: int, forbidden: Iterable[int] = ()) -> int:
    """Size of a minimum s-f cut in removable arcs, capped at ``limit``.

    Unremovable arcs can never be cut and carry unbounded capacity.
    """
    uncapped = bytearray(0 if r else 1 for r in g.removable)
    value, _ = g.topology.max_flow(blocked_mask(g, forbidden), uncapped, g.source, g.sink, limit)
    return value


def check_not_k_separable(g: DirectedGraph, k: int) -> bool:
    """True iff no k removable arcs form an s-f cut."""
    return min_cut_size(g, k + 1) >= k + 1


# -- instance text format ----------------------------------------------


@dataclass
class Instance:
    graph: DirectedGraph
    known: frozenset
    comments: list


def format_instance(g: DirectedGraph, known: Iterable[int] = (), comments: Iterable[str] = (),
                    known_keyword: str = "known") -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"nodes {g.node_count}")
    lines.append(f"source {g.source}")
    lines.append(f"sink {g.sink}")
    for a in g.arcs:
        lines.append(f"arc {a.id} {a.tail} {a.head} {a.cost} {1 if a.removable else 0}")
    known = sorted(known)
    if known:
        lines.append(known_keyword + " " + " ".join(map(str, known)))
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    node_count = source = sink = None
    arcs = {}
    known = set()
    comments = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        word, *rest = line.split()
        try:
            vals = [int(x) for x in rest]
        except ValueError:
            raise InstanceFormatError(f"line {lineno}: non-integer field") from None
        if word == "nodes" and len(vals) == 1:
            node_count = vals[0]
        elif word == "source" and len(vals) == 1:
            source = vals[0]
        elif word == "sink" and len(vals) == 1:
            sink = vals[0]
        elif word == "arc" and len(vals) == 5:
            aid, tail, head, cost, rem = vals
            if aid in arcs:
                raise InstanceFormatError(f"line {lineno}: duplicate arc id {aid}")
            if cost < 0:
                raise InstanceFormatError(f"line {lineno}: negative cost")
            if rem not in (0, 1):
                raise InstanceFormatError(f"line {lineno}: removable flag must be 0 or 1")
            arcs[aid] = (tail, head, cost, bool(rem))
        elif word in ("known", "a0"):
            known.update(vals)
        else:
            raise InstanceFormatError(f"line {lineno}: cannot parse {line!r}")
    if node_count is None or source is None or sink is None:
        raise InstanceFormatError("missing nodes/source/sink line")
    if sorted(arcs) != list(range(len(arcs))):
        raise InstanceFormatError("arc ids must be dense from 0")
    for aid, (tail, head, _, _) in arcs.items():
        if not (0 <= tail < node_count and 0 <= head < node_count):
            raise InstanceFormatError(f"arc {aid}: endpoint >= nodes")
    g = DirectedGraph(
        node_count,
        [Arc(i, *arcs[i]) for i in range(len(arcs))],
        source,
        sink,
    )
    if not known <= set(range(len(arcs))):
        raise InstanceFormatError("known set references unknown arcs")
    return Instance(g, frozenset(known), comments)


def read_instance(path) -> Instance:
    return parse_instance(FsPath(path).read_text())


def write_instance(path, g: DirectedGraph, known: Iterable[int] = (), comments: Iterable[str] = ()):
    FsPath(path).write_text(format_instance(g, known, comments))
