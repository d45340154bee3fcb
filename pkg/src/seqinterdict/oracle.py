"""Exhaustive baselines and executable checks of the two-epoch structure results.

Everything here enumerates: simple paths by DFS, blocking sets by
``itertools.combinations``. Use it on small instances only.
"""

from __future__ import annotations

import enum
import heapq
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from seqinterdict.graph import (
    UNREACHABLE,
    Arc,
    DirectedGraph,
    Path,
    check_not_k_separable,
    shortest_path,
    shortest_value,
)
from seqinterdict.interdiction import (
    DEFAULT_ENUMERATION_BOUND,
    EnumerationTooLarge,
    InterdictionDecision,
    ObservedView,
    consistent_select,
    semi_oracle_select,
)

PATH_CAP = 200


class TooManyPaths(RuntimeError):
    pass


class DistinctCostsViolated(ValueError):
    pass


@dataclass(frozen=True)
class RankedPaths:
    paths: tuple
    distinct_costs: bool

    def __len__(self):
        return len(self.paths)

    def rank(self, path: Path) -> int:
        """1-based position of ``path`` in the ranking."""
        for i, p in enumerate(self.paths, 1):
            if p.arc_ids == path.arc_ids:
                return i
        raise KeyError(path.arc_ids)


def _simple_paths(g: DirectedGraph, forbidden=frozenset(), prune=None):
    """Yield every simple s-f path as a tuple of arc ids (DFS in arc-id order).

    ``prune(node, cost)`` may cut a branch; it is re-read at every step so
    the caller can tighten it while iterating.
    """
    blocked = set(forbidden)
    if g.active is not None:
        blocked.update(a for a in range(len(g.arcs)) if a not in g.active)
    sink = g.sink
    on_path = {g.source}
    stack = []

    def dfs(u, cost):
        if u == sink:
            yield tuple(stack)
            return
        for a in g.out_adj[u]:
            if a in blocked:
                continue
            v = g.arcs[a].head
            if v in on_path:
                continue
            c = cost + g.arcs[a].cost
            if prune is not None and prune(v, c):
                continue
            on_path.add(v)
            stack.append(a)
            yield from dfs(v, c)
            stack.pop()
            on_path.discard(v)

    yield from dfs(g.source, 0)


def enumerate_paths(truth: DirectedGraph, forbidden=(), cap: int = PATH_CAP) -> RankedPaths:
    if cap < 1:
        raise ValueError("cap must be positive")
    found = []
    for ids in _simple_paths(truth, frozenset(forbidden)):
        found.append(truth.make_path(ids))
        if len(found) > cap:
            raise TooManyPaths(f"more than {cap} simple paths")
    found.sort(key=lambda p: (p.cost, p.arc_ids))
    costs = [p.cost for p in found]
    return RankedPaths(tuple(found), len(set(costs)) == len(costs))


# -- brute-force interdiction -------------------------------------------


def brute_force_kmva(view: ObservedView, k: int):
    """Max known value over every removable known subset of size <= k."""
    flags = view.truth.removable
    pool = sorted(a for a in view.known if flags[a])
    best = view.value()
    witness = frozenset()
    for size in range(1, min(k, len(pool)) + 1):
        for subset in combinations(pool, size):
            v = view.value(subset)
            if v > best:
                best, witness = v, frozenset(subset)
    return best, witness


def brute_force_select(
    view: ObservedView,
    k: int,
    rule: str = "consistent",
    response=None,
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> InterdictionDecision:
    """Either tie-breaking rule by listing every candidate set of the final size.

    The semi-oracle spends leftover budget on known arcs off every known
    route, chosen by the same worst-loss rule.
    """
    pool = view.removable_known()
    K = min(k, len(pool))
    candidates = list(combinations(pool, K))
    if len(candidates) > bound:
        raise EnumerationTooLarge(f"{len(candidates)} candidate sets")
    values = [view.value(c) for c in candidates]
    best = max(values)
    optimal = [c for c, v in zip(candidates, values) if v == best]
    spare = view.spare_known()
    E = min(k - K, len(spare))
    if rule == "consistent":
        return InterdictionDecision(frozenset(optimal[0] + spare[:E]), best)
    full = [c + e for c in optimal for e in combinations(spare, E)]
    if len(full) > bound:
        raise EnumerationTooLarge(f"{len(full)} candidate sets")
    if response is None:
        losses = [shortest_value(view.truth, c) for c in full]
    else:
        losses = [response(frozenset(c)) for c in full]
    top = max(losses)
    choice = next(c for c, l in zip(full, losses) if l == top)
    return InterdictionDecision(frozenset(choice), best)


def _interdict(view, k, interdictor, bound):
    if interdictor == "consistent":
        return consistent_select(view, k).blocked
    return semi_oracle_select(view, k, bound=bound).blocked


# -- two-epoch optimum --------------------------------------------------


@dataclass(frozen=True)
class TwoEpochResult:
    first: Path
    second: Path
    total: int
    blocked_first: frozenset
    blocked_second: frozenset
    evaluated: int


def _distance_to_sink(g: DirectedGraph, blocked) -> list:
    dist = [UNREACHABLE] * g.node_count
    dist[g.sink] = 0
    heap = [(0, g.sink)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for a in g.in_adj[v]:
            if a in blocked:
                continue
            arc = g.arcs[a]
            nd = d + arc.cost
            if nd < dist[arc.tail]:
                dist[arc.tail] = nd
                heapq.heappush(heap, (nd, arc.tail))
    return dist


def brute_force_two_epoch(
    truth: DirectedGraph,
    initial_known=(),
    k: int = 1,
    interdictor: str = "semi-oracle",
    cap: int = 10**5,
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> TwoEpochResult:
    """Best evader pair (P1, P2) over every feasible first path.

    The interdictor answers each P1 as in the game; the second epoch is the
    last one, so the greedy answer there is optimal. The first-epoch block
    uses the greedy loss as the semi-oracle's evader model.
    """
    view0 = ObservedView(truth, initial_known)
    blocked1 = frozenset(_interdict(view0, k, interdictor, bound))
    dist = _distance_to_sink(truth, blocked1)
    best: Optional[TwoEpochResult] = None
    evaluated = 0

    def prune(node, cost):
        return best is not None and _plus(cost, dist[node]) >= best.total

    for ids in _simple_paths(truth, blocked1, prune):
        first = truth.make_path(ids)
        if best is not None and first.cost >= best.total:
            continue
        evaluated += 1
        if evaluated > cap:
            raise TooManyPaths(f"more than {cap} first-epoch paths to evaluate")
        view1 = view0.extend(ids)
        blocked2 = frozenset(_interdict(view1, k, interdictor, bound))
        second = shortest_path(truth, blocked2)
        if second is None:
            continue
        total = first.cost + second.cost
        if best is None or total < best.total:
            best = TwoEpochResult(first, second, total, blocked1, blocked2, evaluated)
    if best is None:
        raise ValueError("no feasible pair of paths")
    return TwoEpochResult(
        best.first, best.second, best.total, best.blocked_first, best.blocked_second, evaluated
    )


def _plus(x, y):
    return UNREACHABLE if y is UNREACHABLE else x + y


# -- greedy two-epoch trace ---------------------------------------------


@dataclass(frozen=True)
class GreedyTrace:
    first: Path
    blocked_second: frozenset
    second: Path

    @property
    def total(self):
        return self.first.cost + self.second.cost


def greedy_two_epoch(truth: DirectedGraph, k: int, interdictor: str = "semi-oracle") -> GreedyTrace:
    """Greedy evader against the interdictor for T=2 with nothing known initially."""
    first = shortest_path(truth)
    view = ObservedView(truth, first.arc_ids)
    blocked = frozenset(_interdict(view, k, interdictor, DEFAULT_ENUMERATION_BOUND))
    return GreedyTrace(first, blocked, shortest_path(truth, blocked))


def _ranked_distinct(truth, cap, require_distinct=True):
    ranking = enumerate_paths(truth, cap=cap)
    if require_distinct and not ranking.distinct_costs:
        raise DistinctCostsViolated("two s-f paths share a cost")
    return ranking


def check_cheaper_paths_blocked(
    truth: DirectedGraph, k: int, cap: int = PATH_CAP, require_distinct: bool = True
) -> bool:
    """Every path ranked before the greedy second path meets the second block.

    With ``require_distinct=False`` ties in path cost are ranked by arc ids.
    """
    ranking = _ranked_distinct(truth, cap, require_distinct)
    trace = greedy_two_epoch(truth, k)
    r = ranking.rank(trace.second)
    if r <= 1:
        return False
    return all(p.meets(trace.blocked_second) for p in ranking.paths[: r - 1])


class Case(str, enum.Enum):
    GREEDY_OPTIMAL = "greedy-optimal"
    ALTERNATIVE_PAIR = "alternative-pair"


@dataclass(frozen=True)
class StructureReport:
    case: Case
    pair_ranks: Optional[tuple] = None
    shares_with_shortest: bool = True
    beats_greedy: bool = True
    ranks_inside: bool = True
    greedy_total: int = 0
    optimum_total: int = 0
    greedy_rank: int = 0

    @property
    def ok(self) -> bool:
        if self.case is Case.GREEDY_OPTIMAL:
            return self.optimum_total == self.greedy_total
        return self.shares_with_shortest and self.beats_greedy and self.ranks_inside


def check_pair_structure(
    truth: DirectedGraph, k: int, cap: int = PATH_CAP, require_distinct: bool = True
) -> StructureReport:
    """Classify the two-epoch optimum as greedy or as a pair meeting the necessary conditions."""
    ranking = _ranked_distinct(truth, cap, require_distinct)
    trace = greedy_two_epoch(truth, k)
    best = brute_force_two_epoch(truth, (), k)
    r = ranking.rank(trace.second)
    if best.total >= trace.total:
        return StructureReport(
            Case.GREEDY_OPTIMAL, greedy_total=trace.total, optimum_total=best.total, greedy_rank=r
        )
    i = ranking.rank(best.first)
    j = ranking.rank(best.second)
    shortest = ranking.paths[0]
    return StructureReport(
        Case.ALTERNATIVE_PAIR,
        (i, j),
        shares_with_shortest=best.first.meets(shortest.arc_set) and best.second.meets(shortest.arc_set),
        beats_greedy=shortest.cost + ranking.paths[r - 1].cost > best.total,
        ranks_inside=1 < i < r and 1 < j < r and i != j,
        greedy_total=trace.total,
        optimum_total=best.total,
        greedy_rank=r,
    )


def check_unit_budget_greedy(truth: DirectedGraph) -> bool:
    """With k=1 the greedy pair is optimal."""
    return brute_force_two_epoch(truth, (), 1).total == greedy_two_epoch(truth, 1).total


def check_covering_budget_disjoint(truth: DirectedGraph, k: int) -> bool:
    """If k covers the whole optimal first path, the optimal pair is arc-disjoint."""
    best = brute_force_two_epoch(truth, (), k)
    if k < len(best.first):
        return True
    return not best.second.meets(best.first.arc_set)


def min_disjoint_pair(truth: DirectedGraph, cap: int = PATH_CAP) -> Optional[int]:
    """Cheapest total cost of two arc-disjoint s-f paths, or None if there is none."""
    paths = enumerate_paths(truth, cap=cap).paths
    best = None
    for i, p in enumerate(paths):
        if best is not None and 2 * p.cost >= best:
            break
        for q in paths[i + 1:]:
            if best is not None and p.cost + q.cost >= best:
                break
            if not q.meets(p.arc_set):
                best = p.cost + q.cost
                break
    return best


# -- random small instances with distinct path costs ---------------------


@dataclass
class RandomInstanceStats:
    rejected_cut: int = 0
    rejected_paths: int = 0
    resampled_costs: int = 0
    extra: dict = field(default_factory=dict)


def random_distinct_cost_instance(
    seed: int,
    k: int,
    min_nodes: int = 4,
    max_nodes: int = 8,
    cost_range: int = 10**6,
    cap: int = PATH_CAP,
    stats: Optional[RandomInstanceStats] = None,
) -> DirectedGraph:
    """Random acyclic network with all s-f path costs distinct and no k-arc cut.

    Structure is redrawn when a k-arc cut exists or paths exceed ``cap``;
    costs are redrawn until every path cost differs.
    """
    rng = random.Random(seed)
    stats = stats if stats is not None else RandomInstanceStats()
    while True:
        n = rng.randint(max(min_nodes, k + 2), max(max_nodes, k + 2))
        p = rng.uniform(0.5, 0.9)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        if not pairs:
            continue
        arcs = [Arc(i, u, v, rng.randint(0, cost_range)) for i, (u, v) in enumerate(pairs)]
        try:
            g = DirectedGraph(n, arcs, 0, n - 1)
        except ValueError:
            stats.rejected_cut += 1
            continue
        if not check_not_k_separable(g, k):
            stats.rejected_cut += 1
            continue
        try:
            ranking = enumerate_paths(g, cap=cap)
        except TooManyPaths:
            stats.rejected_paths += 1
            continue
        for _ in range(100):
            if ranking.distinct_costs:
                return g
            stats.resampled_costs += 1
            arcs = [Arc(a.id, a.tail, a.head, rng.randint(0, cost_range)) for a in g.arcs]
            g = DirectedGraph(n, arcs, 0, n - 1)
            ranking = enumerate_paths(g, cap=cap)
