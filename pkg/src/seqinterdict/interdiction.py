"""k-most-vital-arcs solver and the interdictor's tie-breaking rules.

The interdictor only sees the arcs he knows, at the costs he observed.
Everything here maximizes the shortest s-f path value of that known
subnetwork by blocking at most k removable known arcs.

Solver outline:

* a min-cut check first: if at most ``k`` removable arcs cut s from f the
  value is Unreachable and the cut is the witness;
* if the known network is a chain of pieces joined at s-f separating
  nodes, every piece is solved on its own for each budget and the pieces
  are combined with a knapsack pass;
* otherwise a branch-and-bound decides "can the value reach V with r more
  blocks?" and the optimum is found by raising V until that fails.

The decision search branches on the arcs of a path that is still too
short (any successful blocking set must hit it). Child ``i`` blocks the
``i``-th arc and forbids the earlier ones, so no set is visited twice.
Two bounds prune it: blocking every remaining candidate must be enough,
and the number of such paths with pairwise disjoint candidate arcs must
not exceed the remaining budget.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Callable, Iterable, Optional

from seqinterdict.graph import UNREACHABLE, DirectedGraph, Path, restrict

DEFAULT_ENUMERATION_BOUND = 10**6


class EnumerationTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class InterdictionDecision:
    blocked: frozenset
    known_value: int


class ObservedView:
    """The interdictor's picture of the network: known arcs and their observed costs.

    ``costs`` is indexed by arc id; entries of unknown arcs hold the nominal
    cost and are never read by the solver.
    """

    __slots__ = ("truth", "known", "costs")

    def __init__(self, truth: DirectedGraph, known: Iterable[int] = (), costs=None):
        known = frozenset(known)
        bad = [a for a in known if not 0 <= a < len(truth.arcs)]
        if bad:
            raise ValueError(f"unknown arc ids {sorted(bad)}")
        if costs is None:
            costs = array("q", truth.costs)
        elif not isinstance(costs, array):
            costs = array("q", costs)
        if len(costs) != len(truth.arcs) or any(c < 0 for c in costs):
            raise ValueError("observed costs must be nonnegative, one per arc")
        self.truth = truth
        self.known = known
        self.costs = costs

    def extend(self, arc_ids: Iterable[int], observed: Optional[dict] = None) -> "ObservedView":
        """New view with ``arc_ids`` known; first-seen arcs take ``observed[a]`` (default nominal)."""
        arc_ids = frozenset(arc_ids)
        fresh = arc_ids - self.known
        if not fresh:
            return self
        costs = array("q", self.costs)
        nominal = self.truth.costs
        for a in fresh:
            costs[a] = nominal[a] if observed is None else observed.get(a, nominal[a])
        return ObservedView(self.truth, self.known | fresh, costs)

    @property
    def graph(self) -> DirectedGraph:
        return restrict(self.truth, self.known)

    def observed_cost(self, arc_id: int) -> int:
        return self.costs[arc_id]

    def removable_known(self) -> tuple:
        """Removable known arcs that lie on some s-f route of the known network.

        Arcs the interdictor cannot connect to both s and f are never
        blocking candidates; they cannot affect his objective.
        """
        g = self.truth
        absent = bytearray(b"\x01") * len(g.arcs)
        for a in self.known:
            absent[a] = 0
        tails = [a.tail for a in g.arcs]
        heads = [a.head for a in g.arcs]
        fwd = _reach(g.source, g.out_adj, heads, absent)
        bwd = _reach(g.sink, g.in_adj, tails, absent)
        flags = g.removable
        return tuple(
            sorted(a for a in self.known if flags[a] and fwd[tails[a]] and bwd[heads[a]])
        )

    def spare_known(self) -> tuple:
        """Removable known arcs outside every known s-f route."""
        flags = self.truth.removable
        relevant = set(self.removable_known())
        return tuple(sorted(a for a in self.known if flags[a] and a not in relevant))

    def network(self) -> "_Net":
        absent = bytearray(b"\x01") * len(self.truth.arcs)
        for a in self.known:
            absent[a] = 0
        return _Net(
            self.truth,
            self.costs,
            self.truth.source,
            self.truth.sink,
            bytes(absent),
            frozenset(self.removable_known()),
        )

    def shortest(self, blocked: Iterable[int] = ()) -> Optional[Path]:
        found = self.network().shortest(frozenset(blocked))
        return None if found is None else Path(found[1], found[0])

    def value(self, blocked: Iterable[int] = ()) -> int:
        return self.network().value(frozenset(blocked))

    def __eq__(self, other):
        if not isinstance(other, ObservedView):
            return NotImplemented
        return (
            self.truth == other.truth
            and self.known == other.known
            and all(self.costs[a] == other.costs[a] for a in self.known)
        )

    def __repr__(self):
        return f"ObservedView(known={sorted(self.known)})"


def truth_network(truth: DirectedGraph, blockable: Iterable[int]) -> "_Net":
    """The full network at nominal costs, with only ``blockable`` arcs removable by search."""
    flags = truth.removable
    return _Net(
        truth,
        truth.costs,
        truth.source,
        truth.sink,
        truth.base_mask,
        frozenset(a for a in blockable if flags[a]),
    )


class _Net:
    """A subnetwork for the solver: present arcs, costs, endpoints, blockable arcs."""

    __slots__ = ("g", "costs", "source", "sink", "absent", "blockable")

    def __init__(self, g, costs, source, sink, absent, blockable):
        self.g = g
        self.costs = costs
        self.source = source
        self.sink = sink
        self.absent = absent
        self.blockable = blockable

    def shortest(self, blocked=frozenset()):
        mask = bytearray(self.absent)
        for a in blocked:
            mask[a] = 1
        return self.g.topology.shortest(mask, self.costs, self.source, self.sink)

    def value(self, blocked=frozenset()):
        found = self.shortest(blocked)
        return UNREACHABLE if found is None else found[0]

    def without(self, forced, forbidden=()):
        """Forced arcs become absent; forced and forbidden arcs stop being blockable."""
        absent = bytearray(self.absent)
        for a in forced:
            absent[a] = 1
        blockable = self.blockable.difference(forced, forbidden)
        return _Net(self.g, self.costs, self.source, self.sink, bytes(absent), blockable)

    def min_cut(self, limit):
        uncapped = bytearray(b"\x01") * len(self.absent)
        for a in self.blockable:
            uncapped[a] = 0
        return self.g.topology.max_flow(self.absent, uncapped, self.source, self.sink, limit)


def _add(x, y):
    if x is UNREACHABLE or y is UNREACHABLE:
        return UNREACHABLE
    return x + y


# -- decomposition at separating nodes --------------------------------


def _reach(start, adj, ends, absent):
    seen = bytearray(len(adj))
    seen[start] = 1
    stack = [start]
    while stack:
        u = stack.pop()
        for a in adj[u]:
            if absent[a]:
                continue
            v = ends[a]
            if not seen[v]:
                seen[v] = 1
                stack.append(v)
    return seen


def _segments(net: _Net) -> list:
    """Split ``net`` at s-f separating nodes; ``[net]`` when no split applies."""
    found = net.shortest()
    if found is None or len(found[1]) < 2:
        return [net]
    g = net.g
    tails = [a.tail for a in g.arcs]
    heads = [a.head for a in g.arcs]
    fwd = _reach(net.source, g.out_adj, heads, net.absent)
    bwd = _reach(net.sink, g.in_adj, tails, net.absent)
    useless = bytearray(
        1 if net.absent[a] or not (fwd[tails[a]] and bwd[heads[a]]) else 0
        for a in range(len(g.arcs))
    )

    seps = [net.source]
    for a in found[1][:-1]:
        v = heads[a]
        useless_v = bytearray(useless)
        for b in g.in_adj[v]:
            useless_v[b] = 1
        if not _reach(net.source, g.out_adj, heads, useless_v)[net.sink]:
            seps.append(v)
    seps.append(net.sink)
    if len(seps) == 2:
        return [net]

    owner = bytearray(g.node_count)
    pieces = []
    for u, w in zip(seps, seps[1:]):
        region = [u]
        seen = {u}
        arcs = []
        for x in region:
            for a in g.out_adj[x]:
                if useless[a]:
                    continue
                arcs.append(a)
                y = heads[a]
                if y != w and y not in seen:
                    seen.add(y)
                    region.append(y)
        for x in region:
            if owner[x]:
                return [net]
            owner[x] = 1
        absent = bytearray(b"\x01") * len(g.arcs)
        for a in arcs:
            absent[a] = 0
        pieces.append(_Net(g, net.costs, u, w, bytes(absent), net.blockable.intersection(arcs)))
    return pieces


# -- branch-and-bound --------------------------------------------------


def _branch_arcs(net, I, X, r, V, found):
    """Arcs to branch on at a node whose shortest path is below V; None = prune."""
    free = net.blockable - I - X
    first = [a for a in found[1] if a in free]
    if not first:
        return None
    rest = net.shortest(I | free)
    if rest is not None and rest[0] < V:
        return None
    packed = [first]
    used = set(first)
    while len(packed) <= r:
        nxt = net.shortest(I.union(used))
        if nxt is None or nxt[0] >= V:
            break
        arcs = [a for a in nxt[1] if a in free]
        if not arcs:
            return None
        packed.append(arcs)
        used.update(arcs)
    if len(packed) > r:
        return None
    return min(packed, key=len)


def _decide(net, I, X, r, V):
    """A blocking set J >= I avoiding X with |J - I| <= r and value >= V, or None."""
    found = net.shortest(I)
    if found is None or found[0] >= V:
        return I
    if r == 0:
        return None
    branch = _branch_arcs(net, I, X, r, V, found)
    if branch is None:
        return None
    excluded = set(X)
    for a in branch:
        hit = _decide(net, I | {a}, frozenset(excluded), r - 1, V)
        if hit is not None:
            return hit
        excluded.add(a)
    return None


def _ties(net, I, X, r, V, out, limit):
    """Collect every set found by exhaustive branching that reaches V (includes all minimal ones)."""
    found = net.shortest(I)
    if found is None or found[0] >= V:
        out.append(I)
        if len(out) > limit:
            raise EnumerationTooLarge(f"more than {limit} optimal blocking sets")
        return
    if r == 0:
        return
    branch = _branch_arcs(net, I, X, r, V, found)
    if branch is None:
        return
    excluded = set(X)
    for a in branch:
        _ties(net, I | {a}, frozenset(excluded), r - 1, V, out, limit)
        excluded.add(a)


def _greedy_start(net, r):
    blocked = frozenset()
    value = net.value()
    for _ in range(r):
        found = net.shortest(blocked)
        if found is None:
            break
        best = None
        for a in found[1]:
            if a in net.blockable:
                v = net.value(blocked | {a})
                if best is None or v > best[0]:
                    best = (v, a)
        if best is None:
            break
        value, blocked = best[0], blocked | {best[1]}
    return value, blocked


def _improve(net, r, value, witness, stop_at):
    while value < stop_at:
        hit = _decide(net, frozenset(), frozenset(), r, value + 1)
        if hit is None:
            break
        value, witness = net.value(hit), hit
    return value, witness


def _profile(net, r):
    """Best (value, witness) for every budget 0..r on an undecomposed piece."""
    base = net.value()
    prof = [(base, frozenset())]
    if base is UNREACHABLE:
        return prof * (r + 1)
    flow, cut = net.min_cut(r + 1)
    for b in range(1, r + 1):
        if flow <= b:
            prof.append((UNREACHABLE, frozenset(cut)))
        else:
            prof.append(_improve(net, b, *prof[-1], UNREACHABLE))
    return prof


def _combine(profiles, r):
    best = [(0, frozenset())] * (r + 1)
    for prof in profiles:
        merged = []
        for b in range(r + 1):
            top = None
            for bi in range(b + 1):
                v0, w0 = best[b - bi]
                v1, w1 = prof[bi]
                v = _add(v0, v1)
                if top is None or v > top[0]:
                    top = (v, w0 | w1)
            merged.append(top)
        best = merged
    return best


def _maximize(net, r, stop_at=UNREACHABLE):
    """Max value of ``net`` after blocking at most r blockable arcs, with a witness.

    The search may stop as soon as the value reaches ``stop_at``.
    """
    found = net.shortest()
    if found is None:
        return UNREACHABLE, frozenset()
    base = found[0]
    if r <= 0 or not net.blockable or base >= stop_at:
        return base, frozenset()
    flow, cut = net.min_cut(r + 1)
    if flow <= r:
        return UNREACHABLE, frozenset(cut)
    pieces = _segments(net)
    if len(pieces) > 1:
        return _combine([_profile(p, r) for p in pieces], r)[r]
    value, witness = _greedy_start(net, r)
    return _improve(net, r, value, witness, stop_at)


def _is_minimal(net, S, V):
    return all(net.value(S - {a}) < V for a in S)


def _optimal_sets(net, r, V, limit):
    """All inclusion-minimal blocking sets of size <= r reaching value V."""
    pieces = _segments(net)
    raw = []
    if len(pieces) == 1:
        _ties(net, frozenset(), frozenset(), r, V, raw, limit)
    else:
        _ties_by_piece(pieces, r, V, raw, limit)
    seen = set()
    out = []
    for S in raw:
        if S not in seen:
            seen.add(S)
            if _is_minimal(net, S, V):
                out.append(S)
    return out


def _ties_by_piece(pieces, r, V, out, limit):
    profiles = [_profile(p, r) for p in pieces]
    options = []
    for piece, prof in zip(pieces, profiles):
        found = {}
        for level in sorted({v for v, _ in prof}):
            sets = []
            _ties(piece, frozenset(), frozenset(), r, level, sets, limit)
            for S in sets:
                if S not in found:
                    v = piece.value(S)
                    if _is_minimal(piece, S, v):
                        found[S] = v
        options.append(sorted(found.items(), key=lambda item: (len(item[0]), sorted(item[0]))))

    # best_rest[i][b]: best value from pieces i.. with budget b
    best_rest = [[0] * (r + 1)]
    for prof in reversed(profiles):
        prev = best_rest[0]
        best_rest.insert(
            0,
            [max(_add(prev[b - bi], prof[bi][0]) for bi in range(b + 1)) for b in range(r + 1)],
        )

    def walk(i, used, total, acc):
        if i == len(pieces):
            if total >= V:
                out.append(acc)
                if len(out) > limit:
                    raise EnumerationTooLarge(f"more than {limit} optimal blocking sets")
            return
        for S, v in options[i]:
            size = used + len(S)
            if size > r:
                continue
            t = _add(total, v)
            if _add(t, best_rest[i + 1][r - size]) < V:
                continue
            walk(i + 1, size, t, acc | S)

    walk(0, 0, 0, frozenset())


def _pad(chosen, allowed, K, above=-1):
    chosen = set(chosen)
    for a in allowed:
        if len(chosen) >= K:
            break
        if a > above and a not in chosen:
            chosen.add(a)
    return sorted(chosen)


def _lexmin(net, allowed, K, target, required=frozenset()):
    """Lexicographically smallest sorted K-subset of ``allowed`` containing
    ``required`` whose blocking value on ``net`` reaches ``target``."""
    value, witness = _maximize(net.without(required), K - len(required), stop_at=target)
    if value < target:
        raise ValueError("target value is not attainable")
    W = _pad(required | witness, allowed, K)
    position = {a: i for i, a in enumerate(allowed)}
    prefix = []
    for j in range(K):
        lo = position[prefix[-1]] + 1 if prefix else 0
        for a in allowed[lo:]:
            if a >= W[j]:
                break
            if a in required:
                break
            if len(allowed) - position[a] - 1 < K - j - 1:
                break
            forced = required.union(prefix, (a,))
            if len(forced) > K:
                break
            forbidden = [b for b in allowed[:position[a]] if b not in forced]
            v, extra = _maximize(net.without(forced, forbidden), K - len(forced), stop_at=target)
            if v >= target:
                W = _pad(forced | extra, allowed, K, above=a)
                break
        prefix.append(W[j])
    return tuple(W)


# -- public API --------------------------------------------------------


def k_most_vital(view: ObservedView, k: int):
    """(value, witness) of the k-most-vital-arcs problem on the known subnetwork."""
    if k < 0:
        raise ValueError("budget must be nonnegative")
    return _maximize(view.network(), k)


def blocking_size(view: ObservedView, k: int) -> int:
    """Number of known-route arcs in every interdiction decision."""
    return min(k, len(view.removable_known()))


def consistent_select(view: ObservedView, k: int) -> InterdictionDecision:
    """Lexicographically smallest optimal blocking set of size min(k, #removable known arcs).

    Route arcs come first; leftover budget takes the smallest-id removable
    known arcs off every known route.
    """
    if k < 0:
        raise ValueError("budget must be nonnegative")
    net = view.network()
    allowed = view.removable_known()
    K = min(k, len(allowed))
    value, _ = _maximize(net, K)
    chosen = _lexmin(net, allowed, K, value) if K else ()
    spare = view.spare_known()[: k - K]
    return InterdictionDecision(frozenset(chosen).union(spare), value)


def optimal_blocking_sets(view: ObservedView, k: int, bound: int = DEFAULT_ENUMERATION_BOUND):
    """(value, inclusion-minimal optimal blocking sets) on the known subnetwork."""
    net = view.network()
    K = blocking_size(view, k)
    value, _ = _maximize(net, K)
    return value, _optimal_sets(net, K, value, bound)


def semi_oracle_select(
    view: ObservedView,
    k: int,
    truth: Optional[DirectedGraph] = None,
    response: Optional[Callable[[frozenset], int]] = None,
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> InterdictionDecision:
    """Optimal blocking set that is worst for the evader this epoch.

    Candidates are the optimal sets of size min(k, #removable known arcs on
    known s-f routes). ``response(blocked)`` is the evader's loss under a
    candidate; None means the greedy evader, whose loss is the truth's
    shortest path value. Ties in loss go to the lexicographically smallest
    set. Budget left after every route arc is blocked goes to the other
    removable known arcs, again worst-for-the-evader first.
    """
    if k < 0:
        raise ValueError("budget must be nonnegative")
    truth = view.truth if truth is None else truth
    net = view.network()
    allowed = view.removable_known()
    K = min(k, len(allowed))
    value, _ = _maximize(net, K)
    if K == 0:
        chosen = ()
    elif response is None:
        minimal = _optimal_sets(net, K, value, bound)
        # the greedy loss is monotone in the blocked set, so each minimal
        # set is best completed by another k-most-vital search on the truth
        tnet = truth_network(truth, allowed)
        scored = [(_maximize(tnet.without(S), K - len(S))[0], S) for S in minimal]
        loss = max(v for v, _ in scored)
        chosen = min(_lexmin(tnet, allowed, K, loss, S) for v, S in scored if v == loss)
    else:
        minimal = _optimal_sets(net, K, value, bound)
        candidates = set()
        for S in minimal:
            rest = [a for a in allowed if a not in S]
            if len(candidates) + comb(len(rest), K - len(S)) > bound:
                raise EnumerationTooLarge(f"more than {bound} candidate blocking sets")
            for extra in combinations(rest, K - len(S)):
                candidates.add(tuple(sorted(S.union(extra))))
        chosen = _worst(sorted(candidates), response)
    spare = view.spare_known()
    E = min(k - K, len(spare))
    if E > 0:
        # K == len(allowed) here: every route arc is already blocked
        base = frozenset(allowed)
        if response is None:
            snet = truth_network(truth, spare).without(base)
            loss, _ = _maximize(snet, E)
            extra = _lexmin(snet, spare, E, loss)
        else:
            if comb(len(spare), E) > bound:
                raise EnumerationTooLarge(f"more than {bound} candidate blocking sets")
            extra = _worst(
                list(combinations(spare, E)), lambda c: response(base.union(c))
            )
        chosen = tuple(chosen) + tuple(extra)
    return InterdictionDecision(frozenset(chosen), value)


def _worst(candidates, response):
    """First candidate with the largest response loss."""
    best = None
    for cand in candidates:
        loss = response(frozenset(cand))
        if best is None or loss > best[0]:
            best = (loss, cand)
    return best[1]
