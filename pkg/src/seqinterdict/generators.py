"""Random test networks, the initial-knowledge construction and the 3-SAT gadget.

All randomness comes from ``numpy.random.default_rng(SeedSequence(seed))``,
so every generator is a pure function of its configuration and seed.
"""

from __future__ import annotations

import itertools
from array import array
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from seqinterdict.graph import Arc, DirectedGraph, DisconnectedGraph, shortest_path

MAX_ATTEMPTS = 100
INFLATION = 10**4


class DegenerateInstance(RuntimeError):
    """No usable network after the allowed number of regenerations."""


class BudgetOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class Layered:
    h: int = 10
    r_min: int = 4
    r_max: int = 6
    p: float = 0.5

    def __post_init__(self):
        if self.h < 3 or not 1 <= self.r_min <= self.r_max or not 0 < self.p <= 1:
            raise ValueError(f"invalid layered parameters {self}")


@dataclass(frozen=True)
class Uniform:
    n: int = 50
    p: float = 0.5

    def __post_init__(self):
        if self.n < 2 or not 0 < self.p <= 1:
            raise ValueError(f"invalid uniform parameters {self}")


@dataclass(frozen=True)
class BA:
    n: int = 50
    m: int = 5
    m0: int = 5

    def __post_init__(self):
        if not 1 <= self.m <= self.m0 < self.n:
            raise ValueError(f"invalid preferential-attachment parameters {self}")


Variant = Union[Layered, Uniform, BA]


@dataclass(frozen=True)
class GeneratorConfig:
    variant: Variant
    cost_scale: int = 100

    def __post_init__(self):
        if self.cost_scale < 1:
            raise ValueError("cost_scale must be positive")


CLASSES = {"layered": Layered, "uniform": Uniform, "ba": BA}


def default_config(name: str) -> GeneratorConfig:
    return GeneratorConfig(CLASSES[name]())


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def _graph(n, triples, s, f) -> DirectedGraph:
    return DirectedGraph(n, [Arc(i, u, v, int(c)) for i, (u, v, c) in enumerate(triples)], s, f)


# -- layered -------------------------------------------------------------


def gen_layered(cfg: GeneratorConfig, seed) -> DirectedGraph:
    """Layers 1..h with a single source and a single sink layer."""
    v = cfg.variant
    if not isinstance(v, Layered):
        raise TypeError("gen_layered needs a Layered variant")
    rng = _rng(seed)
    for _ in range(MAX_ATTEMPTS):
        widths = [1] + [int(x) for x in rng.integers(v.r_min, v.r_max + 1, v.h - 2)] + [1]
        layers, start = [], 0
        for w in widths:
            layers.append(range(start, start + w))
            start += w
        n = start
        triples = []
        for i, j in itertools.combinations(range(v.h), 2):
            gap = j - i
            forced = (i == 0 and j == 1) or (i == v.h - 2 and j == v.h - 1)
            for a in layers[i]:
                for b in layers[j]:
                    if forced or rng.random() < v.p / gap:
                        triples.append((a, b, rng.integers(0, cfg.cost_scale * gap + 1)))
        try:
            return _graph(n, triples, 0, n - 1)
        except DisconnectedGraph:
            continue
    raise DegenerateInstance("layered generator found no s-f path")


# -- source/sink by hop diameter -------------------------------------------


def hop_distances(n: int, pairs) -> list:
    """All-pairs BFS hop counts; -1 for unreachable."""
    adj = [[] for _ in range(n)]
    for u, w in pairs:
        adj[u].append(w)
    dist = []
    for src in range(n):
        d = [-1] * n
        d[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if d[w] < 0:
                    d[w] = d[u] + 1
                    queue.append(w)
        dist.append(d)
    return dist


def pick_endpoints(n: int, pairs, rng: np.random.Generator) -> Optional[tuple]:
    """Ordered pair at hop distance about half the diameter, widening by one step at a time."""
    dist = hop_distances(n, pairs)
    finite = [d for row in dist for d in row if d > 0]
    if not finite:
        return None
    diam = max(finite)
    target = diam // 2
    for width in range(diam + 1):
        wanted = {target - width, target + width}
        found = [
            (i, j) for i in range(n) for j in range(n) if i != j and dist[i][j] in wanted and dist[i][j] > 0
        ]
        if found:
            return found[int(rng.integers(len(found)))]
    return None


def gen_uniform(cfg: GeneratorConfig, seed) -> DirectedGraph:
    v = cfg.variant
    if not isinstance(v, Uniform):
        raise TypeError("gen_uniform needs a Uniform variant")
    rng = _rng(seed)
    for _ in range(MAX_ATTEMPTS):
        pairs = [(i, j) for i in range(v.n) for j in range(v.n) if i != j and rng.random() < v.p]
        costs = rng.integers(0, cfg.cost_scale + 1, len(pairs))
        ends = pick_endpoints(v.n, pairs, rng)
        if ends is None:
            continue
        return _graph(v.n, [(a, b, c) for (a, b), c in zip(pairs, costs)], *ends)
    raise DegenerateInstance("uniform generator found no s-f pair")


def gen_ba(cfg: GeneratorConfig, seed) -> DirectedGraph:
    """Preferential attachment; each undirected edge becomes two opposite arcs."""
    v = cfg.variant
    if not isinstance(v, BA):
        raise TypeError("gen_ba needs a BA variant")
    rng = _rng(seed)
    edges = list(itertools.combinations(range(v.m0), 2))
    degree = [v.m0 - 1] * v.m0
    for node in range(v.m0, v.n):
        weights = np.asarray(degree, dtype=float)
        if weights.sum() == 0:
            weights = np.ones(len(degree))
        targets = rng.choice(len(degree), size=v.m, replace=False, p=weights / weights.sum())
        for t in sorted(int(x) for x in targets):
            edges.append((t, node))
            degree[t] += 1
        degree.append(v.m)
    pairs = []
    for a, b in edges:
        pairs.append((a, b))
        pairs.append((b, a))
    costs = rng.integers(0, cfg.cost_scale + 1, len(pairs))
    ends = pick_endpoints(v.n, pairs, rng)
    if ends is None:
        raise DegenerateInstance("preferential-attachment graph has no s-f pair")
    return _graph(v.n, [(a, b, c) for (a, b), c in zip(pairs, costs)], *ends)


GENERATORS = {Layered: gen_layered, Uniform: gen_uniform, BA: gen_ba}


def generate(cfg: GeneratorConfig, seed) -> DirectedGraph:
    return GENERATORS[type(cfg.variant)](cfg, seed)


# -- initial interdictor knowledge ---------------------------------------


def build_A0(
    truth: DirectedGraph,
    seed,
    iterations: int = 5,
    probability: float = 0.5,
    inflation: int = INFLATION,
) -> frozenset:
    """Union of shortest paths under random cost inflation."""
    rng = _rng(seed)
    base = np.asarray(truth.costs, dtype=np.int64)
    known = set()
    for _ in range(iterations):
        bumped = rng.random(len(base)) < probability
        costs = base + inflation * bumped.astype(np.int64)
        path = shortest_path(truth, costs=array("q", costs.tolist()))
        known.update(path.arc_ids)
    return frozenset(known)


# -- 3-SAT reduction -----------------------------------------------------


@dataclass(frozen=True)
class SatFormula:
    variables: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have three literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.variables:
                    raise ValueError(f"literal {lit} out of range")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def n(self) -> int:
        return self.variables

    def occurrences(self, i: int) -> list:
        """(clause index, positive?) for each occurrence of variable i, in clause order."""
        return [(j, lit > 0) for j, c in enumerate(self.clauses) for lit in c if abs(lit) == i]

    def satisfied_by(self, assignment) -> bool:
        return all(any((lit > 0) == assignment[abs(lit) - 1] for lit in c) for c in self.clauses)

    def satisfiable(self) -> bool:
        return any(
            self.satisfied_by(bits) for bits in itertools.product((False, True), repeat=self.n)
        )

    @classmethod
    def parse(cls, text: str) -> "SatFormula":
        """Whitespace-separated signed literals, one clause per line; ``p n`` sets the variable count."""
        clauses, n = [], 0
        for line in text.splitlines():
            line = line.split("#")[0].strip()
            if not line:
                continue
            if line.startswith("p "):
                n = int(line.split()[1])
                continue
            clause = [int(x) for x in line.split() if x != "0"]
            clauses.append(clause)
        n = max([n] + [abs(x) for c in clauses for x in c])
        return cls(n, tuple(clauses))


def random_formula(seed, n: int = 3, m: int = 3) -> SatFormula:
    rng = _rng(seed)
    clauses = []
    for _ in range(m):
        vars_ = rng.integers(1, n + 1, 3)
        signs = rng.choice((-1, 1), 3)
        clauses.append(tuple(int(a * b) for a, b in zip(vars_, signs)))
    return SatFormula(n, tuple(clauses))


@dataclass(frozen=True)
class Occurrence:
    variable: int
    q: int
    clause: int
    positive: bool
    upper: tuple  # (removable zero arc u->v, its unremovable shadow)
    lower: tuple  # the same on the barred side
    connectors: tuple  # (y_j -> u, v -> z_j) on the side of the literal


@dataclass(frozen=True)
class ReductionInstance:
    formula: SatFormula
    graph: DirectedGraph
    initial_known: frozenset
    k: int
    h: int
    M: int
    spine: frozenset
    shadows: frozenset
    sides: dict  # variable -> {"upper": arc ids, "lower": arc ids} of removable lobe arcs
    occurrences: tuple = field(default_factory=tuple)

    def comments(self) -> list:
        lines = [f"k {self.k}", f"h {self.h}", f"M {self.M}"]
        for o in self.occurrences:
            lit = o.variable if o.positive else -o.variable
            lines.append(
                f"occurrence x{o.variable}#{o.q} literal {lit} clause {o.clause + 1} "
                f"upper {o.upper[0]}/{o.upper[1]} lower {o.lower[0]}/{o.lower[1]} "
                f"connectors {o.connectors[0]},{o.connectors[1]}"
            )
        return lines


def reduce_3sat(formula: SatFormula, k: Optional[int] = None, M: int = 2) -> ReductionInstance:
    """Two-epoch evasion instance that has a pair of cost <= 3m+n iff ``formula`` is satisfiable."""
    n, m = formula.n, formula.m
    if k is None:
        k = 3 * m
    if not 3 * m <= k <= 6 * m + n:
        raise BudgetOutOfRange(f"k={k} outside [{3 * m}, {6 * m + n}]")
    if M < 2:
        raise ValueError("M must be at least 2")

    names = {}

    def node(name):
        if name not in names:
            names[name] = len(names)
        return names[name]

    w = [node(("w", i)) for i in range(1, n + 2)]
    arcs = []
    shadows = set()

    def add(tail, head, cost, removable=True):
        arcs.append(Arc(len(arcs), tail, head, cost, removable))
        if not removable:
            shadows.add(len(arcs) - 1)
        return len(arcs) - 1

    def lobe_arc(tail, head, cost):
        return add(tail, head, cost), add(tail, head, M, False)

    sides = {}
    zero_arcs = {}
    for i in range(1, n + 1):
        occ = formula.occurrences(i)
        sides[i] = {}
        for side, bar in (("upper", ""), ("lower", "bar")):
            chain = []
            if not occ:
                chain.append(lobe_arc(w[i - 1], w[i], 1)[0])
            else:
                u = [node(("u" + bar, i, q)) for q in range(1, len(occ) + 1)]
                v = [node(("v" + bar, i, q)) for q in range(1, len(occ) + 1)]
                chain.append(lobe_arc(w[i - 1], u[0], 1)[0])
                for q in range(len(occ)):
                    pair = lobe_arc(u[q], v[q], 0)
                    chain.append(pair[0])
                    zero_arcs[(side, i, q + 1)] = pair
                    if q + 1 < len(occ):
                        chain.append(lobe_arc(v[q], u[q + 1], 1)[0])
                chain.append(lobe_arc(v[-1], w[i], 1)[0])
            sides[i][side] = tuple(chain)

    y = [node(("y", j)) for j in range(1, m + 1)]
    z = [node(("z", j)) for j in range(1, m + 1)]
    spine = [add(w[0], y[0], 0)]
    for j in range(m - 1):
        spine.append(add(z[j], y[j + 1], 0))
    spine.append(add(z[m - 1], w[n], 0))

    occurrences = []
    for i in range(1, n + 1):
        for q, (j, positive) in enumerate(formula.occurrences(i), 1):
            bar = "" if positive else "bar"
            cin = add(y[j], names[("u" + bar, i, q)], 0)
            cout = add(names[("v" + bar, i, q)], z[j], 0)
            occurrences.append(
                Occurrence(
                    i, q, j, positive,
                    zero_arcs[("upper", i, q)], zero_arcs[("lower", i, q)], (cin, cout),
                )
            )

    g = DirectedGraph(len(names), arcs, w[0], w[n])
    return ReductionInstance(
        formula,
        g,
        frozenset(spine) | frozenset(shadows),
        k,
        3 * m + n,
        M,
        frozenset(spine),
        frozenset(shadows),
        sides,
        tuple(occurrences),
    )


@dataclass(frozen=True)
class ReductionCheck:
    satisfiable: bool
    game_value: int
    h: int
    first_block_is_spine: bool
    second_block_inside_first_path: bool
    blocks_disjoint: bool

    @property
    def ok(self) -> bool:
        if (self.game_value <= self.h) != self.satisfiable:
            return False
        if self.satisfiable:
            return (
                self.first_block_is_spine
                and self.second_block_inside_first_path
                and self.blocks_disjoint
            )
        return True

    def __bool__(self):
        return self.ok


def verify_reduction(instance: ReductionInstance) -> ReductionCheck:
    """Compare the brute-force two-epoch value with truth-table satisfiability."""
    from seqinterdict.oracle import brute_force_two_epoch

    if instance.formula.n > 12:
        raise ValueError("truth table limited to 12 variables")
    best = brute_force_two_epoch(instance.graph, instance.initial_known, instance.k)
    return ReductionCheck(
        instance.formula.satisfiable(),
        best.total,
        instance.h,
        best.blocked_first == instance.spine,
        best.blocked_second <= best.first.arc_set,
        best.blocked_second.isdisjoint(best.blocked_first),
    )
