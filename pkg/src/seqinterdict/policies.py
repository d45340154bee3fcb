"""Evader policies: greedy shortest path and the two-step look-ahead heuristic."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional

from seqinterdict.graph import UNREACHABLE, DirectedGraph, Path, shortest_path, shortest_value
from seqinterdict.interdiction import ObservedView

# (knowledge, k) -> blocked arc ids
InterdictorModel = Callable[[ObservedView, int], frozenset]


class NoPathError(RuntimeError):
    """The evader has no s-f path left; the instance breaks non-separability."""


@dataclass(frozen=True)
class HeuristicParams:
    alpha: Fraction = Fraction(1, 2)
    q: int = 2

    def __post_init__(self):
        alpha = Fraction(self.alpha)
        if not 0 < alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if self.q < 1:
            raise ValueError("q must be positive")
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True)
class PlannedDecision:
    first: Path
    second: Optional[Path]
    predicted_total: int
    baseline_total: int = 0
    model_calls: int = 0


def greedy_step(truth: DirectedGraph, blocked) -> Path:
    path = shortest_path(truth, blocked)
    if path is None:
        raise NoPathError(f"no s-f path avoiding {sorted(blocked)}")
    return path


def strategic_plan(
    truth: DirectedGraph,
    knowledge: ObservedView,
    current_blocked,
    k: int,
    params: HeuristicParams,
    interdictor_model: InterdictorModel,
) -> PlannedDecision:
    """Two-epoch look-ahead: greedy pair versus pairs forced off the greedy path.

    The follow-up epoch is simulated by adding the first path to the
    interdictor's knowledge (new arcs at nominal cost), asking
    ``interdictor_model`` for his next block and answering greedily.
    """
    current_blocked = frozenset(current_blocked)
    greedy = greedy_step(truth, current_blocked)
    calls = 0
    follow_ups = {}

    def follow_up(path):
        nonlocal calls
        if path.arc_ids not in follow_ups:
            calls += 1
            blocked = interdictor_model(knowledge.extend(path.arc_ids), k)
            follow_ups[path.arc_ids] = shortest_path(truth, blocked)
        return follow_ups[path.arc_ids]

    nxt = follow_up(greedy)
    # a predicted disconnection after the greedy path makes every
    # feasible alternative pair preferable
    baseline = UNREACHABLE if nxt is None else greedy.cost + nxt.cost
    threshold = params.alpha * baseline
    best = (baseline, greedy, None)
    size = min(params.q, len(greedy))
    for subset in combinations(greedy.arc_ids, size):
        first = shortest_path(truth, current_blocked.union(subset))
        if first is None or not first.cost < threshold or not first.meets(greedy.arc_set):
            continue
        second = follow_up(first)
        if second is None:
            continue
        total = first.cost + second.cost
        if total < best[0]:
            best = (total, first, second)
    return PlannedDecision(best[1], best[2], best[0], baseline, calls)


@dataclass
class EpochContext:
    t: int
    horizon: int
    truth: DirectedGraph
    knowledge: ObservedView
    blocked: frozenset
    k: int


class GreedyPolicy:
    name = "greedy"

    def step(self, ctx: EpochContext) -> Path:
        return greedy_step(ctx.truth, ctx.blocked)

    def response(self, t, horizon, truth, knowledge, k):
        """Loss model for a semi-oracle interdictor; None stands for the greedy loss."""
        return None


@dataclass
class StrategicPolicy:
    """Two-step look-ahead evader with commitment to the planned second path.

    With ``replan`` the second path is dropped and every epoch plans afresh.
    The last epoch of the horizon is played greedily.
    """

    params: HeuristicParams
    model: InterdictorModel
    replan: bool = False
    commitment: Optional[Path] = None
    plan_seconds: list = field(default_factory=list)
    fallbacks: int = 0
    commitments_kept: int = 0
    name = "strategic"

    def plan(self, ctx: EpochContext) -> PlannedDecision:
        start = time.perf_counter()
        decision = strategic_plan(ctx.truth, ctx.knowledge, ctx.blocked, ctx.k, self.params, self.model)
        self.plan_seconds.append(time.perf_counter() - start)
        return decision

    def step(self, ctx: EpochContext) -> Path:
        if self.commitment is not None:
            committed, self.commitment = self.commitment, None
            if committed.arc_set.isdisjoint(ctx.blocked):
                self.commitments_kept += 1
                return committed
            self.fallbacks += 1
            return greedy_step(ctx.truth, ctx.blocked)
        if ctx.t >= ctx.horizon:
            return greedy_step(ctx.truth, ctx.blocked)
        decision = self.plan(ctx)
        if decision.second is not None and not self.replan:
            self.commitment = decision.second
        return decision.first

    def response(self, t, horizon, truth, knowledge, k):
        committed = self.commitment
        if committed is not None:
            def loss(blocked):
                if committed.arc_set.isdisjoint(blocked):
                    return committed.cost
                return shortest_value(truth, blocked)
            return loss
        if t >= horizon:
            return None

        def loss(blocked):
            return strategic_plan(truth, knowledge, blocked, k, self.params, self.model).first.cost
        return loss
