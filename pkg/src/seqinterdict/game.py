"""The repeated interdict / evade / observe loop."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from seqinterdict.graph import DirectedGraph, Path, check_not_k_separable
from seqinterdict.interdiction import (
    DEFAULT_ENUMERATION_BOUND,
    ObservedView,
    consistent_select,
    semi_oracle_select,
)
from seqinterdict.policies import (
    EpochContext,
    GreedyPolicy,
    HeuristicParams,
    StrategicPolicy,
)


class NotKSeparable(ValueError):
    """Some k removable arcs cut the source from the sink."""


class Feedback(str, enum.Enum):
    PERFECT = "perfect"
    NOISY = "noisy"


class Interdictor(str, enum.Enum):
    CONSISTENT = "consistent"
    SEMI_ORACLE = "semi-oracle"


class Evader(str, enum.Enum):
    GREEDY = "greedy"
    STRATEGIC = "strategic"


@dataclass(frozen=True)
class GameConfig:
    horizon: int
    budget: int
    feedback: Feedback = Feedback.PERFECT
    interdictor: Interdictor = Interdictor.SEMI_ORACLE
    evader: Evader = Evader.GREEDY
    params: HeuristicParams = HeuristicParams()
    seed: int = 0
    noise_width: Fraction = Fraction(1, 5)
    replan: bool = False
    enumeration_bound: int = DEFAULT_ENUMERATION_BOUND

    def __post_init__(self):
        if self.horizon < 1 or self.budget < 1:
            raise ValueError("horizon and budget must be positive")
        width = Fraction(self.noise_width)
        if not 0 <= width < 1:
            raise ValueError("noise width must lie in [0, 1)")
        object.__setattr__(self, "noise_width", width)
        object.__setattr__(self, "feedback", Feedback(self.feedback))
        object.__setattr__(self, "interdictor", Interdictor(self.interdictor))
        object.__setattr__(self, "evader", Evader(self.evader))


@dataclass(frozen=True)
class EpochRecord:
    t: int
    blocked: frozenset
    traversed: Path
    loss: int


@dataclass
class GameOutcome:
    records: list
    cumulative: int
    final_knowledge: ObservedView
    plan_seconds: list = field(default_factory=list)
    fallbacks: int = 0

    def log_lines(self) -> list:
        lines = [
            f"t={r.t} I={_ids(sorted(r.blocked))} P={_ids(r.traversed.arc_ids)} loss={r.loss}"
            for r in self.records
        ]
        lines.append(f"L={self.cumulative}")
        return lines

    def log(self) -> str:
        return "\n".join(self.log_lines()) + "\n"


def _ids(ids) -> str:
    return "{" + ",".join(str(a) for a in ids) + "}"


def noisy_cost(rng: np.random.Generator, cost: int, width: Fraction) -> int:
    """Integer drawn uniformly from [ceil((1-w)c), floor((1+w)c)]."""
    lo = math.ceil((1 - width) * cost)
    hi = math.floor((1 + width) * cost)
    return int(rng.integers(lo, hi + 1))


def noise_table(truth: DirectedGraph, width: Fraction, seed: int) -> dict:
    """One pre-drawn observation per arc, so runs sharing a seed see the same noise."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return {a.id: noisy_cost(rng, a.cost, width) for a in truth.arcs}


def apply_feedback(
    knowledge: ObservedView,
    path: Path,
    feedback: Feedback = Feedback.PERFECT,
    observations: Optional[dict] = None,
) -> ObservedView:
    """Add the traversed arcs to the knowledge; only first sightings set a cost."""
    if Feedback(feedback) is Feedback.PERFECT:
        return knowledge.extend(path.arc_ids)
    if observations is None:
        raise ValueError("noisy feedback needs an observation table")
    return knowledge.extend(path.arc_ids, observations)


def interdictor_model(config: GameConfig):
    """The interdictor as the evader simulates him: greedy loss for the semi-oracle."""
    if config.interdictor is Interdictor.CONSISTENT:
        return lambda view, k: consistent_select(view, k).blocked
    bound = config.enumeration_bound
    return lambda view, k: semi_oracle_select(view, k, bound=bound).blocked


def make_policy(config: GameConfig):
    if config.evader is Evader.GREEDY:
        return GreedyPolicy()
    return StrategicPolicy(config.params, interdictor_model(config), replan=config.replan)


def run_game(
    truth: DirectedGraph,
    initial_known: Iterable[int],
    config: GameConfig,
    *,
    validate: bool = True,
) -> GameOutcome:
    """Play ``config.horizon`` epochs; deterministic in (truth, initial_known, config)."""
    if validate and not check_not_k_separable(truth, config.budget):
        raise NotKSeparable(f"a cut of at most {config.budget} removable arcs exists")
    knowledge = ObservedView(truth, initial_known)
    observations = None
    if config.feedback is Feedback.NOISY:
        observations = noise_table(truth, config.noise_width, config.seed)
    policy = make_policy(config)
    k = config.budget
    records = []
    total = 0
    for t in range(1, config.horizon + 1):
        if config.interdictor is Interdictor.CONSISTENT:
            decision = consistent_select(knowledge, k)
        else:
            response = policy.response(t, config.horizon, truth, knowledge, k)
            decision = semi_oracle_select(
                knowledge, k, truth, response, bound=config.enumeration_bound
            )
        blocked = decision.blocked
        ctx = EpochContext(t, config.horizon, truth, knowledge, blocked, k)
        path = policy.step(ctx)
        assert path.arc_set.isdisjoint(blocked)
        records.append(EpochRecord(t, blocked, path, path.cost))
        total += path.cost
        knowledge = apply_feedback(knowledge, path, config.feedback, observations)
    return GameOutcome(
        records,
        total,
        knowledge,
        list(getattr(policy, "plan_seconds", [])),
        getattr(policy, "fallbacks", 0),
    )
