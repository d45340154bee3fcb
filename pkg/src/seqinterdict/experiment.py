"""Greedy-versus-strategic comparison sweeps with chi statistics.

Every instance gets its own seed derived from (master seed, class, k, T,
repetition, index, attempt), so results do not depend on job scheduling.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from seqinterdict.game import Feedback, GameConfig, Interdictor, run_game
from seqinterdict.generators import CLASSES, GeneratorConfig, build_A0, default_config, generate
from seqinterdict.policies import HeuristicParams, NoPathError

CSV_HEADER = (
    "class,k,T,feedback,chi_lt_mean,chi_lt_std,chi_eq_mean,chi_eq_std,"
    "chi_gt_mean,chi_gt_std,plan_ms_mean"
)
MAX_REJECTIONS = 50


@dataclass(frozen=True)
class ExperimentConfig:
    graph_class: str = "layered"
    generator: Optional[GeneratorConfig] = None
    ks: tuple = tuple(range(1, 11))
    Ts: tuple = (2, 5, 10)
    Q: int = 50
    reps: int = 10
    feedback: Feedback = Feedback.PERFECT
    interdictor: Interdictor = Interdictor.CONSISTENT
    params: HeuristicParams = HeuristicParams()
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.graph_class not in CLASSES:
            raise ValueError(f"unknown graph class {self.graph_class!r}")
        if self.Q < 1 or self.reps < 1:
            raise ValueError("Q and reps must be positive")
        if self.generator is None:
            object.__setattr__(self, "generator", default_config(self.graph_class))
        object.__setattr__(self, "feedback", Feedback(self.feedback))
        object.__setattr__(self, "interdictor", Interdictor(self.interdictor))
        object.__setattr__(self, "ks", tuple(self.ks))
        object.__setattr__(self, "Ts", tuple(self.Ts))


@dataclass(frozen=True)
class InstanceResult:
    k: int
    T: int
    rep: int
    index: int
    greedy: int
    strategic: int
    plan_seconds: tuple
    rejected: int

    @property
    def sign(self) -> str:
        if self.strategic < self.greedy:
            return "<"
        if self.strategic == self.greedy:
            return "="
        return ">"


@dataclass
class CellSummary:
    graph_class: str
    k: int
    T: int
    feedback: str
    chi_lt: list = field(default_factory=list)
    chi_eq: list = field(default_factory=list)
    chi_gt: list = field(default_factory=list)
    plan_seconds: float = 0.0
    plan_calls: int = 0
    rejected: int = 0

    @staticmethod
    def _stats(xs):
        mean = sum(xs) / len(xs)
        return mean, math.sqrt(sum((x - mean) ** 2 for x in xs) / len(xs))

    def row(self) -> list:
        lt, eq, gt = (self._stats(x) for x in (self.chi_lt, self.chi_eq, self.chi_gt))
        ms = 1000 * self.plan_seconds / self.plan_calls if self.plan_calls else 0.0
        return [
            self.graph_class, self.k, self.T, self.feedback,
            f"{lt[0]:.2f}", f"{lt[1]:.2f}", f"{eq[0]:.2f}", f"{eq[1]:.2f}",
            f"{gt[0]:.2f}", f"{gt[1]:.2f}", f"{ms:.3f}",
        ]


@dataclass
class ExperimentSummary:
    cells: list
    results: list

    def csv(self) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        writer = csv.writer(out, lineterminator="\n")
        for cell in self.cells:
            writer.writerow(cell.row())
        return out.getvalue()


def instance_seed(cfg: ExperimentConfig, k, T, rep, index, attempt) -> list:
    cls = list(CLASSES).index(cfg.graph_class)
    fb = 0 if cfg.feedback is Feedback.PERFECT else 1
    return [cfg.seed, cls, k, T, rep, index, attempt, fb]


def play_instance(cfg: ExperimentConfig, k: int, T: int, rep: int, index: int) -> InstanceResult:
    """Greedy and strategic games on one instance; regenerate if either evader gets cut off."""
    for attempt in range(MAX_REJECTIONS + 1):
        seed = instance_seed(cfg, k, T, rep, index, attempt)
        truth = generate(cfg.generator, seed + [0])
        known = build_A0(truth, seed + [1])
        noise_seed = seed + [2]
        common = dict(
            horizon=T,
            budget=k,
            feedback=cfg.feedback,
            interdictor=cfg.interdictor,
            params=cfg.params,
            seed=noise_seed,
        )
        try:
            greedy = run_game(truth, known, GameConfig(evader="greedy", **common), validate=False)
            strategic = run_game(
                truth, known, GameConfig(evader="strategic", **common), validate=False
            )
        except NoPathError:
            continue
        return InstanceResult(
            k, T, rep, index, greedy.cumulative, strategic.cumulative,
            tuple(strategic.plan_seconds), attempt,
        )
    raise RuntimeError(f"no feasible instance for k={k}, T={T} after {MAX_REJECTIONS} redraws")


def _task(args):
    return play_instance(*args)


def run_experiment(cfg: ExperimentConfig, progress=None) -> ExperimentSummary:
    tasks = [
        (cfg, k, T, rep, i)
        for k in cfg.ks
        for T in cfg.Ts
        for rep in range(cfg.reps)
        for i in range(cfg.Q)
    ]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = []
            for r in pool.map(_task, tasks, chunksize=4):
                results.append(r)
                if progress:
                    progress(r)
    else:
        results = []
        for t in tasks:
            results.append(_task(t))
            if progress:
                progress(results[-1])
    return summarize(cfg, results)


def summarize(cfg: ExperimentConfig, results: Sequence[InstanceResult]) -> ExperimentSummary:
    cells = []
    for k in cfg.ks:
        for T in cfg.Ts:
            cell = CellSummary(cfg.graph_class, k, T, cfg.feedback.value)
            for rep in range(cfg.reps):
                group = [r for r in results if r.k == k and r.T == T and r.rep == rep]
                counts = {"<": 0, "=": 0, ">": 0}
                for r in group:
                    counts[r.sign] += 1
                    cell.plan_seconds += sum(r.plan_seconds)
                    cell.plan_calls += len(r.plan_seconds)
                    cell.rejected += r.rejected
                cell.chi_lt.append(100 * counts["<"] / len(group))
                cell.chi_eq.append(100 * counts["="] / len(group))
                cell.chi_gt.append(100 * counts[">"] / len(group))
            cells.append(cell)
    return ExperimentSummary(cells, list(results))


def parse_csv(text: str) -> list:
    return list(csv.DictReader(io.StringIO(text)))
