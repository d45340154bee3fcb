"""Command-line front end: gen | run | experiment | reduce | check | bench."""

from __future__ import annotations

import argparse
import statistics
import sys
from fractions import Fraction
from pathlib import Path

from seqinterdict.game import Evader, Feedback, GameConfig, Interdictor, NotKSeparable, run_game
from seqinterdict.generators import (
    CLASSES,
    SatFormula,
    build_A0,
    default_config,
    generate,
    random_formula,
    reduce_3sat,
    verify_reduction,
)
from seqinterdict.graph import check_not_k_separable, format_instance, read_instance
from seqinterdict.instances import THREE_CLAUSE_FORMULA
from seqinterdict.policies import HeuristicParams, NoPathError


def int_list(text: str) -> tuple:
    """'1-3,5' -> (1, 2, 3, 5)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return tuple(out)


def _params(args) -> HeuristicParams:
    return HeuristicParams(Fraction(args.alpha).limit_denominator(10**6), args.q)


def _write(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------


def cmd_gen(args) -> int:
    cfg = default_config(args.graph_class)
    g = generate(cfg, args.seed)
    known = build_A0(g, [args.seed, 1])
    comments = [f"class {args.graph_class} seed {args.seed}"]
    if args.k is not None:
        comments.append(f"not {args.k}-separable: {check_not_k_separable(g, args.k)}")
    _write(format_instance(g, known, comments, known_keyword="a0"), args.out)
    return 0


def cmd_run(args) -> int:
    inst = read_instance(args.instance)
    config = GameConfig(
        horizon=args.T,
        budget=args.k,
        feedback=args.feedback,
        interdictor=args.interdictor,
        evader=args.evader,
        params=_params(args),
        seed=args.seed,
    )
    try:
        outcome = run_game(inst.graph, inst.known, config, validate=not args.no_validate)
    except (NotKSeparable, NoPathError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(outcome.log(), args.out)
    return 0


def cmd_experiment(args) -> int:
    from seqinterdict.experiment import ExperimentConfig, run_experiment

    cfg = ExperimentConfig(
        graph_class=args.graph_class,
        ks=args.k,
        Ts=args.T,
        Q=args.Q,
        reps=args.reps,
        feedback=args.feedback,
        interdictor=args.interdictor,
        params=_params(args),
        seed=args.seed,
        jobs=args.jobs,
    )
    summary = run_experiment(cfg)
    _write(summary.csv(), args.out)
    rejected = sum(c.rejected for c in summary.cells)
    if rejected:
        print(f"regenerated {rejected} instances where an evader was cut off", file=sys.stderr)
    return 0


def _formula(args) -> SatFormula:
    if args.formula:
        return SatFormula.parse(Path(args.formula).read_text())
    if args.clauses:
        clauses = [tuple(int(x) for x in c.split(",")) for c in args.clauses.split(";")]
        n = max(abs(x) for c in clauses for x in c)
        return SatFormula(n, tuple(clauses))
    return SatFormula(3, THREE_CLAUSE_FORMULA)


def cmd_reduce(args) -> int:
    formula = _formula(args)
    inst = reduce_3sat(formula, args.k, args.M)
    text = format_instance(inst.graph, inst.initial_known, inst.comments(), known_keyword="a0")
    _write(text, args.out)
    if args.verify:
        check = verify_reduction(inst)
        print(
            f"satisfiable={check.satisfiable} value={check.game_value} h={check.h} ok={check.ok}",
            file=sys.stderr,
        )
        return 0 if check.ok else 1
    return 0


def check_one(suite: str, index: int, seed: int, k_override=None) -> tuple:
    """(instance label, case, ok) for one member of a check suite."""
    from seqinterdict import oracle

    s = seed + index
    if suite == "reduction":
        if index == 0:
            label, formula = "sample", SatFormula(3, THREE_CLAUSE_FORMULA)
        else:
            label = s
            formula = random_formula(s, 1 + s % 3, 1 + (s // 3) % 3)
        check = verify_reduction(reduce_3sat(formula))
        return label, ("sat" if check.satisfiable else "unsat"), check.ok
    k = 1 if suite == "unit-budget" else (k_override if k_override is not None else 2 + index % 2)
    g = oracle.random_distinct_cost_instance(s, k)
    if suite == "unit-budget":
        return s, "k=1", oracle.check_unit_budget_greedy(g)
    if suite == "pair-structure":
        rep = oracle.check_pair_structure(g, k)
        return s, rep.case.value, rep.ok
    if suite == "cheaper-blocked":
        return s, f"k={k}", oracle.check_cheaper_paths_blocked(g, k)
    if suite == "covering-disjoint":
        return s, f"k={k}", oracle.check_covering_budget_disjoint(g, k)
    raise ValueError(f"unknown suite {suite!r}")


def _check_task(args):
    return check_one(*args)


SUITES = ("unit-budget", "pair-structure", "cheaper-blocked", "covering-disjoint", "reduction")


def cmd_check(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    failures = 0
    for suite in suites:
        # the reduction suite adds the three-clause sample formula as member 0
        size = args.count + 1 if suite == "reduction" else args.count
        tasks = [(suite, i, args.seed, args.k) for i in range(size)]
        if args.jobs > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(args.jobs) as pool:
                rows = list(pool.map(_check_task, tasks))
        else:
            rows = map(_check_task, tasks)
        for inst, case, ok in rows:
            label = f"{suite}:{inst}" if len(suites) > 1 else inst
            print(f"instance={label} case={case} ok={ok}", flush=True)
            failures += not ok
    if failures:
        print(f"{failures} check(s) failed", file=sys.stderr)
        return 1
    return 0


def cmd_bench(args) -> int:
    from seqinterdict.experiment import ExperimentConfig, play_instance

    print("k,calls,mean_s,max_s")
    for k in args.k:
        cfg = ExperimentConfig(
            graph_class=args.graph_class, ks=(k,), Ts=(args.T,), Q=args.Q, reps=1,
            interdictor=args.interdictor, params=_params(args), seed=args.seed,
        )
        times = []
        for i in range(args.Q):
            times.extend(play_instance(cfg, k, args.T, 0, i).plan_seconds)
        mean = statistics.fmean(times) if times else 0.0
        print(f"{k},{len(times)},{mean:.4f},{max(times, default=0.0):.4f}", flush=True)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seqinterdict", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--class", dest="graph_class", choices=sorted(CLASSES), default="layered")
        sp.add_argument("--k", type=int_list, default=int_list("1-10"))
        sp.add_argument("--alpha", type=float, default=0.5)
        sp.add_argument("--q", type=int, default=2)
        sp.add_argument("--interdictor", choices=[x.value for x in Interdictor], default="consistent")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--class", dest="graph_class", choices=sorted(CLASSES), default="layered")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--k", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="play one game and print the epoch log")
    r.add_argument("--instance", required=True)
    r.add_argument("--T", type=int, default=2)
    r.add_argument("--k", type=int, default=1)
    r.add_argument("--evader", choices=[x.value for x in Evader], default="greedy")
    r.add_argument("--interdictor", choices=[x.value for x in Interdictor], default="semi-oracle")
    r.add_argument("--feedback", choices=[x.value for x in Feedback], default="perfect")
    r.add_argument("--alpha", type=float, default=0.5)
    r.add_argument("--q", type=int, default=2)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--no-validate", action="store_true", help="skip the k-separability check")
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("experiment", help="greedy vs strategic sweep, CSV output")
    common(e)
    e.add_argument("--T", type=int_list, default=(2, 5, 10))
    e.add_argument("--Q", type=int, default=50)
    e.add_argument("--reps", type=int, default=10)
    e.add_argument("--feedback", choices=[x.value for x in Feedback], default="perfect")
    e.add_argument("--jobs", type=int, default=1)
    e.set_defaults(func=cmd_experiment)

    d = sub.add_parser("reduce", help="build the 3-SAT gadget instance")
    d.add_argument("--formula", help="clause file: one clause of signed literals per line")
    d.add_argument("--clauses", help="inline clauses, e.g. '1,2,3;-1,-2,3'")
    d.add_argument("--k", type=int)
    d.add_argument("--M", type=int, default=2)
    d.add_argument("--verify", action="store_true")
    d.add_argument("--out")
    d.set_defaults(func=cmd_reduce)

    c = sub.add_parser("check", help="run the oracle property suites")
    c.add_argument("--suite", choices=SUITES + ("all",), default="all")
    c.add_argument("--count", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--k", type=int)
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bench", help="time strategic planning per k")
    common(b)
    b.add_argument("--T", type=int, default=10)
    b.add_argument("--Q", type=int, default=5)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
