import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import separable_free_graph
from seqinterdict.game import (
    Feedback,
    GameConfig,
    NotKSeparable,
    apply_feedback,
    noisy_cost,
    run_game,
)
from seqinterdict.graph import Arc, DirectedGraph, shortest_value
from seqinterdict.instances import diamond, diamond_known, doubled_chain, zero_chain_with_shortcuts
from seqinterdict.interdiction import ObservedView
from seqinterdict.oracle import brute_force_two_epoch
from seqinterdict.policies import HeuristicParams


def test_partial_knowledge_traces(diamond_net):
    known = diamond_known(diamond_net)
    greedy = run_game(diamond_net, known, GameConfig(5, 2))
    strategic = run_game(diamond_net, known, GameConfig(5, 2, evader="strategic"))
    assert greedy.cumulative == 27
    assert strategic.cumulative == 26
    assert [r.loss for r in strategic.records] == [4, 4, 6, 6, 6]
    assert strategic.fallbacks == 0


def test_greedy_absorption(diamond_net):
    out = run_game(diamond_net, diamond_known(diamond_net), GameConfig(10, 2))
    recs = out.records
    for i in range(len(recs) - 1):
        if recs[i].blocked == recs[i + 1].blocked and recs[i].traversed == recs[i + 1].traversed:
            assert all(r.blocked == recs[i].blocked and r.traversed == recs[i].traversed for r in recs[i:])
            break
    else:
        pytest.fail("trace never settles")


def test_single_epoch_pays_shortest(diamond_net):
    for evader in ("greedy", "strategic"):
        out = run_game(diamond_net, (), GameConfig(1, 2, evader=evader))
        assert out.cumulative == shortest_value(diamond_net)
        assert out.records[0].blocked == frozenset()


def test_not_k_separable_rejected(doubled_net):
    with pytest.raises(NotKSeparable):
        run_game(doubled_net, (), GameConfig(2, 2))
    assert run_game(doubled_net, (), GameConfig(2, 2), validate=False).cumulative == 10


def test_config_validation():
    with pytest.raises(ValueError):
        GameConfig(0, 1)
    with pytest.raises(ValueError):
        GameConfig(2, 0)
    with pytest.raises(ValueError):
        GameConfig(2, 1, noise_width=Fraction(1))


def test_noise_range():
    rng = np.random.default_rng(0)
    draws = [noisy_cost(rng, 100, Fraction(1, 5)) for _ in range(2000)]
    assert min(draws) >= 80 and max(draws) <= 120
    assert min(draws) == 80 and max(draws) == 120
    assert all(noisy_cost(rng, 0, Fraction(1, 5)) == 0 for _ in range(50))


def test_feedback_first_sighting(diamond_net):
    view = ObservedView(diamond_net, ())
    path = diamond_net.make_path((0, 1, 2))
    perfect = apply_feedback(view, path)
    assert [perfect.observed_cost(a) for a in path.arc_ids] == [1, 1, 1]
    once = apply_feedback(view, path, Feedback.NOISY, {0: 9, 1: 9, 2: 9})
    twice = apply_feedback(once, path, Feedback.NOISY, {0: 5, 1: 5, 2: 5})
    assert [twice.observed_cost(a) for a in path.arc_ids] == [9, 9, 9]
    with pytest.raises(ValueError):
        apply_feedback(view, path, Feedback.NOISY)


def _game_cases():
    rng = random.Random(11)
    for i in range(25):
        g = separable_free_graph(rng, rng.randint(3, 7), rng.randint(8, 18), 2)
        known = [a for a in range(g.arc_count) if rng.random() < 0.3]
        yield i, g, known


@pytest.mark.parametrize("interdictor", ["semi-oracle", "consistent"])
@pytest.mark.parametrize("feedback", ["perfect", "noisy"])
@pytest.mark.parametrize("evader", ["greedy", "strategic"])
def test_trace_invariants(interdictor, feedback, evader):
    for i, g, known in _game_cases():
        cfg = GameConfig(4, 2, feedback, interdictor, evader, seed=i)
        out = run_game(g, known, cfg)
        assert _same(out, run_game(g, known, cfg, validate=False))
        seen = set(known)
        assert out.cumulative == sum(r.loss for r in out.records)
        for r in out.records:
            assert len(r.blocked) <= 2
            assert r.traversed.arc_set.isdisjoint(r.blocked)
            assert r.blocked <= seen
            seen |= r.traversed.arc_set
        assert out.final_knowledge.known == seen
        if feedback == "perfect":
            assert all(out.final_knowledge.observed_cost(a) == g.arcs[a].cost for a in seen)
        else:
            for a in seen - set(known):
                c = g.arcs[a].cost
                assert 0.8 * c <= out.final_knowledge.observed_cost(a) <= 1.2 * c
        if feedback == "perfect" and evader == "strategic":
            assert out.fallbacks == 0


def _same(a, b):
    return a.records == b.records and a.cumulative == b.cumulative and a.final_knowledge == b.final_knowledge


@pytest.mark.parametrize("seed", range(30))
def test_two_epoch_strategic_never_worse_and_oracle_bound(seed):
    rng = random.Random(500 + seed)
    g = separable_free_graph(rng, rng.randint(3, 6), rng.randint(8, 14), 2)
    greedy = run_game(g, (), GameConfig(2, 2)).cumulative
    strategic = run_game(g, (), GameConfig(2, 2, evader="strategic")).cumulative
    best = brute_force_two_epoch(g, (), 2).total
    assert best <= strategic <= greedy


def test_examples_never_fall_back(diamond_net, shortcut_net, doubled_net):
    cases = [(diamond_net, (), 2, 2), (diamond_net, diamond_known(diamond_net), 2, 10), (shortcut_net, (), 3, 2), (doubled_net, (), 2, 2)]
    for g, known, k, T in cases:
        for a in (Fraction(1, 2), Fraction(9, 10)):
            for q in (1, 2, 3):
                out = run_game(g, known, GameConfig(T, k, evader="strategic", params=HeuristicParams(a, q)), validate=False)
                assert out.fallbacks == 0


def test_log_format(diamond_net):
    log = run_game(diamond_net, (), GameConfig(2, 2, evader="strategic")).log()
    assert log.splitlines()[-1] == "L=8"
    assert log.startswith("t=1 I={} P=")
