"""Compare the compiled and pure-Python kernels on generated networks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints per-call times of ``shortest`` and ``max_flow`` for both backends
and checks that they return identical results.
"""

import argparse
import random
import timeit
from array import array

from seqinterdict.generators import default_config, generate
from seqinterdict.kernel import CTopology, PyTopology


def workload(g, rng, count):
    m = len(g.arcs)
    costs = array("q", g.costs)
    masks = [bytes(1 if rng.random() < 0.1 else 0 for _ in range(m)) for _ in range(count)]
    uncapped = bytes(m)
    return costs, masks, uncapped


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()
    if CTopology is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return
    rng = random.Random(0)
    print(f"{'class':9} {'arcs':>5} {'op':9} {'python_us':>10} {'cython_us':>10} {'speedup':>8}")
    for name in ("layered", "uniform", "ba"):
        g = generate(default_config(name), 0)
        tails = [a.tail for a in g.arcs]
        heads = [a.head for a in g.arcs]
        topo = {"py": PyTopology(g.node_count, tails, heads), "c": CTopology(g.node_count, tails, heads)}
        costs, masks, uncapped = workload(g, rng, args.repeat)
        s, f = g.source, g.sink
        for b in masks:
            assert topo["py"].shortest(b, costs, s, f) == topo["c"].shortest(b, costs, s, f)
            assert topo["py"].max_flow(b, uncapped, s, f, 11) == topo["c"].max_flow(b, uncapped, s, f, 11)
        for op in ("shortest", "max_flow"):
            times = {}
            for key, t in topo.items():
                if op == "shortest":
                    run = lambda t=t: [t.shortest(b, costs, s, f) for b in masks]
                else:
                    run = lambda t=t: [t.max_flow(b, uncapped, s, f, 11) for b in masks]
                times[key] = min(timeit.repeat(run, number=1, repeat=3)) / len(masks) * 1e6
            print(
                f"{name:9} {len(g.arcs):5d} {op:9} {times['py']:10.1f} {times['c']:10.1f} "
                f"{times['py'] / times['c']:7.1f}x"
            )


if __name__ == "__main__":
    main()
