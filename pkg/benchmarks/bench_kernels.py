"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import itertools
import timeit

import numpy as np

from idmtree import _kernels
from idmtree.experiment import default_network, sample
from idmtree.graph import SetWeightedGraph, build_graph, detect_strong_exact
from idmtree.idm import mi_interval
from idmtree.special import HContext, h_family, polygamma


def interval_dominance(m, seed=0):
    rng = np.random.default_rng(seed)
    edges = list(itertools.combinations(range(m), 2))
    lo = rng.random(len(edges))
    iv = {e: (a, a + 0.2 * b) for e, a, b in zip(edges, lo, rng.random(len(edges)))}
    g = SetWeightedGraph.from_intervals([str(k) for k in range(m)], iv)
    ea, eb = g.endpoints()
    return g.dominance_matrix(), ea, eb, m


def cases():
    z = np.linspace(0.5, 500.0, 100_000)
    u = np.linspace(0.0, 1.0, 100_000)
    ctx = HContext(70, 1.0)
    tables = [np.random.default_rng(k).integers(0, 20, (3, 3)) for k in range(200)]
    dom40 = interval_dominance(40)
    ds = sample(default_network(), 70, 0)
    return {
        "polygamma x3, 1e5 points": lambda: [polygamma(k, z) for k in (0, 1, 2)],
        "h/h'/h'' x3, 1e5 points": lambda: [h_family(k, u, ctx) for k in (0, 1, 2)],
        "mi_interval, 200 3x3 tables": lambda: [mi_interval(t) for t in tables],
        "strong mask, m=40": lambda: _kernels.active.strong_exact_mask(*dom40),
        "learn exact, 8 vars n=70": lambda: detect_strong_exact(build_graph(ds)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _kernels.available()
    results = {}
    for name in backends:
        previous = _kernels.use(name)
        try:
            for label, fn in cases().items():
                fn()  # warm-up
                results[label, name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        finally:
            _kernels.use(previous)
    width = max(len(label) for label, _ in results)
    print(f"{'case':<{width}}  " + "  ".join(f"{b:>10}" for b in backends)
          + ("     speedup" if len(backends) > 1 else ""))
    for label in dict.fromkeys(label for label, _ in results):
        row = [results[label, b] for b in backends]
        line = f"{label:<{width}}  " + "  ".join(f"{t * 1e3:>8.2f}ms" for t in row)
        if "python" in backends and "cython" in backends:
            line += f"  {results[label, 'python'] / results[label, 'cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
