"""Compare the compiled and pure-Python graph kernels.

    python3 benchmarks/bench_kernels.py [--nodes N] [--degree D] [--repeat R]

Prints one line per kernel with the best-of-R wall time of each backend and
the speedup.  Also times resolve_grounded end to end on a generated instance,
once per backend, since that is where the kernels matter in practice.
"""

from __future__ import annotations

import argparse
import random
import tempfile
import time
from array import array
from pathlib import Path

from priorepair import kernels
from priorepair.conflicts import ConflictIndex, conflicts
from priorepair.generate import Params, generate
from priorepair.pipeline import load_kb
from priorepair.preferences import evaluate_rules, restrict_to_conflicts, statements
from priorepair.resolve import EdgeGraph, _closing


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_graph(n, degree, seed=0):
    rng = random.Random(seed)
    m = n * degree
    return array("i", (rng.randrange(n) for _ in range(m))), array("i", (rng.randrange(n) for _ in range(m)))


def grounded_workload(facts):
    d = Path(tempfile.mkdtemp())
    generate(Params(facts=facts, conflict_rate=0.3, max_arity=2, levels=3, seed=0)).write(d)
    kb = load_kb(d / "gen.dkb", d / "gen.dc", d / "gen.meta", d / "gen.prefs")
    idx = ConflictIndex(conflicts(kb.dataset, kb.constraints))
    levels = evaluate_rules(kb.rules, kb.dataset, kb.meta, kb.taxonomy, candidates=idx.pairs)
    return EdgeGraph(restrict_to_conflicts(statements(levels), idx))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=20000)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--queries", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--facts", type=int, default=20000)
    args = ap.parse_args(argv)

    if kernels._c is None:
        print("compiled kernels are not available; only the Python backend can be timed")
    n = args.nodes
    src, dst = random_graph(n, args.degree)
    rng = random.Random(1)
    origins = array("i", (rng.randrange(n) for _ in range(args.queries)))
    goals = array("i", (rng.randrange(n) for _ in range(args.queries)))

    cases = {
        "scc_labels": lambda b: kernels.scc_labels(n, src, dst, backend=b),
        "reachable": lambda b: kernels.reachable(n, src, dst, 0, backend=b),
        "reach_pairs": lambda b: kernels.reach_pairs(n, src, dst, origins, goals, backend=b),
    }
    print(f"graph: {n} nodes, {len(src)} edges, {args.queries} reachability queries")
    backends = ["python"] + (["cython"] if kernels._c is not None else [])
    for name, fn in cases.items():
        times = {b: best_of(lambda: fn(b), args.repeat) for b in backends}
        line = f"{name:12s} python {times['python'] * 1e3:9.1f} ms"
        if "cython" in times:
            line += f"   cython {times['cython'] * 1e3:8.2f} ms   x{times['python'] / times['cython']:.0f}"
        print(line)

    g = grounded_workload(args.facts)
    every = list(range(len(g)))
    print(f"closing test on a generated instance: {args.facts} facts, {len(g)} preference edges")
    saved = kernels.BACKEND
    try:
        for b in backends:
            kernels.BACKEND = b
            t = best_of(lambda: _closing(g, every, every), args.repeat)
            print(f"{'_closing':12s} {b:6s} {t * 1e3:9.1f} ms")
    finally:
        kernels.BACKEND = saved


if __name__ == "__main__":
    main()
