"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (lines are printed even
under output capture) or as a script: ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time
import warnings
from pathlib import Path

import pytest

from priorepair.asp import emit_minconf, emit_priority, emit_semantics
from priorepair.oracle import (
    down_removal_loop,
    enumerate_repairs,
    entailed_naive,
    is_acyclic,
    optimal_repairs,
    pareto_optimal,
    completion_optimal,
    poss_nondef_grd,
)
from priorepair.pipeline import load_kb, prioritize
from priorepair.preferences import evaluate_rules
from priorepair.resolve import resolve
from priorepair.semantics import REPAIR_KINDS, SEMANTICS, Engine

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from tests.conftest import GOLDEN, running_paths, rug_paths  # noqa: E402
from tests.randkb import random_kb, random_leveled_graph  # noqa: E402

N_GRAPHS = 1000
N_KBS = 200
PAIR_CAP = 200  # the completion oracle prunes well enough for these sizes


def line_for(n: int, ok: bool, detail: str, soft: bool = False) -> str:
    tag = "PASS" if ok else ("SOFT-FAIL" if soft else "FAIL")
    return f"[criterion {n}] {tag}: {detail}"


def report(capsys, n: int, ok: bool, detail: str, soft: bool = False) -> None:
    with capsys.disabled():
        print("\n" + line_for(n, ok, detail, soft), flush=True)


def _q(kb, name):
    return next(q for q in kb.queries if q.name == name)


# 1 ----------------------------------------------------------------------


def check_running_example():
    t0 = time.perf_counter()
    kb = load_kb(**running_paths("figure"))
    pr = prioritize(kb, "d")
    ids = kb.dataset.ids()
    reps = enumerate_repairs(ids, pr.conflicts)
    prep = pareto_optimal(reps, pr.priority, pr.conflicts, ids)
    crep = completion_optimal(reps, pr.priority, pr.conflicts, ids)
    eng = Engine(kb, pr.priority, pr.conflicts)
    causes = lambda q, t: eng.causes(_q(kb, q))[t]  # noqa: E731
    verdicts = (
        eng.decide("IAR", "P", causes("qadm", ("b",))),
        eng.decide("brave", "P", causes("qapr", ("b",))),
        eng.decide("AR", "P", causes("qfpr", ("a",))),
        eng.decide("IAR", "C", causes("q1", ("a",))),
    )
    elapsed = time.perf_counter() - t0
    r1, r2, r3 = frozenset({"1", "5", "6"}), frozenset({"2", "5", "6"}), frozenset({"3", "4", "6"})
    problems = []
    if len(pr.conflicts) != 8:
        problems.append(f"{len(pr.conflicts)} conflicts")
    if len(reps) != 6:
        problems.append(f"{len(reps)} repairs")
    if set(prep) != {r1, r2, r3}:
        problems.append(f"PRep={sorted(map(sorted, prep))}")
    if set(crep) != {r1, r2}:
        problems.append(f"CRep={sorted(map(sorted, crep))}")
    if verdicts != (True, False, False, True):
        problems.append(f"verdicts={verdicts}")
    if elapsed >= 1.0:
        problems.append(f"{elapsed:.2f}s")
    return not problems, f"8 conflicts, 6 repairs, PRep/CRep, 4 verdicts in {elapsed:.3f}s" + (
        f" ({'; '.join(problems)})" if problems else ""
    )


# 2 ----------------------------------------------------------------------


def check_sigma_ex():
    kb = load_kb(**running_paths("ex"))
    got = set(evaluate_rules(kb.rules, kb.dataset, kb.meta, kb.taxonomy))
    want = {("2", "1"), ("2", "3"), ("1", "3"), ("6", "7")}
    return got == want, f"induced pairs {sorted(got)}"


# 3 ----------------------------------------------------------------------


def check_rug_examples():
    A, B, G, D = "alpha", "beta", "gamma", "delta"
    want = {
        "rug1": {"ru": {(A, B), (B, G)}, "g": {(A, B), (B, G), (A, G)}},
        "rug2": {"ru": {(A, B), (G, D), (G, B)}, "g": {(A, B), (G, D)}},
    }
    bad = []
    for name, exp in want.items():
        kb = load_kb(**rug_paths(name))
        for strat, pairs in exp.items():
            got = set(prioritize(kb, strat).priority)
            if got != pairs:
                bad.append(f"{name}/{strat}={sorted(got)}")
    return not bad, "ru and g on both examples" + (f" ({'; '.join(bad)})" if bad else "")


# 4 ----------------------------------------------------------------------


def check_strategy_suite():
    t0 = time.perf_counter()
    violations = []
    for seed in range(N_GRAPHS):
        g = random_leveled_graph(seed, max_nodes=10, max_edges=25, max_levels=4)
        edges = {(a, b) for a, b, _ in g}
        u, d, ru, gr = (set(resolve(s, g)) for s in ("u", "d", "ru", "g"))
        poss, nondef, grd = poss_nondef_grd(g)
        ok = (
            all(o <= edges and is_acyclic(o) for o in (u, d, ru, gr))
            and u <= d <= gr
            and u <= d <= ru
            and u == set(poss)
            and d == set(nondef)
            and gr == set(grd)
            and sorted(d) == sorted(down_removal_loop(g))
        )
        if not ok:
            violations.append(seed)
    elapsed = time.perf_counter() - t0
    return not violations and elapsed < 60, (
        f"{N_GRAPHS} graphs, {len(violations)} violations, {elapsed:.1f}s"
        + (f" (seeds {violations[:10]})" if violations else "")
    )


# 5 and 6 ----------------------------------------------------------------


def _answers(r, eng):
    for q in r.kb.queries:
        exact = eng.causes(q, exact=True)
        for ans, causes in eng.causes(q).items():
            yield causes, exact.get(ans, set())


def check_semantics_suite():
    t0 = time.perf_counter()
    mismatches, chain_breaks, decisions = [], [], 0
    for seed in range(N_KBS):
        r = random_kb(seed, max_facts=12, levels=3)
        ids = r.kb.dataset.ids()
        reps = {k: optimal_repairs(k, ids, r.conflicts, r.priority, pair_cap=PAIR_CAP) for k in REPAIR_KINDS}
        eng = Engine(r.kb, r.priority, r.conflicts)
        for causes, exact in _answers(r, eng):
            v = {}
            for k in REPAIR_KINDS:
                for s in SEMANTICS:
                    v[(k, s)] = eng.decide(s, k, causes)
                    decisions += 1
                    if v[(k, s)] != entailed_naive(s, reps[k], exact):
                        mismatches.append((seed, k, s))
            for k in REPAIR_KINDS:
                if not v[(k, "IAR")] <= v[(k, "AR")] <= v[(k, "brave")]:
                    chain_breaks.append((seed, k))
            if not v[("S", "AR")] <= v[("P", "AR")] <= v[("C", "AR")]:
                chain_breaks.append((seed, "AR"))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and not chain_breaks and elapsed < 300
    return ok, (
        f"{N_KBS} KBs, {decisions} decisions, {len(mismatches)} mismatches, "
        f"{len(chain_breaks)} chain breaks, {elapsed:.1f}s" + (f" (first {mismatches[:5]})" if mismatches else "")
    )


def check_empty_priority():
    bad = []
    for seed in range(N_KBS):
        r = random_kb(seed, max_facts=12, levels=3)
        ids = r.kb.dataset.ids()
        s = set(optimal_repairs("S", ids, r.conflicts, []))
        if not (set(optimal_repairs("P", ids, r.conflicts, [])) == s == set(
            optimal_repairs("C", ids, r.conflicts, [], pair_cap=PAIR_CAP)
        )):
            bad.append((seed, "repairs"))
        eng = Engine(r.kb, [], r.conflicts)
        for causes, _ in _answers(r, eng):
            for sem in SEMANTICS:
                if len({eng.decide(sem, k, causes) for k in REPAIR_KINDS}) != 1:
                    bad.append((seed, sem))
    return not bad, f"{N_KBS} KBs with empty priority, {len(bad)} violations"


# 7 ----------------------------------------------------------------------


def check_asp_goldens():
    texts = {f"priority_{s}.lp": emit_priority(s) for s in ("u", "d", "ru", "g")}
    texts["minconf.lp"] = emit_minconf()
    texts["semantics_P_AR.lp"] = emit_semantics("P", "AR")
    bad = [name for name, text in texts.items() if text != (GOLDEN / name).read_text()]
    return not bad, f"{len(texts) - len(bad)}/{len(texts)} programs byte-identical" + (f" (differs: {bad})" if bad else "")


# 8 ----------------------------------------------------------------------

_PERF_SCRIPT = r"""
import json, resource, sys, tempfile, time
from pathlib import Path
from priorepair.generate import Params, generate
from priorepair.pipeline import load_kb
from priorepair.conflicts import ConflictIndex, conflicts
from priorepair.preferences import evaluate_rules, restrict_to_conflicts, statements
from priorepair.resolve import resolve_down
from priorepair import kernels

d = Path(tempfile.mkdtemp())
generate(Params(facts=50000, conflict_rate=0.2, max_arity=2, levels=3, seed=0)).write(d)
kb = load_kb(d / "gen.dkb", d / "gen.dc", d / "gen.meta", d / "gen.prefs")
t0 = time.perf_counter()
conf = conflicts(kb.dataset, kb.constraints)
t1 = time.perf_counter()
idx = ConflictIndex(conf)
stmts = restrict_to_conflicts(
    statements(evaluate_rules(kb.rules, kb.dataset, kb.meta, kb.taxonomy, candidates=idx.pairs)), idx
)
t2 = time.perf_counter()
kept = resolve_down(stmts)
t3 = time.perf_counter()
rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
print(json.dumps({"conflicts": len(conf), "statements": len(stmts), "kept": len(kept),
                  "t_conf": t1 - t0, "t_pref": t2 - t1, "t_down": t3 - t2, "rss": rss,
                  "backend": kernels.BACKEND}))
"""


def check_performance():
    proc = subprocess.run([sys.executable, "-c", _PERF_SCRIPT], capture_output=True, text=True, timeout=600)
    if proc.returncode != 0:
        return False, f"workload crashed: {proc.stderr.strip()[-300:]}"
    m = json.loads(proc.stdout.strip().splitlines()[-1])
    core = m["t_conf"] + m["t_down"]
    gib = m["rss"] / 2**30
    ok = core < 60 and gib < 2
    return ok, (
        f"N=50000: {m['conflicts']} conflicts in {m['t_conf']:.2f}s, resolve_down over {m['statements']} "
        f"statements in {m['t_down']:.2f}s (rule evaluation {m['t_pref']:.2f}s), peak RSS {gib * 1024:.0f} MiB, "
        f"{m['backend']} kernels"
    )


# pytest entry points ----------------------------------------------------


def test_criterion_1_running_example(capsys):
    ok, detail = check_running_example()
    report(capsys, 1, ok, detail)
    assert ok, detail


def test_criterion_2_preference_induction(capsys):
    ok, detail = check_sigma_ex()
    report(capsys, 2, ok, detail)
    assert ok, detail


def test_criterion_3_cycle_resolution_examples(capsys):
    ok, detail = check_rug_examples()
    report(capsys, 3, ok, detail)
    assert ok, detail


def test_criterion_4_strategy_properties(capsys):
    ok, detail = check_strategy_suite()
    report(capsys, 4, ok, detail)
    assert ok, detail


def test_criterion_5_semantics_oracle(capsys):
    ok, detail = check_semantics_suite()
    report(capsys, 5, ok, detail)
    assert ok, detail


def test_criterion_6_empty_priority_collapse(capsys):
    ok, detail = check_empty_priority()
    report(capsys, 6, ok, detail)
    assert ok, detail


def test_criterion_7_asp_goldens(capsys):
    ok, detail = check_asp_goldens()
    report(capsys, 7, ok, detail)
    assert ok, detail


def test_criterion_8_performance_smoke(capsys):
    ok, detail = check_performance()
    report(capsys, 8, ok, detail, soft=True)
    if not ok:
        warnings.warn(f"performance smoke missed its threshold: {detail}")


if __name__ == "__main__":
    checks = [
        check_running_example,
        check_sigma_ex,
        check_rug_examples,
        check_strategy_suite,
        check_semantics_suite,
        check_empty_priority,
        check_asp_goldens,
        check_performance,
    ]
    failed = 0
    for n, fn in enumerate(checks, 1):
        ok, detail = fn()
        print(line_for(n, ok, detail, soft=(n == 8)), flush=True)
        failed += (not ok) and n != 8
    sys.exit(1 if failed else 0)
