"""``priorepair`` command line.

Machine output is JSON lines on stdout; ``--pretty`` indents it instead.
Input problems exit with status 2 and a message on stderr; an oracle size cap
being exceeded exits with status 3.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .asp import AspError, emit_input, emit_minconf, emit_priority, emit_semantics
from .generate import GenerationError, Params, generate
from .conflicts import conflicts
from .model import FactRef, id_key, sort_ids, value_key
from .oracle import OracleCapExceeded, optimal_repairs
from .pipeline import InputError, induced_cycle, load_kb, prioritize
from .resolve import STRATEGIES
from .semantics import REPAIR_KINDS, SEMANTICS, Engine

EXIT_INPUT = 2
EXIT_CAP = 3


def _plain(v):
    if isinstance(v, FactRef):
        return str(v)
    return v


class _Out:
    def __init__(self, pretty: bool, stream=None):
        self.pretty = pretty
        self.stream = stream or sys.stdout

    def line(self, obj) -> None:
        if self.pretty:
            text = json.dumps(obj, indent=2, ensure_ascii=False, default=str)
        else:
            text = json.dumps(obj, separators=(",", ":"), ensure_ascii=False, default=str)
        self.stream.write(text + "\n")


def _kb_args(p: argparse.ArgumentParser, need_queries=False) -> None:
    p.add_argument("--data", required=True, help="dataset file (.dkb)")
    p.add_argument("--constraints", help="denial constraints (.dc)")
    p.add_argument("--meta", help="meta-database (.meta)")
    p.add_argument("--rules", help="leveled preference rules (.prefs)")
    p.add_argument("--taxonomy", help="predicate taxonomy (.tax)")
    p.add_argument("--queries", required=need_queries, help="query rewritings (.ucq)")


def _load(args):
    return load_kb(
        args.data,
        constraints=args.constraints,
        meta=args.meta,
        rules=args.rules,
        queries=getattr(args, "queries", None),
        taxonomy=args.taxonomy,
    )


def _warn_cycle(kb) -> None:
    cyc = induced_cycle(kb)
    if cyc:
        path = " -> ".join([a for a, _ in cyc] + [cyc[-1][1]])
        print(f"note: preference rules induce a cycle on this instance: {path}", file=sys.stderr)


def cmd_conflicts(args, out: _Out) -> int:
    kb = _load(args)
    found = [list(c) for c in conflicts(kb.dataset, kb.constraints)]
    out.line(found)
    return 0


def cmd_priority(args, out: _Out) -> int:
    kb = _load(args)
    _warn_cycle(kb)
    pr = prioritize(kb, args.strategy)
    out.line([{"from": a, "to": b} for a, b in pr.priority])
    return 0


def cmd_answer(args, out: _Out) -> int:
    kb = _load(args)
    if not kb.queries:
        raise InputError(f"{args.queries}: no queries")
    pr = prioritize(kb, args.strategy)
    engine = Engine(kb, pr.priority, pr.conflicts)
    sems = list(SEMANTICS) if args.sem == "all" else [args.sem]
    kinds = list(REPAIR_KINDS) if args.repair == "all" else [args.repair]

    jobs = []
    for q in kb.queries:
        for ans, causes in sorted(engine.causes(q, args.exact_causes).items(), key=lambda kv: _tuple_key(kv[0])):
            for kind in kinds:
                for sem in sems:
                    jobs.append((q.name, ans, kind, sem, causes))

    def run(job):
        _, _, kind, sem, causes = job
        return engine.decide(sem, kind, causes)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]

    for (name, ans, kind, sem, _), ok in zip(jobs, results):
        out.line(
            {
                "query": name,
                "semantics": f"{kind}-{sem}",
                "tuple": [_plain(v) for v in ans],
                "entailed": ok,
            }
        )
    return 0


def _tuple_key(ans: tuple):
    return tuple(value_key(v) for v in ans)


def cmd_repairs(args, out: _Out) -> int:
    kb = _load(args)
    pr = prioritize(kb, args.strategy)
    reps = optimal_repairs(
        args.kind, kb.dataset.ids(), pr.conflicts, pr.priority, cap=args.cap, pair_cap=args.pair_cap
    )
    rows = sorted((sort_ids(r) for r in reps), key=lambda r: [id_key(f) for f in r])
    for r in rows:
        out.line(r)
    return 0


def cmd_emit_asp(args, out: _Out) -> int:
    what = args.program
    if what == "priority":
        sys.stdout.write(emit_priority(args.strategy))
        return 0
    if what == "minconf":
        sys.stdout.write(emit_minconf())
        return 0
    if what == "semantics":
        sys.stdout.write(emit_semantics(args.repair, args.sem))
        return 0
    if not args.data:
        raise InputError("emit-asp input: --data is required")
    kb = _load(args)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            emitted = emit_input(kb.dataset, kb.meta, kb.constraints, kb.queries, kb.rules, kb.taxonomy)
    except AspError as exc:
        raise InputError(str(exc)) from exc
    for w in emitted.warnings:
        print(f"warning: {w}", file=sys.stderr)
    progs = emitted.programs()
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        for name, text in progs.items():
            (d / f"{name}.lp").write_text(text, encoding="utf-8")
        (d / "names.json").write_text(json.dumps(emitted.names.table(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    else:
        sys.stdout.write("".join(f"% {name}\n{text}" for name, text in progs.items()))
    return 0


def cmd_gen(args, out: _Out) -> int:
    params = Params(
        facts=args.facts,
        conflict_rate=args.conflict_rate,
        max_arity=args.max_arity,
        levels=args.levels,
        pref_density=args.pref_density,
        seed=args.seed,
    )
    inst = generate(params)
    for p in inst.write(args.out, args.stem):
        out.line(str(p))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="priorepair", description="Prioritized repair-based query answering.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--pretty", action="store_true", help="indented JSON")
        p.set_defaults(func=fn)
        return p

    p = add("conflicts", cmd_conflicts, "list the minimal conflicts")
    _kb_args(p)

    p = add("priority", cmd_priority, "resolve preference rules into a priority relation")
    _kb_args(p)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="g")

    p = add("answer", cmd_answer, "decide query answers under a repair semantics")
    _kb_args(p, need_queries=True)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="g")
    p.add_argument("--repair", choices=list(REPAIR_KINDS) + ["all"], default="P")
    p.add_argument("--sem", choices=list(SEMANTICS) + ["all"], default="AR")
    p.add_argument("--exact-causes", action="store_true", help="drop inconsistent and non-minimal causes first")
    p.add_argument("--jobs", type=int, default=1)

    p = add("repairs", cmd_repairs, "enumerate optimal repairs by brute force (small inputs only)")
    _kb_args(p)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="g")
    p.add_argument("--kind", choices=list(REPAIR_KINDS), default="S")
    p.add_argument("--cap", type=int, default=None, help="max facts (default from PRIOREPAIR_ORACLE_CAP or 20)")
    p.add_argument("--pair-cap", type=int, default=None, help="max unordered conflicting pairs for C")

    p = add("emit-asp", cmd_emit_asp, "print logic programs")
    p.add_argument("program", choices=["input", "priority", "minconf", "semantics"])
    p.add_argument("--data")
    p.add_argument("--constraints")
    p.add_argument("--meta")
    p.add_argument("--rules")
    p.add_argument("--taxonomy")
    p.add_argument("--queries")
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="g")
    p.add_argument("--repair", choices=list(REPAIR_KINDS), default="P")
    p.add_argument("--sem", choices=list(SEMANTICS), default="AR")
    p.add_argument("--out", help="directory for the input programs (default: stdout)")

    p = add("gen", cmd_gen, "write a synthetic instance")
    p.add_argument("--facts", type=int, required=True)
    p.add_argument("--conflict-rate", type=float, default=0.2)
    p.add_argument("--max-arity", type=int, default=2)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--pref-density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.add_argument("--stem", default="gen")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    out = _Out(args.pretty)
    try:
        return args.func(args, out)
    except (InputError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OracleCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
