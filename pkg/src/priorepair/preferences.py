"""Preference rules: evaluation into leveled statements, conflict restriction,
and the instance-level strong-acyclicity check."""

from __future__ import annotations

from typing import Iterable

from .conflicts import ConflictIndex
from .kernels import scc_labels
from .matcher import holds, match
from .model import (
    Dataset,
    FactRef,
    MetaDatabase,
    PreferenceRule,
    PrefStatement,
    Taxonomy,
    id_key,
)


def _as_id(value, dataset: Dataset) -> str | None:
    if isinstance(value, FactRef) and value.id in dataset:
        return value.id
    return None


def evaluate_rules(
    rules: Iterable[PreferenceRule],
    dataset: Dataset,
    meta: MetaDatabase | None = None,
    taxonomy: Taxonomy | None = None,
    candidates: Iterable[tuple[str, str]] | None = None,
) -> dict[tuple[str, str], int]:
    """Induced pairs mapped to the minimal level of a rule inducing them.

    With ``candidates`` only those ordered pairs are tested (each rule is
    evaluated with its head variables pre-bound), which is what makes large
    inputs tractable when the caller only cares about conflicting pairs.
    """
    levels: dict[tuple[str, str], int] = {}

    def put(pair, level):
        if pair[0] != pair[1] and level < levels.get(pair, level + 1):
            levels[pair] = level

    rules = sorted(rules, key=lambda r: r.level)
    if candidates is not None:
        candidates = list(candidates)
    for rule in rules:
        x1, x2 = rule.head
        if candidates is None:
            for m in match(rule.body, dataset, meta, taxonomy):
                a = _as_id(m.binding.get(x1), dataset)
                b = _as_id(m.binding.get(x2), dataset)
                if a is not None and b is not None:
                    put((a, b), rule.level)
            continue
        for a, b in candidates:
            if a == b or levels.get((a, b), rule.level + 1) <= rule.level:
                continue
            if x1 == x2:
                continue
            seed = {x1: FactRef(a), x2: FactRef(b)}
            if holds(rule.body, dataset, meta, taxonomy, seed):
                put((a, b), rule.level)
    return levels


def statements(levels: dict[tuple[str, str], int]) -> list[PrefStatement]:
    """Level map as sorted PrefStatements."""
    return [
        PrefStatement(a, b, lv)
        for (a, b), lv in sorted(levels.items(), key=lambda kv: (id_key(kv[0][0]), id_key(kv[0][1])))
    ]


def restrict_to_conflicts(stmts: Iterable[PrefStatement], conflicts) -> list[PrefStatement]:
    """Statements whose pair co-occurs in a conflict (ConflictIndex or iterable of conflicts)."""
    if not isinstance(conflicts, ConflictIndex):
        conflicts = ConflictIndex(conflicts)
    pairs = conflicts.pairs
    return [s for s in stmts if s.pair in pairs]


def find_cycle(edges: Iterable[tuple[str, str]]) -> list[tuple[str, str]] | None:
    """One directed cycle as a list of edges, or None when acyclic."""
    edges = sorted(set(edges), key=lambda e: (id_key(e[0]), id_key(e[1])))
    nodes = sorted({v for e in edges for v in e}, key=id_key)
    index = {v: i for i, v in enumerate(nodes)}
    src = [index[a] for a, _ in edges]
    dst = [index[b] for _, b in edges]
    label = scc_labels(len(nodes), src, dst)
    inner = [(a, b) for a, b in edges if label[index[a]] == label[index[b]]]
    if not inner:
        return None
    start = inner[0]
    comp = label[index[start[0]]]
    succ: dict[str, list[str]] = {}
    for a, b in inner:
        if label[index[a]] == comp:
            succ.setdefault(a, []).append(b)
    # walk back from start[1] to start[0] inside the component (BFS for a short witness)
    parent = {start[1]: None}
    queue = [start[1]]
    for v in queue:
        if v == start[0]:
            break
        for w in succ.get(v, ()):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    path = [start[0]]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()  # start[1] ... start[0]
    cycle = [start]
    for a, b in zip(path, path[1:]):
        cycle.append((a, b))
    return cycle


def strong_acyclicity_instance(stmts: Iterable) -> list[tuple[str, str]] | None:
    """None if the full induced relation is acyclic, else a witness cycle."""
    return find_cycle(s.pair if isinstance(s, PrefStatement) else tuple(s) for s in stmts)
