"""Brute-force reference implementations.

Everything here is exponential on purpose and guarded by size caps
(``PRIOREPAIR_ORACLE_CAP`` overrides the default fact cap of 20).
Sets of facts are Python ints used as bitmasks over a fixed id order.
"""

from __future__ import annotations

import os
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .model import id_key

DEFAULT_CAP = 20
DEFAULT_PAIR_CAP = 16

SEMANTICS = ("brave", "AR", "IAR")
REPAIR_KINDS = ("S", "P", "C")


class OracleCapExceeded(RuntimeError):
    pass


def fact_cap() -> int:
    raw = os.environ.get("PRIOREPAIR_ORACLE_CAP")
    return int(raw) if raw else DEFAULT_CAP


class Universe:
    """Fixed ordering of fact ids with mask helpers."""

    def __init__(self, ids: Iterable[str], cap: int | None = None):
        self.ids = sorted(set(ids), key=id_key)
        limit = fact_cap() if cap is None else cap
        if len(self.ids) > limit:
            raise OracleCapExceeded(f"{len(self.ids)} facts exceed the oracle cap of {limit}")
        self.bit = {f: 1 << i for i, f in enumerate(self.ids)}
        self.full = (1 << len(self.ids)) - 1

    def mask(self, facts: Iterable[str]) -> int:
        m = 0
        for f in facts:
            m |= self.bit[f]
        return m

    def members(self, mask: int) -> frozenset[str]:
        return frozenset(f for f, b in self.bit.items() if mask & b)


def _conflict_masks(u: Universe, conflicts) -> list[int]:
    return [u.mask(c) for c in conflicts]


def _consistent(mask: int, cmasks: Sequence[int]) -> bool:
    return not any(c & mask == c for c in cmasks)


def enumerate_repairs(ids: Iterable[str], conflicts, cap: int | None = None) -> list[frozenset[str]]:
    """All inclusion-maximal subsets of ``ids`` containing no conflict."""
    u = Universe(ids, cap)
    return [u.members(m) for m in _repair_masks(u, _conflict_masks(u, conflicts))]


def _repair_masks(u: Universe, cmasks: list[int]) -> list[int]:
    n = len(u.ids)
    by_fact = [[c for c in cmasks if c >> i & 1] for i in range(n)]
    out = []

    def closes(mask, i):
        return any(c & (mask | 1 << i) == c for c in by_fact[i])

    def go(i, mask):
        if i == n:
            if all(mask >> j & 1 or closes(mask, j) for j in range(n)):
                out.append(mask)
            return
        if not closes(mask, i):
            go(i + 1, mask | 1 << i)
        go(i + 1, mask)

    go(0, 0)
    return out


def _consistent_masks(u: Universe, cmasks: list[int]) -> list[int]:
    return [m for m in range(u.full + 1) if _consistent(m, cmasks)]


def _dominance(u: Universe, priority: Iterable[tuple[str, str]]) -> list[int]:
    dom = [0] * len(u.ids)
    for a, b in priority:
        dom[u.ids.index(a)] |= u.bit[b]
    return dom


def _improvable(r: int, consistent: list[int], dom: list[int]) -> bool:
    """Is there a consistent B with some beta in B\\R beating every alpha in R\\B?"""
    for b in consistent:
        new = b & ~r
        if not new:
            continue
        lost = r & ~b
        while new:
            low = new & -new
            if lost & ~dom[low.bit_length() - 1] == 0:
                return True
            new ^= low
    return False


def pareto_optimal(repairs, priority, conflicts, ids, cap: int | None = None) -> list[frozenset[str]]:
    u = Universe(ids, cap)
    cmasks = _conflict_masks(u, conflicts)
    consistent = _consistent_masks(u, cmasks)
    dom = _dominance(u, priority)
    return [r for r in repairs if not _improvable(u.mask(r), consistent, dom)]


def _free_pairs(u: Universe, conflicts, priority) -> list[tuple[int, int]]:
    ordered = {(a, b) for a, b in priority} | {(b, a) for a, b in priority}
    pairs = set()
    for c in conflicts:
        for a, b in combinations(sorted(c, key=id_key), 2):
            if (a, b) not in ordered:
                pairs.add((u.ids.index(a), u.ids.index(b)))
    return sorted(pairs)


def _reaches(dom: list[int], start: int, goal: int) -> bool:
    seen = 1 << start
    todo = [start]
    while todo:
        v = todo.pop()
        if v == goal:
            return True
        nxt = dom[v] & ~seen
        seen |= nxt
        while nxt:
            low = nxt & -nxt
            todo.append(low.bit_length() - 1)
            nxt ^= low
    return False


def completion_optimal(
    repairs, priority, conflicts, ids, cap: int | None = None, pair_cap: int | None = None
) -> list[frozenset[str]]:
    """Repairs that are Pareto-optimal for at least one acyclic completion.

    Orientations are enumerated by backtracking; a branch is cut as soon as it
    closes a cycle or already admits a Pareto improvement (improvements only
    survive when the relation grows).
    """
    u = Universe(ids, cap)
    cmasks = _conflict_masks(u, conflicts)
    consistent = _consistent_masks(u, cmasks)
    base = _dominance(u, priority)
    pairs = _free_pairs(u, conflicts, priority)
    limit = DEFAULT_PAIR_CAP if pair_cap is None else pair_cap
    if len(pairs) > limit:
        raise OracleCapExceeded(f"{len(pairs)} unordered pairs exceed the completion cap of {limit}")
    out = []
    for rep in repairs:
        r = u.mask(rep)
        if _completable(r, pairs, list(base), consistent):
            out.append(rep)
    return out


def _completable(r: int, pairs, dom: list[int], consistent: list[int]) -> bool:
    if _improvable(r, consistent, dom):
        return False

    def go(k):
        if k == len(pairs):
            return True
        a, b = pairs[k]
        # try the orientation that favours the repair first
        options = [(a, b), (b, a)]
        if not (r >> a & 1) and r >> b & 1:
            options.reverse()
        for x, y in options:
            if _reaches(dom, y, x):
                continue
            dom[x] |= 1 << y
            if not _improvable(r, consistent, dom) and go(k + 1):
                dom[x] &= ~(1 << y)
                return True
            dom[x] &= ~(1 << y)
        return False

    return go(0)


def optimal_repairs(kind: str, ids, conflicts, priority, cap=None, pair_cap=None) -> list[frozenset[str]]:
    ids = list(ids)
    reps = enumerate_repairs(ids, conflicts, cap)
    if kind == "S":
        return reps
    if kind == "P":
        return pareto_optimal(reps, priority, conflicts, ids, cap)
    if kind == "C":
        return completion_optimal(reps, priority, conflicts, ids, cap, pair_cap)
    raise ValueError(f"unknown repair kind {kind!r}")


def entailed_naive(semantics: str, repairs: list[frozenset[str]], causes: Iterable[frozenset]) -> bool:
    """Entailment by direct quantification over ``repairs``."""
    causes = [frozenset(c) for c in causes]
    if semantics == "brave":
        return any(c <= r for r in repairs for c in causes)
    if semantics == "AR":
        return all(any(c <= r for c in causes) for r in repairs)
    if semantics == "IAR":
        if not repairs:
            return bool(causes)
        common = frozenset.intersection(*repairs)
        return any(c <= common for c in causes)
    raise ValueError(f"unknown semantics {semantics!r}")


def decide_naive(semantics, kind, causes, ids, conflicts, priority, cap=None, pair_cap=None) -> bool:
    reps = optimal_repairs(kind, ids, conflicts, priority, cap, pair_cap)
    return entailed_naive(semantics, reps, causes)


# -- leveled edge graphs -------------------------------------------------


def _edges(graph) -> dict[tuple[str, str], int]:
    pairs = getattr(graph, "pairs", None)
    if pairs is not None:
        return dict(zip(pairs, graph.level))
    out: dict[tuple[str, str], int] = {}
    for s in graph:
        a, b, lv = (s.src, s.dst, s.level) if hasattr(s, "src") else s
        if a != b and lv < out.get((a, b), lv + 1):
            out[(a, b)] = lv
    return out


def edge_cycles(edges: Iterable[tuple[str, str]]) -> list[frozenset[tuple[str, str]]]:
    """Edge sets of the simple cycles (the conflicts of the cycle KB)."""
    g = nx.DiGraph()
    g.add_edges_from(edges)
    out = []
    for nodes in nx.simple_cycles(g):
        out.append(frozenset(zip(nodes, nodes[1:] + nodes[:1])))
    return out


def _sorted_pairs(pairs) -> list[tuple[str, str]]:
    return sorted(pairs, key=lambda e: (id_key(e[0]), id_key(e[1])))


def poss_nondef_grd(graph):
    """(Poss, NonDef, Grd) of the cycle KB, from explicit cycle enumeration."""
    level = _edges(graph)
    cycles = edge_cycles(level)
    levels = sorted(set(level.values()))
    cyc_level = [max(level[e] for e in c) for c in cycles]

    poss: set = set()
    for lv in levels:
        if any(cl <= lv for cl in cyc_level):
            break
        poss |= {e for e, l in level.items() if l == lv}

    nondef: set = set()
    for lv in levels:
        prefix = {e for e, l in level.items() if l <= lv}
        busy = set().union(*[c for c, cl in zip(cycles, cyc_level) if cl <= lv]) if cycles else set()
        nondef |= prefix - busy

    # attacks (C \ {e}, e) where e carries the maximal level of cycle C
    attacks: dict[tuple[str, str], list[frozenset]] = {e: [] for e in level}
    for c, cl in zip(cycles, cyc_level):
        for e in c:
            if level[e] == cl:
                attacks[e].append(c - {e})
    chosen: set = set()
    while True:
        hit = {e for e, atts in attacks.items() if any(s <= chosen for s in atts)}
        nxt = {e for e, atts in attacks.items() if all(s & hit for s in atts)}
        if nxt == chosen:
            break
        chosen = nxt
    return _sorted_pairs(poss), _sorted_pairs(nondef), _sorted_pairs(chosen)


def down_removal_loop(graph) -> list[tuple[str, str]]:
    """The top-down removal procedure, run literally with explicit cycles."""
    level = _edges(graph)
    current = set(level)
    n = max(level.values(), default=0)
    i = n
    while i >= 1:
        cycles = edge_cycles(current)
        if not cycles:
            break
        on_cycle = set().union(*cycles)
        current -= {e for e in on_cycle if level[e] == i}
        i -= 1
    return _sorted_pairs(current)


def is_acyclic(edges: Iterable[tuple[str, str]]) -> bool:
    g = nx.DiGraph()
    g.add_edges_from(edges)
    return nx.is_directed_acyclic_graph(g)
