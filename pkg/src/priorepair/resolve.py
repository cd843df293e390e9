"""Cycle resolution: turn leveled preference statements into an acyclic priority.

Four strategies are provided (``up``, ``down``, ``refined_up``, ``grounded``).
All of them work on level-bounded subgraphs with SCC and reachability
kernels; cycles are never enumerated.
"""

from __future__ import annotations

from array import array
from typing import Iterable

from .kernels import reach_pairs, reachable, scc_labels
from .model import PrefStatement, id_key

Pair = tuple[str, str]


class EdgeGraph:
    """Preference statements as an indexed, leveled edge list."""

    def __init__(self, statements: Iterable[PrefStatement | tuple]):
        best: dict[Pair, int] = {}
        for s in statements:
            if isinstance(s, PrefStatement):
                a, b, lv = s.src, s.dst, s.level
            else:
                a, b, lv = s
            if a == b:
                continue
            if lv < best.get((a, b), lv + 1):
                best[(a, b)] = lv
        order = sorted(best, key=lambda e: (id_key(e[0]), id_key(e[1])))
        self.nodes = sorted({v for e in order for v in e}, key=id_key)
        self.index = {v: i for i, v in enumerate(self.nodes)}
        self.pairs: list[Pair] = order
        self.level: list[int] = [best[e] for e in order]
        self.src = array("i", (self.index[a] for a, _ in order))
        self.dst = array("i", (self.index[b] for _, b in order))
        self.levels = sorted(set(self.level))

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def statements(self) -> list[PrefStatement]:
        return [PrefStatement(a, b, lv) for (a, b), lv in zip(self.pairs, self.level)]

    def on_cycle(self, edges: list[int]) -> list[bool]:
        """For each edge index in ``edges``: does it lie on a cycle of that subgraph?"""
        src = array("i", (self.src[e] for e in edges))
        dst = array("i", (self.dst[e] for e in edges))
        label = scc_labels(self.n_nodes, src, dst)
        return [label[u] == label[v] for u, v in zip(src, dst)]

    def reach(self, edges: list[int], origin: int) -> bytearray:
        src = array("i", (self.src[e] for e in edges))
        dst = array("i", (self.dst[e] for e in edges))
        return reachable(self.n_nodes, src, dst, origin)

    def result(self, kept: Iterable[int]) -> list[Pair]:
        return [self.pairs[e] for e in sorted(kept)]


def _graph(g) -> EdgeGraph:
    return g if isinstance(g, EdgeGraph) else EdgeGraph(g)


def resolve_up(graph) -> list[Pair]:
    """Longest acyclic prefix of levels."""
    g = _graph(graph)
    kept: list[int] = []
    for lv in g.levels:
        trial = kept + [e for e in range(len(g)) if g.level[e] == lv]
        if any(g.on_cycle(trial)):
            break
        kept = trial
    return g.result(kept)


def resolve_down(graph) -> list[Pair]:
    """Keep an edge iff it is on no cycle among the edges of its level or lower."""
    g = _graph(graph)
    kept: list[int] = []
    for lv in g.levels:
        sub = [e for e in range(len(g)) if g.level[e] <= lv]
        for e, cyc in zip(sub, g.on_cycle(sub)):
            if g.level[e] == lv and not cyc:
                kept.append(e)
    return g.result(kept)


def resolve_refined_up(graph) -> list[Pair]:
    """Level by level, add the edges that close no cycle with what is kept so far."""
    g = _graph(graph)
    kept: list[int] = []
    for lv in g.levels:
        fresh = [e for e in range(len(g)) if g.level[e] == lv]
        trial = kept + fresh
        flags = g.on_cycle(trial)[len(kept):]
        kept += [e for e, cyc in zip(fresh, flags) if not cyc]
    return g.result(kept)


def _closing(g: EdgeGraph, usable: list[int], targets: list[int]) -> set[int]:
    """Edges ``t`` in ``targets`` with a path dst(t) -> src(t) over ``usable``
    edges whose level is at most level(t)."""
    out: set[int] = set()
    for lv in g.levels:
        group = [t for t in targets if g.level[t] == lv]
        if not group:
            continue
        sub = [e for e in usable if g.level[e] <= lv]
        if not sub:
            continue
        src = array("i", (g.src[e] for e in sub))
        dst = array("i", (g.dst[e] for e in sub))
        origins = array("i", (g.dst[t] for t in group))
        goals = array("i", (g.src[t] for t in group))
        hits = reach_pairs(g.n_nodes, src, dst, origins, goals)
        out.update(t for t, hit in zip(group, hits) if hit)
    return out


def resolve_grounded(graph) -> list[Pair]:
    """Grounded extension of the edge-level argumentation framework.

    An edge is attacked by a set A when A closes a cycle with it using edges of
    level at most its own; it is defended when every such cycle contains an
    edge attacked by A.  Iterating from the empty set reaches the fixpoint in
    at most one round per level.
    """
    g = _graph(graph)
    everything = list(range(len(g)))
    chosen: set[int] = set()
    while True:
        attacked = _closing(g, sorted(chosen), everything)
        free = [e for e in everything if e not in attacked]
        defended = set(everything) - _closing(g, free, everything)
        if defended == chosen:
            break
        chosen = defended
    return g.result(chosen)


STRATEGIES = {
    "u": resolve_up,
    "d": resolve_down,
    "ru": resolve_refined_up,
    "g": resolve_grounded,
}


def resolve(strategy: str, graph) -> list[Pair]:
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r} (expected one of u, d, ru, g)") from None
    return fn(graph)
