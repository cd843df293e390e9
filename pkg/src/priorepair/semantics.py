"""Entailment under X-brave / X-AR / X-IAR for X in {S, P, C}.

Each answer tuple is decided on its own: the facts reachable from its causes
through the attack relation are collected, a selection problem over them is
built as clauses, and its satisfiability is decided with the DPLL solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .causes import candidate_causes, exact_causes
from .conflicts import ConflictIndex, conflicts as compute_conflicts, self_inconsistent_facts, candidate_inconsistent_sets
from .model import KnowledgeBase, QueryRewriting, id_key
from .solver import AcyclicOrientation, Solver

SEMANTICS = ("brave", "AR", "IAR")
REPAIR_KINDS = ("S", "P", "C")

Attacks = dict  # conflict tuple -> frozenset of attacked members


def attack_relation(conflicts: Iterable[tuple], priority: Iterable[tuple[str, str]]) -> Attacks:
    """Conflict C attacks a member a unless a is preferred to another member of C."""
    better: dict[str, set[str]] = {}
    for a, b in priority:
        better.setdefault(a, set()).add(b)
    out = {}
    for c in conflicts:
        c = tuple(c)
        members = set(c)
        out[c] = frozenset(a for a in c if not (better.get(a, set()) & (members - {a})))
    return out


def _attackers(attacks: Attacks) -> dict[str, list[tuple]]:
    by_fact: dict[str, list[tuple]] = {}
    for c, hit in attacks.items():
        for a in hit:
            by_fact.setdefault(a, []).append(c)
    return by_fact


def localize(causes: Iterable[Iterable[str]], attacks: Attacks, attackers=None) -> set[str]:
    """Cause facts, closed under 'members of a conflict attacking a reachable fact'."""
    if attackers is None:
        attackers = _attackers(attacks)
    reach: set[str] = set()
    todo: list[str] = []
    for c in causes:
        for f in c:
            if f not in reach:
                reach.add(f)
                todo.append(f)
    while todo:
        f = todo.pop()
        for c in attackers.get(f, ()):
            for g in c:
                if g not in reach:
                    reach.add(g)
                    todo.append(g)
    return reach


class _Context:
    """Shared, immutable per-(conflicts, priority) structures."""

    def __init__(self, conflicts: Iterable[tuple], priority: Iterable[tuple[str, str]]):
        self.conflicts = [tuple(c) for c in conflicts]
        self.priority = set(tuple(p) for p in priority)
        self.index = ConflictIndex(self.conflicts)
        self.attacks = {
            "S": attack_relation(self.conflicts, ()),
            "P": attack_relation(self.conflicts, self.priority),
        }
        self.attacks["C"] = self.attacks["P"]
        self.attackers = {k: _attackers(v) for k, v in self.attacks.items()}
        self._succ: dict[str, list[str]] = {}
        for a, b in self.priority:
            self._succ.setdefault(a, []).append(b)
        self._closure: dict[str, set[str]] = {}

    def above(self, a: str) -> set[str]:
        """Facts reachable from ``a`` along the priority relation."""
        got = self._closure.get(a)
        if got is None:
            got = set()
            todo = [a]
            while todo:
                v = todo.pop()
                for w in self._succ.get(v, ()):
                    if w not in got:
                        got.add(w)
                        todo.append(w)
            self._closure[a] = got
        return got


class _Problem:
    def __init__(self, ctx: _Context, kind: str, reach: set[str]):
        self.ctx = ctx
        self.kind = kind
        self.reach = reach
        self.solver = Solver()
        self.sel: dict[str, int] = {}
        deg = {f: len(ctx.index.of_fact.get(f, ())) for f in reach}
        for f in sorted(reach, key=lambda f: (-deg[f], id_key(f))):
            self.sel[f] = self.solver.new_var()
        self.support: dict[tuple, int] = {}
        self.orient: dict[tuple[str, str], int] = {}
        self.theory = None
        if kind == "C":
            self._orientations()
        self._consistency()
        if kind in ("P", "C"):
            self._optimality()

    def _rest_selected(self, conflict: tuple, a: str) -> int:
        """Variable implying every member of ``conflict`` other than ``a`` is selected."""
        key = (conflict, a)
        v = self.support.get(key)
        if v is None:
            v = self.solver.new_var()
            for b in conflict:
                if b != a:
                    self.solver.add((-v, self.sel[b]))
            self.support[key] = v
        return v

    def _consistency(self) -> None:
        seen = set()
        for f in self.reach:
            for c in self.ctx.index.of_fact.get(f, ()):
                if c in seen:
                    continue
                seen.add(c)
                if all(g in self.reach for g in c):
                    self.solver.add(-self.sel[g] for g in c)

    def _orientations(self) -> None:
        ctx = self.ctx
        nodes = sorted(self.reach, key=id_key)
        pos = {f: i for i, f in enumerate(nodes)}
        fixed = [0] * len(nodes)
        for f in nodes:
            for g in ctx.above(f):
                if g in pos:
                    fixed[pos[f]] |= 1 << pos[g]
        edges = {}
        for f in nodes:
            for c in ctx.index.of_fact.get(f, ()):
                for g in c:
                    if g == f or g not in pos or id_key(g) <= id_key(f):
                        continue
                    if (f, g) in ctx.priority or (g, f) in ctx.priority or (f, g) in self.orient:
                        continue
                    v = self.solver.new_var()
                    self.orient[(f, g)] = v
                    edges[v] = ((pos[f], pos[g]), (pos[g], pos[f]))
        self.theory = AcyclicOrientation(len(nodes), fixed, edges)

    def prefers(self, b: str, a: str):
        """Literal for 'b above a' in the completion, True/False when fixed."""
        if (b, a) in self.ctx.priority:
            return True
        if (a, b) in self.ctx.priority:
            return False
        v = self.orient.get((b, a))
        if v is not None:
            return v
        return -self.orient[(a, b)]

    def _valid_attack(self, conflict: tuple, a: str) -> int | None:
        """Variable for: conflict attacks ``a`` under the completion and its other members are selected."""
        lits = []
        for b in conflict:
            if b == a:
                continue
            p = self.prefers(b, a)
            if p is False:
                return None
            if p is not True:
                lits.append(p)
        base = self._rest_selected(conflict, a)
        if not lits:
            return base
        v = self.solver.new_var()
        self.solver.add((-v, base))
        for l in lits:
            self.solver.add((-v, l))
        return v

    def _optimality(self) -> None:
        attackers = self.ctx.attackers[self.kind]
        for a in sorted(self.reach, key=id_key):
            clause = [self.sel[a]]
            for c in attackers.get(a, ()):
                if self.kind == "C":
                    v = self._valid_attack(c, a)
                    if v is None:
                        continue
                else:
                    v = self._rest_selected(c, a)
                clause.append(v)
            self.solver.add(clause)

    def require_contradicted(self, cause: Iterable[str]) -> None:
        attackers = self.ctx.attackers[self.kind]
        clause = []
        for a in cause:
            for c in attackers.get(a, ()):
                clause.append(self._rest_selected(c, a))
        self.solver.add(clause)

    def require_one_of(self, causes: list[frozenset]) -> None:
        clause = []
        for cause in causes:
            v = self.solver.new_var()
            for a in cause:
                self.solver.add((-v, self.sel[a]))
            clause.append(v)
        self.solver.add(clause)

    def satisfiable(self) -> bool:
        order = list(self.sel.values()) + list(self.orient.values())
        return self.solver.solve(order, self.theory) is not None


def _decide(ctx: _Context, semantics: str, kind: str, causes: list[frozenset]) -> bool:
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    if kind not in REPAIR_KINDS:
        raise ValueError(f"unknown repair kind {kind!r}")
    if not causes:
        return False
    attacks, attackers = ctx.attacks[kind], ctx.attackers[kind]
    if semantics == "brave":
        prob = _Problem(ctx, kind, localize(causes, attacks, attackers))
        prob.require_one_of(causes)
        return prob.satisfiable()
    if semantics == "AR":
        prob = _Problem(ctx, kind, localize(causes, attacks, attackers))
        for cause in causes:
            prob.require_contradicted(cause)
        return not prob.satisfiable()
    for cause in causes:
        prob = _Problem(ctx, kind, localize([cause], attacks, attackers))
        prob.require_contradicted(cause)
        if not prob.satisfiable():
            return True
    return False


def decide(semantics: str, kind: str, causes, conflicts, priority) -> bool:
    """Is the answer whose causes are given entailed?"""
    ctx = conflicts if isinstance(conflicts, _Context) else _Context(conflicts, priority)
    return _decide(ctx, semantics, kind, _clean(causes))


def _clean(causes) -> list[frozenset]:
    uniq = {frozenset(c) for c in causes}
    return sorted(uniq, key=lambda c: (len(c), sorted(id_key(f) for f in c)))


@dataclass
class Engine:
    """Conflicts, priority and attack structures for one knowledge base."""

    kb: KnowledgeBase
    priority: list[tuple[str, str]] = field(default_factory=list)
    conflicts: list[tuple] | None = None

    def __post_init__(self):
        if self.conflicts is None:
            cands = candidate_inconsistent_sets(self.kb.dataset, self.kb.constraints)
            self.self_inconsistent = self_inconsistent_facts(cands)
            self.conflicts = compute_conflicts(self.kb.dataset, self.kb.constraints)
        else:
            self.self_inconsistent = {c[0] for c in self.conflicts if len(c) == 1}
        self.ctx = _Context(self.conflicts, self.priority)

    def causes(self, rewriting: QueryRewriting, exact: bool = False) -> dict[tuple, set[frozenset]]:
        if exact:
            return exact_causes(rewriting, self.kb.dataset, self.kb.constraints, self.conflicts)
        return candidate_causes(rewriting, self.kb.dataset, self.kb.constraints, self.self_inconsistent)

    def verdicts(self, rewriting: QueryRewriting, semantics: str, kind: str, exact: bool = False) -> dict[tuple, bool]:
        return {
            ans: _decide(self.ctx, semantics, kind, _clean(causes))
            for ans, causes in self.causes(rewriting, exact).items()
        }

    def decide(self, semantics: str, kind: str, causes) -> bool:
        return _decide(self.ctx, semantics, kind, _clean(causes))


def answer_query(rewriting: QueryRewriting, semantics: str, kind: str, engine: Engine, exact: bool = False) -> set[tuple]:
    return {ans for ans, ok in engine.verdicts(rewriting, semantics, kind, exact).items() if ok}
