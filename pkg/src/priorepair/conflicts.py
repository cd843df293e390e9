"""Conflicts: inclusion-minimal sets of facts violating some denial constraint."""

from __future__ import annotations

from typing import Iterable

from .matcher import match
from .model import Dataset, DenialConstraint, conflict_key, id_key

Conflict = tuple  # sorted tuple of member ids


def candidate_inconsistent_sets(
    dataset: Dataset, constraints: Iterable[DenialConstraint]
) -> set[frozenset]:
    """Support of every homomorphism of every constraint body, duplicates collapsed."""
    out: set[frozenset] = set()
    for c in constraints:
        for m in match(c.body, dataset):
            out.add(m.support)
    return out


def self_inconsistent_facts(candidates: Iterable[frozenset]) -> set[str]:
    return {next(iter(s)) for s in candidates if len(s) == 1}


def minimize(sets: Iterable[frozenset]) -> set[frozenset]:
    """Inclusion-minimal elements, via size buckets and a per-fact inverted index."""
    by_size: dict[int, list[frozenset]] = {}
    for s in set(sets):
        by_size.setdefault(len(s), []).append(s)
    kept: set[frozenset] = set()
    index: dict[str, list[frozenset]] = {}
    for size in sorted(by_size):
        fresh = []
        for s in by_size[size]:
            dominated = False
            for f in s:
                for small in index.get(f, ()):
                    if small <= s:
                        dominated = True
                        break
                if dominated:
                    break
            if not dominated:
                fresh.append(s)
        for s in fresh:
            kept.add(s)
            for f in s:
                index.setdefault(f, []).append(s)
    return kept


def conflicts(dataset: Dataset, constraints: Iterable[DenialConstraint]) -> list[Conflict]:
    """Conflicts as sorted id tuples, in a deterministic order."""
    constraints = list(constraints)
    candidates = candidate_inconsistent_sets(dataset, constraints)
    if all(len(c.atoms) <= 2 for c in constraints):
        bad = self_inconsistent_facts(candidates)
        minimal = {s for s in candidates if len(s) == 1 or not (s & bad)}
    else:
        minimal = minimize(candidates)
    return sorted((conflict_key(s) for s in minimal), key=_order)


def _order(key: tuple) -> tuple:
    return (len(key), [id_key(i) for i in key])


class ConflictIndex:
    """Conflicts plus the fact -> conflicts map and the co-membership test."""

    def __init__(self, conflicts: Iterable[Conflict]):
        self.conflicts: list[Conflict] = list(conflicts)
        self.of_fact: dict[str, list[Conflict]] = {}
        for c in self.conflicts:
            for f in c:
                self.of_fact.setdefault(f, []).append(c)
        self._pairs: set[tuple[str, str]] | None = None

    @property
    def pairs(self) -> set[tuple[str, str]]:
        """Ordered pairs of distinct facts sharing a conflict."""
        if self._pairs is None:
            pairs = set()
            for c in self.conflicts:
                for a in c:
                    for b in c:
                        if a != b:
                            pairs.add((a, b))
            self._pairs = pairs
        return self._pairs

    def co_occur(self, a: str, b: str) -> bool:
        return (a, b) in self.pairs
