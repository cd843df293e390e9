"""Causes of query answers: candidate supersets (fast path) and exact minimal causes."""

from __future__ import annotations

from typing import Iterable

from .conflicts import minimize
from .matcher import match
from .model import Dataset, DenialConstraint, QueryRewriting


def _answer(binding: dict, answer_vars: tuple[str, ...]) -> tuple:
    return tuple(binding[v] for v in answer_vars)


def candidate_causes(
    rewriting: QueryRewriting,
    dataset: Dataset,
    constraints: Iterable[DenialConstraint] = (),
    self_inconsistent: Iterable[str] = (),
) -> dict[tuple, set[frozenset]]:
    """Supports of all body matches, keyed by answer tuple.

    Candidates holding a self-inconsistent fact are dropped.  Non-minimal or
    inconsistent candidates are kept on purpose: they never change a verdict.
    """
    bad = set(self_inconsistent)
    out: dict[tuple, set[frozenset]] = {}
    for body in rewriting.bodies:
        for m in match(body, dataset):
            if bad and not bad.isdisjoint(m.support):
                continue
            out.setdefault(_answer(m.binding, rewriting.answer_vars), set()).add(m.support)
    return {k: v for k, v in out.items() if v}


def exact_causes(
    rewriting: QueryRewriting,
    dataset: Dataset,
    constraints: Iterable[DenialConstraint],
    conflicts: Iterable[tuple] | None = None,
) -> dict[tuple, set[frozenset]]:
    """Inclusion-minimal consistent supports per answer tuple (test oracle path)."""
    constraints = list(constraints)
    if conflicts is None:
        from .conflicts import conflicts as compute

        conflicts = compute(dataset, constraints)
    conf_sets = [frozenset(c) for c in conflicts]
    out: dict[tuple, set[frozenset]] = {}
    for answer, cands in candidate_causes(rewriting, dataset).items():
        kept = {s for s in minimize(cands) if not any(c <= s for c in conf_sets)}
        if kept:
            out[answer] = kept
    return out
