"""End-to-end helpers: load a knowledge base from files and derive its priority."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .conflicts import ConflictIndex, conflicts as compute_conflicts
from .model import KnowledgeBase, MetaDatabase, ModelError, PrefStatement, Taxonomy
from .parsing import (
    check_rules,
    parse_constraints,
    parse_dataset,
    parse_meta,
    parse_queries,
    parse_rules,
    parse_taxonomy,
)
from .preferences import evaluate_rules, restrict_to_conflicts, statements, strong_acyclicity_instance
from .resolve import resolve


class InputError(ValueError):
    """A file could not be read or parsed; the message names the file."""


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def _parse(path, fn, *args):
    try:
        return fn(_read(path), *args)
    except ModelError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_kb(data, constraints=None, meta=None, rules=None, queries=None, taxonomy=None) -> KnowledgeBase:
    dataset = _parse(data, parse_dataset)
    dc = _parse(constraints, parse_constraints) if constraints else []
    md = _parse(meta, parse_meta, dataset) if meta else None
    rs = _parse(rules, parse_rules) if rules else []
    qs = _parse(queries, parse_queries) if queries else []
    tx = _parse(taxonomy, parse_taxonomy) if taxonomy else None
    kb = KnowledgeBase(dataset, tuple(dc), md or MetaDatabase(), tx or Taxonomy(), tuple(rs), tuple(qs))
    try:
        check_rules(kb.rules, kb.meta)
    except ModelError as exc:
        raise InputError(f"{rules}: {exc}") from exc
    return kb


@dataclass
class Prioritized:
    conflicts: list[tuple]
    statements: list[PrefStatement]
    priority: list[tuple[str, str]]


def prioritize(kb: KnowledgeBase, strategy: str, conflicts: list[tuple] | None = None) -> Prioritized:
    """Conflicts, conflict-restricted leveled statements, and the resolved priority."""
    if conflicts is None:
        conflicts = compute_conflicts(kb.dataset, kb.constraints)
    index = ConflictIndex(conflicts)
    levels = evaluate_rules(kb.rules, kb.dataset, kb.meta, kb.taxonomy, candidates=index.pairs)
    stmts = restrict_to_conflicts(statements(levels), index)
    return Prioritized(conflicts, stmts, resolve(strategy, stmts))


def induced_cycle(kb: KnowledgeBase):
    """Witness cycle of the full (unrestricted) induced relation, or None."""
    levels = evaluate_rules(kb.rules, kb.dataset, kb.meta, kb.taxonomy)
    return strong_acyclicity_instance(statements(levels))
