"""Domain model: constants, facts, datasets, meta-databases and rule syntax trees."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

INT_RE = re.compile(r"[+-]?\d+\Z")

Constant = Union[int, str]


@dataclass(frozen=True, slots=True)
class FactRef:
    """Reference to a dataset fact by its identifier (``#id`` in meta files)."""

    id: str

    def __str__(self) -> str:
        return "#" + self.id


@dataclass(frozen=True, slots=True)
class PredName:
    """A predicate name used as a value (bound by predicate variables)."""

    name: str

    def __str__(self) -> str:
        return self.name


Value = Union[int, str, FactRef, PredName]


def classify(lexeme: str) -> Constant:
    """Turn a raw token into an Integer or a Symbol constant."""
    if INT_RE.match(lexeme):
        return int(lexeme)
    return lexeme


def value_key(v: Value) -> tuple:
    """Total order over all values: integers, symbols, fact refs, predicate names."""
    if isinstance(v, bool):
        raise TypeError("booleans are not constants")
    if isinstance(v, int):
        return (0, v, "")
    if isinstance(v, FactRef):
        return (2,) + id_key(v.id)
    if isinstance(v, PredName):
        return (3, 0, v.name)
    return (1, 0, v)


def id_key(fid: str) -> tuple:
    """Sort key for fact ids: numeric ids numerically, then the rest by code point."""
    if INT_RE.match(fid):
        return (0, int(fid), "")
    return (1, 0, fid)


def sort_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=id_key)


def conflict_key(members: Iterable[str]) -> tuple[str, ...]:
    return tuple(sort_ids(members))


class Fact(NamedTuple):
    pred: str
    args: tuple

    def __str__(self) -> str:
        return f"{self.pred}({','.join(str(a) for a in self.args)})"


class ModelError(ValueError):
    """Invalid input rejected by a constructor or parser."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class Dataset:
    """Injective map from fact ids to ground facts, with lookup indexes."""

    def __init__(self, facts: Mapping[str, Fact] | Iterable[tuple[str, Fact]] = ()):
        items = facts.items() if isinstance(facts, Mapping) else facts
        self._facts: dict[str, Fact] = {}
        self._ids: dict[Fact, str] = {}
        self._arity: dict[str, int] = {}
        self._by_pred: dict[str, list[tuple[str, tuple]]] = {}
        for fid, fact in items:
            if fid in self._facts:
                raise ModelError(f"duplicate fact id {fid!r}")
            if fact in self._ids:
                raise ModelError(f"fact {fact} has two ids: {self._ids[fact]!r} and {fid!r}")
            arity = self._arity.setdefault(fact.pred, len(fact.args))
            if arity != len(fact.args):
                raise ModelError(f"arity clash for {fact.pred}: {arity} vs {len(fact.args)}")
            self._facts[fid] = fact
            self._ids[fact] = fid
            self._by_pred.setdefault(fact.pred, []).append((fid, fact.args))
        self._index: dict[tuple[str, int], dict] = {}

    def __len__(self) -> int:
        return len(self._facts)

    def __iter__(self) -> Iterator[str]:
        return iter(self._facts)

    def __contains__(self, fid: object) -> bool:
        return fid in self._facts

    def __getitem__(self, fid: str) -> Fact:
        return self._facts[fid]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Dataset) and self._facts == other._facts

    def __repr__(self) -> str:
        return f"Dataset({len(self)} facts)"

    def items(self):
        return self._facts.items()

    def ids(self) -> list[str]:
        return list(self._facts)

    def id_of(self, fact: Fact) -> str | None:
        return self._ids.get(fact)

    @property
    def predicates(self) -> set[str]:
        return set(self._by_pred)

    def arity(self, pred: str) -> int | None:
        return self._arity.get(pred)

    def rows(self, pred: str) -> list[tuple[str, tuple]]:
        return self._by_pred.get(pred, [])

    def lookup(self, pred: str, pos: int, value) -> list[tuple[str, tuple]]:
        """Rows of ``pred`` whose argument at ``pos`` equals ``value``."""
        idx = self._index.get((pred, pos))
        if idx is None:
            idx = {}
            for row in self._by_pred.get(pred, ()):
                idx.setdefault(row[1][pos], []).append(row)
            self._index[(pred, pos)] = idx
        return idx.get(value, [])

    def restrict(self, ids: Iterable[str]) -> "Dataset":
        return Dataset((i, self._facts[i]) for i in ids)


class MetaDatabase:
    """Meta-facts about dataset facts; positions holding ``FactRef`` are fixed per predicate."""

    def __init__(self, facts: Iterable[Fact] = (), dataset: Dataset | None = None):
        self._facts: list[Fact] = []
        self._seen: set[Fact] = set()
        self.id_positions: dict[str, frozenset[int]] = {}
        self._arity: dict[str, int] = {}
        self._by_pred: dict[str, list[tuple[None, tuple]]] = {}
        self._index: dict[tuple[str, int], dict] = {}
        for fact in facts:
            self._add(fact, dataset)

    def _add(self, fact: Fact, dataset: Dataset | None) -> None:
        positions = frozenset(i for i, a in enumerate(fact.args) if isinstance(a, FactRef))
        known = self.id_positions.setdefault(fact.pred, positions)
        if known != positions:
            raise ModelError(
                f"inconsistent id positions for {fact.pred}: {sorted(known)} vs {sorted(positions)}"
            )
        arity = self._arity.setdefault(fact.pred, len(fact.args))
        if arity != len(fact.args):
            raise ModelError(f"arity clash for {fact.pred}: {arity} vs {len(fact.args)}")
        if dataset is not None:
            if fact.pred in dataset.predicates:
                raise ModelError(f"meta predicate {fact.pred} is also a data predicate")
            for a in fact.args:
                if isinstance(a, FactRef) and a.id not in dataset:
                    raise ModelError(f"dangling fact reference #{a.id} in {fact}")
        if fact in self._seen:
            return
        self._seen.add(fact)
        self._facts.append(fact)
        self._by_pred.setdefault(fact.pred, []).append((None, fact.args))

    def __len__(self) -> int:
        return len(self._facts)

    def __iter__(self) -> Iterator[Fact]:
        return iter(self._facts)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MetaDatabase) and self._seen == other._seen

    def __repr__(self) -> str:
        return f"MetaDatabase({len(self)} facts)"

    @property
    def predicates(self) -> set[str]:
        return set(self._by_pred)

    def rows(self, pred: str) -> list[tuple[None, tuple]]:
        return self._by_pred.get(pred, [])

    def lookup(self, pred: str, pos: int, value) -> list[tuple[None, tuple]]:
        idx = self._index.get((pred, pos))
        if idx is None:
            idx = {}
            for row in self._by_pred.get(pred, ()):
                idx.setdefault(row[1][pos], []).append(row)
            self._index[(pred, pos)] = idx
        return idx.get(value, [])


class Taxonomy:
    """Subsumption pairs between predicate names, exposed through their reflexive-transitive closure."""

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()):
        self.pairs: frozenset[tuple[str, str]] = frozenset(pairs)
        succ: dict[str, set[str]] = {}
        for p, q in self.pairs:
            succ.setdefault(p, set()).add(q)
            succ.setdefault(q, set())
        self._up: dict[str, frozenset[str]] = {}
        for start in succ:
            seen = {start}
            todo = [start]
            while todo:
                for nxt in succ[todo.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        todo.append(nxt)
            self._up[start] = frozenset(seen)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Taxonomy) and self.pairs == other.pairs

    def __repr__(self) -> str:
        return f"Taxonomy({len(self.pairs)} pairs)"

    @property
    def predicates(self) -> set[str]:
        return set(self._up)

    def supers(self, p: str) -> frozenset[str]:
        return self._up.get(p, frozenset((p,)))

    def subsumes(self, p: str, q: str) -> bool:
        """True iff ``p`` is below ``q`` (reflexively)."""
        return p == q or q in self._up.get(p, ())


# --- rule/query syntax -------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class PredVar:
    """Predicate variable, written ``%Y``."""

    name: str

    def __str__(self) -> str:
        return "%" + self.name


Term = Union[Var, int, str, FactRef]
PredTerm = Union[str, PredVar]


class Atom(NamedTuple):
    pred: PredTerm
    terms: tuple

    def vars(self) -> set[str]:
        out = {t.name for t in self.terms if isinstance(t, Var)}
        if isinstance(self.pred, PredVar):
            out.add("%" + self.pred.name)
        return out


class Negated(NamedTuple):
    atom: Atom

    def vars(self) -> set[str]:
        return self.atom.vars()


class Comparison(NamedTuple):
    op: str
    left: Term
    right: Term

    def vars(self) -> set[str]:
        return {t.name for t in (self.left, self.right) if isinstance(t, Var)}


class IdBinding(NamedTuple):
    """``x = id[P(t...)]``: ``x`` is the id of the dataset fact ``P(t...)``."""

    var: Var
    atom: Atom

    def vars(self) -> set[str]:
        return {self.var.name} | self.atom.vars()


class Sub(NamedTuple):
    """Taxonomy atom ``sub(p, q)``; either side may be a predicate variable."""

    lower: PredTerm
    upper: PredTerm

    def vars(self) -> set[str]:
        return {"%" + t.name for t in (self.lower, self.upper) if isinstance(t, PredVar)}


Literal = Union[Atom, Negated, Comparison, IdBinding, Sub]

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


def positive_vars(body: Iterable[Literal]) -> set[str]:
    """Variables bound by positive atoms, id-bindings and taxonomy atoms."""
    out: set[str] = set()
    for lit in body:
        if isinstance(lit, (Atom, IdBinding, Sub)):
            out |= lit.vars()
    return out


@dataclass(frozen=True)
class DenialConstraint:
    atoms: tuple[Atom, ...]
    inequalities: tuple[Comparison, ...] = ()

    @property
    def body(self) -> tuple[Literal, ...]:
        return self.atoms + self.inequalities


@dataclass(frozen=True)
class QueryRewriting:
    name: str
    answer_vars: tuple[str, ...]
    bodies: tuple[tuple[Atom, ...], ...]


@dataclass(frozen=True)
class PreferenceRule:
    head: tuple[str, str]
    body: tuple[Literal, ...]
    level: int = 1


@dataclass(frozen=True)
class PrefStatement:
    src: str
    dst: str
    level: int

    @property
    def pair(self) -> tuple[str, str]:
        return (self.src, self.dst)


@dataclass(frozen=True)
class KnowledgeBase:
    """Everything a pipeline run needs; all parts immutable after parsing."""

    dataset: Dataset
    constraints: tuple[DenialConstraint, ...] = ()
    meta: MetaDatabase = field(default_factory=MetaDatabase)
    taxonomy: Taxonomy = field(default_factory=Taxonomy)
    rules: tuple[PreferenceRule, ...] = ()
    queries: tuple[QueryRewriting, ...] = ()
