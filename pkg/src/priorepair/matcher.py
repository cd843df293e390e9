"""Homomorphism search for conjunctive bodies over a dataset, meta-database and taxonomy.

Bodies mix positive/negated atoms, comparisons, id bindings ``x = id[P(..)]``
and taxonomy atoms ``sub(p, q)``.  Negation is negation-as-failure over the
finite dataset/meta-database; variables that occur only under negation are
existential inside the negated atom.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Sequence

from .model import (
    Atom,
    Comparison,
    Dataset,
    FactRef,
    IdBinding,
    MetaDatabase,
    Negated,
    PredName,
    PredVar,
    Sub,
    Taxonomy,
    Var,
    positive_vars,
    value_key,
)

_EMPTY_META = MetaDatabase()
_EMPTY_TAX = Taxonomy()


class Match(NamedTuple):
    binding: dict
    support: frozenset


def compare(op: str, a, b) -> bool:
    if op == "=":
        return a == b and type(a) is type(b)
    if op == "!=":
        return not (a == b and type(a) is type(b))
    ka, kb = value_key(a), value_key(b)
    if op == "<":
        return ka < kb
    if op == "<=":
        return ka <= kb
    if op == ">":
        return ka > kb
    if op == ">=":
        return ka >= kb
    raise ValueError(f"unknown comparison {op!r}")


def _key(t) -> str | None:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, PredVar):
        return "%" + t.name
    return None


class _Ctx:
    def __init__(self, dataset: Dataset, meta: MetaDatabase, taxonomy: Taxonomy):
        self.dataset = dataset
        self.meta = meta
        self.taxonomy = taxonomy
        self.data_preds = dataset.predicates
        self._pred_domain: list[str] | None = None

    @property
    def pred_domain(self) -> list[str]:
        if self._pred_domain is None:
            self._pred_domain = sorted(self.data_preds | self.taxonomy.predicates)
        return self._pred_domain

    def source(self, pred: str):
        if pred in self.data_preds:
            return self.dataset
        return self.meta


def _value(t, binding: dict):
    """Value of a term under a binding, or ``_UNBOUND``."""
    k = _key(t)
    if k is None:
        return t
    return binding.get(k, _UNBOUND)


class _Unbound:
    __slots__ = ()


_UNBOUND = _Unbound()


def _unify(terms: Sequence, args: tuple, binding: dict, added: list) -> bool:
    for t, a in zip(terms, args):
        k = _key(t)
        if k is None:
            if not (t == a and type(t) is type(a)):
                return False
            continue
        cur = binding.get(k, _UNBOUND)
        if cur is _UNBOUND:
            binding[k] = a
            added.append(k)
        elif not (cur == a and type(cur) is type(a)):
            return False
    return True


def _candidates(ctx: _Ctx, pred: str, terms: Sequence, binding: dict):
    """Rows of ``pred`` restricted through the most selective bound position."""
    src = ctx.source(pred)
    best = None
    for pos, t in enumerate(terms):
        v = _value(t, binding)
        if v is _UNBOUND:
            continue
        rows = src.lookup(pred, pos, v)
        if best is None or len(rows) < len(best):
            best = rows
            if not rows:
                break
    return src.rows(pred) if best is None else best


def _atom_cost(ctx: _Ctx, atom: Atom, binding: dict) -> int:
    pred = atom.pred
    if isinstance(pred, PredVar):
        pv = binding.get("%" + pred.name, _UNBOUND)
        if pv is _UNBOUND:
            return sum(len(ctx.dataset.rows(p)) for p in ctx.data_preds) + 1
        pred = pv.name
    return len(_candidates(ctx, pred, atom.terms, binding))


class _Plan:
    def __init__(self, body: Sequence, seeded: set[str]):
        self.body = list(body)
        pos = positive_vars(self.body) | seeded
        self.local: dict[int, set[str]] = {}
        self.needs: dict[int, set[str]] = {}
        for i, lit in enumerate(self.body):
            vs = lit.vars()
            if isinstance(lit, Negated):
                self.local[i] = vs - pos
                self.needs[i] = vs & pos
            else:
                self.needs[i] = vs


def match(
    body: Sequence,
    dataset: Dataset,
    meta: MetaDatabase | None = None,
    taxonomy: Taxonomy | None = None,
    seed: dict | None = None,
) -> Iterator[Match]:
    """Yield every binding extending ``seed`` that satisfies ``body``.

    ``support`` holds the ids of dataset facts matched by positive dataset atoms.
    """
    ctx = _Ctx(dataset, meta or _EMPTY_META, taxonomy or _EMPTY_TAX)
    binding = dict(seed or {})
    plan = _Plan(body, set(binding))
    yield from _search(ctx, plan, list(range(len(plan.body))), binding, [])


def holds(body: Sequence, dataset: Dataset, meta=None, taxonomy=None, seed=None) -> bool:
    for _ in match(body, dataset, meta, taxonomy, seed):
        return True
    return False


def _ready(plan: _Plan, i: int, binding: dict) -> bool:
    return all(v in binding for v in plan.needs[i])


def _choose(ctx: _Ctx, plan: _Plan, remaining: list[int], binding: dict) -> int:
    best_i, best_cost = -1, None
    for i in remaining:
        lit = plan.body[i]
        if isinstance(lit, Comparison):
            if _ready(plan, i, binding):
                return i
            if lit.op == "=":
                lv, rv = _value(lit.left, binding), _value(lit.right, binding)
                if (lv is _UNBOUND) != (rv is _UNBOUND):
                    return i
            continue
        if isinstance(lit, Negated):
            if _ready(plan, i, binding):
                return i
            continue
        if isinstance(lit, Sub):
            lo, up = _value(lit.lower, binding), _value(lit.upper, binding)
            if lo is not _UNBOUND and up is not _UNBOUND:
                return i
            cost = len(ctx.pred_domain) * (1 if (lo is not _UNBOUND or up is not _UNBOUND) else len(ctx.pred_domain))
        elif isinstance(lit, IdBinding):
            if lit.var.name in binding:
                cost = 1
            else:
                cost = _atom_cost(ctx, lit.atom, binding)
        else:
            if isinstance(lit.pred, PredVar):
                raise ValueError("predicate variables are only allowed inside id[...] and sub(...)")
            cost = _atom_cost(ctx, lit, binding)
        if best_cost is None or cost < best_cost:
            best_i, best_cost = i, cost
    if best_i < 0:
        raise ValueError("body is not safe: no literal can be evaluated")
    return best_i


def _search(ctx: _Ctx, plan: _Plan, remaining: list[int], binding: dict, support: list) -> Iterator[Match]:
    if not remaining:
        yield Match(dict(binding), frozenset(support))
        return
    i = _choose(ctx, plan, remaining, binding)
    rest = [j for j in remaining if j != i]
    lit = plan.body[i]

    if isinstance(lit, Comparison):
        lv, rv = _value(lit.left, binding), _value(lit.right, binding)
        if lv is _UNBOUND or rv is _UNBOUND:
            k = _key(lit.left) if lv is _UNBOUND else _key(lit.right)
            binding[k] = rv if lv is _UNBOUND else lv
            yield from _search(ctx, plan, rest, binding, support)
            del binding[k]
        elif compare(lit.op, lv, rv):
            yield from _search(ctx, plan, rest, binding, support)
        return

    if isinstance(lit, Negated):
        inner = {k: v for k, v in binding.items() if k not in plan.local[i]}
        sub_plan = _Plan([lit.atom], set(inner))
        for _ in _search(ctx, sub_plan, [0], inner, []):
            return
        yield from _search(ctx, plan, rest, binding, support)
        return

    if isinstance(lit, Sub):
        yield from _sub(ctx, plan, rest, lit, binding, support)
        return

    if isinstance(lit, IdBinding):
        yield from _id_binding(ctx, plan, rest, lit, binding, support)
        return

    data = lit.pred in ctx.data_preds
    for fid, args in _candidates(ctx, lit.pred, lit.terms, binding):
        added: list = []
        if _unify(lit.terms, args, binding, added):
            if data:
                support.append(fid)
            yield from _search(ctx, plan, rest, binding, support)
            if data:
                support.pop()
        for k in added:
            del binding[k]


def _sub(ctx, plan, rest, lit: Sub, binding, support):
    lo, up = _value(lit.lower, binding), _value(lit.upper, binding)
    tax = ctx.taxonomy
    lo_name = lo.name if isinstance(lo, PredName) else lo
    up_name = up.name if isinstance(up, PredName) else up
    if lo is not _UNBOUND and up is not _UNBOUND:
        if isinstance(lo_name, str) and isinstance(up_name, str) and tax.subsumes(lo_name, up_name):
            yield from _search(ctx, plan, rest, binding, support)
        return
    pairs = []
    if lo is not _UNBOUND:
        if isinstance(lo_name, str):
            pairs = [(lo_name, q) for q in ctx.pred_domain if tax.subsumes(lo_name, q)]
    elif up is not _UNBOUND:
        if isinstance(up_name, str):
            pairs = [(p, up_name) for p in ctx.pred_domain if tax.subsumes(p, up_name)]
    else:
        pairs = [(p, q) for p in ctx.pred_domain for q in ctx.pred_domain if tax.subsumes(p, q)]
    for p, q in pairs:
        added = []
        for t, name in ((lit.lower, p), (lit.upper, q)):
            k = _key(t)
            if k is not None and k not in binding:
                binding[k] = PredName(name)
                added.append(k)
        yield from _search(ctx, plan, rest, binding, support)
        for k in added:
            del binding[k]


def _id_binding(ctx, plan, rest, lit: IdBinding, binding, support):
    atom = lit.atom
    xk = lit.var.name
    x = binding.get(xk, _UNBOUND)
    pk = _key(atom.pred)
    if pk is None:
        preds = [atom.pred]
    else:
        pv = binding.get(pk, _UNBOUND)
        preds = [pv.name] if isinstance(pv, PredName) else ([] if pv is not _UNBOUND else sorted(ctx.data_preds))
    if x is not _UNBOUND:
        if not isinstance(x, FactRef) or x.id not in ctx.dataset:
            return
        fact = ctx.dataset[x.id]
        if fact.pred not in preds or len(fact.args) != len(atom.terms):
            return
        rows = [(x.id, fact.args, fact.pred)]
    else:
        rows = []
        for p in preds:
            if p not in ctx.data_preds or ctx.dataset.arity(p) != len(atom.terms):
                continue
            rows.extend((fid, args, p) for fid, args in _candidates(ctx, p, atom.terms, binding))
    for fid, args, p in rows:
        added: list = []
        if pk is not None and pk not in binding:
            binding[pk] = PredName(p)
            added.append(pk)
        if _unify(atom.terms, args, binding, added):
            if xk not in binding:
                binding[xk] = FactRef(fid)
                added.append(xk)
            yield from _search(ctx, plan, rest, binding, support)
        for k in added:
            del binding[k]
