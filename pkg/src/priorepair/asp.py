"""Text generation for answer-set programs equivalent to the native pipeline.

Nothing here calls a solver.  ``emit_input`` turns a knowledge base into
ground facts and rules, the other emitters return fixed programs.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field

from .model import (
    Atom,
    Comparison,
    Dataset,
    DenialConstraint,
    FactRef,
    IdBinding,
    MetaDatabase,
    Negated,
    PredName,
    PredVar,
    PreferenceRule,
    QueryRewriting,
    Sub,
    Taxonomy,
    Var,
    id_key,
)

# -- fixed programs ------------------------------------------------------

PRIORITY_PROGRAMS = {
    "u": """\
trans_cl(X, Y, I) :- pref_init(X, Y, I), not blocked(I).
trans_cl(X, Y, I) :- level(I), trans_cl(X, Y, J), J<I, not blocked(I).
trans_cl(X, Y, I) :- pref_init(X, Z, J), trans_cl(Z, Y, I), J<=I, not blocked(I).
cycle(I) :- trans_cl(X, X, I).
blocked(I) :- level(I), cycle(J), J<I.
pref(X, Y) :- pref_init(X, Y, I), not cycle(I), not blocked(I).
""",
    "d": """\
trans_cl(X, Y, I) :- pref_init(X, Y, I).
trans_cl(X, Y, I) :- pref_init(X, Z, I), trans_cl(Z, Y, J), J<=I.
trans_cl(X, Y, I) :- pref_init(X, Z, J), trans_cl(Z, Y, I), J<=I.
cycle(X, Y, I) :- pref_init(X, Y, I), trans_cl(Y, X, I).
pref(X, Y) :- pref_init(X, Y, I), not cycle(X, Y, I).
""",
    "ru": """\
trans_cl(X, Y, I) :- pref_init(X, Y, I).
trans_cl(X, Y, I) :- level(I), rel(X, Y, J), J < I.
trans_cl(X, Y, I) :- pref_init(X, Z, I), trans_cl(Z, Y, I).
trans_cl(X, Y, I) :- trans_cl(X, Z, I), trans_cl(Z, Y, I).
cycle(X, Y, I) :- pref_init(X, Y, I), trans_cl(Y, X, I).
rel(X, Y, I) :- pref_init(X, Y, I), not cycle(X, Y, I).
rel(X, Y, I) :- rel(X, Z, J), rel(Z, Y, I), J<=I.
pref(X, Y) :- pref_init(X, Y, I), rel(X, Y, I).
""",
    "g": """\
-succ(I, J) :- level(I), level(J), level(Z), I < Z, Z < J.
succ(I, J) :- level(I), level(J), I < J, not -succ(I, J).
trans_cl_bis(X, Y, I, K) :- level(K), pref_init(X, Y, I), gamma(X, Y, I, K).
trans_cl_bis(X, Y, I, K) :- level(I), level(K), trans_cl_bis(X, Y, J, K), J<=I.
trans_cl_bis(X, Y, I, K) :- level(K), pref_init(X, Z, J), trans_cl_bis(Z, Y, I, K), J<=I, gamma(X, Z, I, K).
gamma_plus(X, Y, K) :- level(I), level(K), pref_init(X, Y, I), trans_cl_bis(Y, X, J, K), J <= I.
trans_cl(X, Y, I, K) :- level(I), level(K), pref_init(X, Y, I), not gamma_plus(X, Y, K), K>1.
trans_cl(X, Y, I, K) :- level(I), level(J), level(K), trans_cl(X, Y, J, K), J<=I, not gamma_plus(X, Y, K), K>1.
trans_cl(X, Y, I, K) :- level(I), level(J), level(K), pref_init(X, Z, J), trans_cl(Z, Y, I, K), J<=I, not gamma_plus(X, Y, K), K>1.
cycle(X, Y, I, K) :- level(J), level(K), pref_init(X, Y, I), trans_cl(Y, X, J, K), J <= I.
trans_cl(X, Y, I, 1) :- level(I), pref_init(X, Y, I).
trans_cl(X, Y, I, 1) :- level(I), level(J), trans_cl(X, Y, J, 1), J<=I.
trans_cl(X, Y, I, 1) :- level(I), level(J), pref_init(X, Z, J), trans_cl(Z, Y, I, 1), J<=I.
gamma(X, Y, I, 1) :- pref_init(X, Y, I), not cycle(X, Y, I, 1).
gamma(X, Y, I, L) :- level(K), pref_init(X, Y, I), not cycle(X, Y, I, K), succ(K, L).
unstopped(K) :- level(I), level(L), gamma(X, Y, I, L), not gamma(X, Y, I, K), succ(K, L).
pref(X, Y) :- level(K), gamma(X, Y, I, K), not unstopped(K).
""",
}

MINCONF_PROGRAM = """\
-included(X, Y) :- conf_init(X), conf_init(Y), inConf_init(X, A), not inConf_init(Y, A).
minimal(Y) :- conf_init(X), conf_init(Y), not -included(X, Y), -included(Y, X).
conf(X) :- conf_init(X), not minimal(X).
inConf(X, Y) :- inConf_init(X, Y), conf(X).
"""

BLOCKS = {
    "att": """\
-att(X, A) :- inConf(X, A), inConf(X, B), not A = B, pref(A, B).
att(X, A) :- inConf(X, A), not -att(X, A).
""",
    "loc": """\
cause_fact(A) :- inCause(C, A), cause(C).
reachable(A) :- cause_fact(A).
reachable(A) :- reachable(B), att(X, B), inConf(X, A).
""",
    "loc_att": """\
cause_fact(A) :- inCause(C, A), cause(C).
reachable(A) :- cause_fact(A).
-att(X, A) :- reachable(A), inConf(X, A), inConf(X, B), not A = B, pref(A, B).
att(X, A) :- reachable(A), inConf(X, A), not -att(X, A).
reachable(A) :- att(X, B), inConf(X, A).
""",
    "cons": """\
conf_rel(X) :- inConf(X, A), reachable(A).
1 {rem(A):inConf(X, A)} :- conf_rel(X).
in(A) :- reachable(A), not rem(A).
""",
    "brave": """\
-sat(C) :- inCause(C, A), not in(A).
sat :- cause(C), not -sat(C).
:- not sat.
""",
    "AR": """\
invalid_conf(X, A) :- reachable(A), att(X, A), inConf(X, B), not in(B), not A = B.
neg(C) :- cause(C), inCause(C, A), att(X, A), not invalid_conf(X, A).
:- cause(C), not neg(C).
""",
    "Pareto": """\
valid(A) :- reachable(A), in(A).
invalid_att(X, A) :- reachable(A), att(X, A), inConf(X, B), not in(B), not A = B.
valid(A) :- reachable(A), conf(X), not in(A), att(X, A), not invalid_att(X, A).
:- reachable(A), not valid(A).
""",
    "Completion": """\
valid(A) :- reachable(A), in(A).
invalid_att(X, A) :- reachable(A), not in(A), inConf(X, A), not A = B, inConf(X, B), not in(B).
invalid_att(X, A) :- reachable(A), not in(A), inConf(X, A), inConf(X, B), not A = B,  pref_comp(A, B).
valid(A) :- reachable(A), not in(A), inConf(X, A), not invalid_att(X, A).
:- reachable(A), not valid(A).
pref_comp(A, B) :- reachable(A), reachable(B), pref(A, B).
1 {pref_comp(A, B); pref_comp(B, A)} 1 :- reachable(A), reachable(B), inConf(X, A), inConf(X, B), not pref(A, B), not pref(B, A), not A = B.
trans_cl_comp(A, B) :- pref_comp(A, B).
trans_cl_comp(A, B) :- trans_cl_comp(A, Y), pref_comp(Y, B).
:- trans_cl_comp(A, A).
""",
}

# predicates that get the cause identifier as an extra first argument in the IAR variant
_PER_CAUSE = ("cause_fact", "reachable", "conf_rel", "rem", "in", "invalid_conf", "valid", "invalid_att",
              "pref_comp", "trans_cl_comp")
_PER_CAUSE_RE = re.compile(r"(?<![A-Za-z0-9_])(" + "|".join(_PER_CAUSE) + r")\(")


def emit_priority(strategy: str) -> str:
    try:
        return PRIORITY_PROGRAMS[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r} (expected one of u, d, ru, g)") from None


def emit_minconf() -> str:
    return MINCONF_PROGRAM


def per_cause(block: str) -> str:
    """Add the cause identifier ``C`` as first argument of the per-selection predicates."""
    out = _PER_CAUSE_RE.sub(lambda m: f"{m.group(1)}(C, ", block)
    # the cause_fact rule binds C already through inCause(C, A)
    return out


def semantics_blocks(kind: str, semantics: str) -> list[str]:
    if kind not in ("S", "P", "C"):
        raise ValueError(f"unknown repair kind {kind!r}")
    if semantics not in ("brave", "AR", "IAR"):
        raise ValueError(f"unknown semantics {semantics!r}")
    names = ["att", "loc", "cons", "AR" if semantics == "IAR" else semantics]
    if kind == "P":
        names.append("Pareto")
    elif kind == "C":
        names.append("Completion")
    return names


def emit_semantics(kind: str, semantics: str) -> str:
    parts = []
    for name in semantics_blocks(kind, semantics):
        text = BLOCKS[name]
        if semantics == "IAR" and name != "att":
            text = per_cause(text)
        parts.append(text)
    return "\n".join(parts)


# -- input encoding --------------------------------------------------------

RESERVED_PREDICATES = frozenset(
    """data conf_init inConf_init conf inConf cause inCause pref_init pref level trans_cl trans_cl_bis
    cycle blocked rel succ gamma gamma_plus unstopped minimal included att reachable cause_fact conf_rel
    rem in sat neg invalid_conf valid invalid_att pref_comp trans_cl_comp not""".split()
)
RESERVED_CONSTANTS = frozenset({"not", "inf", "sup"})
_ASP_IDENT = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_ASP_VAR = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
_INT = re.compile(r"-?\d+\Z")


class AspError(ValueError):
    pass


@dataclass
class Names:
    """Reversible mapping from source names to solver-safe tokens."""

    predicates: dict[str, str] = field(default_factory=dict)
    constants: dict[str, str] = field(default_factory=dict)

    def _fresh(self, table: dict, wanted: str) -> str:
        used = set(table.values())
        token = wanted
        n = 1
        while token in used:
            n += 1
            token = f"{wanted}_{n}"
        return token

    def pred(self, name: str) -> str:
        tok = self.predicates.get(name)
        if tok is None:
            cand = name.lower()
            if not _ASP_IDENT.match(cand) or cand in RESERVED_PREDICATES:
                cand = "p_" + re.sub(r"\W", "_", name)
            if any(v == cand for v in self.predicates.values()):
                cand = self._fresh(self.predicates, "p_" + cand)
            tok = self.predicates[name] = cand
        return tok

    def const(self, value) -> str:
        if isinstance(value, FactRef):
            value = value.id
        if isinstance(value, int):
            return str(value)
        if isinstance(value, PredName):
            return self.pred(value.name)
        value = str(value)
        if _INT.match(value):
            return str(int(value))
        tok = self.constants.get(value)
        if tok is None:
            cand = value[:1].lower() + value[1:] if value else value
            if _ASP_IDENT.match(cand) and cand not in RESERVED_CONSTANTS:
                if any(v == cand for v in self.constants.values()):
                    cand = self._fresh(self.constants, "c_" + cand)
            elif value and '"' not in value and "\\" not in value and "\n" not in value:
                cand = '"' + value + '"'
            else:
                raise AspError(f"cannot encode constant {value!r}")
            tok = self.constants[value] = cand
        return tok

    def table(self) -> dict[str, dict[str, str]]:
        return {
            "predicates": {v: k for k, v in self.predicates.items()},
            "constants": {v: k for k, v in self.constants.items() if v != k},
        }


class _Vars:
    def __init__(self, reserved=()):
        self.map: dict[str, str] = {}
        self.used: set[str] = set(reserved)

    def __call__(self, name: str) -> str:
        if name.startswith("_#") or name == "_":
            return "_"
        tok = self.map.get(name)
        if tok is None:
            cand = name[:1].upper() + name[1:]
            if not _ASP_VAR.match(cand):
                cand = "V" + re.sub(r"\W", "_", name)
            while cand in self.used:
                cand = "V" + cand
            self.used.add(cand)
            tok = self.map[name] = cand
        return tok

    def fresh(self, base: str) -> str:
        n = 0
        while f"{base}{n}" in self.used:
            n += 1
        tok = f"{base}{n}"
        self.used.add(tok)
        return tok


def _term(t, names: Names, var: _Vars) -> str:
    if isinstance(t, Var):
        return var(t.name)
    return names.const(t)


def _tuple(items: list[str]) -> str:
    if len(items) == 1:
        return f"({items[0]},)"
    return "(" + ",".join(items) + ")"


def _args(items: list[str]) -> str:
    return "(" + ",".join(items) + ")"


@dataclass
class AspInput:
    data: str
    meta: str
    conflicts: str
    queries: str
    preferences: str
    names: Names
    warnings: list[str] = field(default_factory=list)

    def programs(self) -> dict[str, str]:
        return {
            "data": self.data,
            "meta": self.meta,
            "conflicts": self.conflicts,
            "queries": self.queries,
            "preferences": self.preferences,
        }


def _data_program(dataset: Dataset, names: Names) -> str:
    lines = []
    for fid in dataset.ids():
        fact = dataset[fid]
        i = names.const(fid)
        lines.append(f"data({i}).")
        lines.append(f"{names.pred(fact.pred)}{_args([i] + [names.const(c) for c in fact.args])}.")
    return "".join(l + "\n" for l in lines)


def _meta_program(meta: MetaDatabase, names: Names) -> str:
    lines = sorted(
        f"{names.pred(f.pred)}{_args([names.const(c) for c in f.args])}." for f in meta
    )
    return "".join(l + "\n" for l in lines)


def _comparison(c: Comparison, names: Names, var: _Vars) -> str:
    return f"{_term(c.left, names, var)} {c.op} {_term(c.right, names, var)}"


def _body_atoms(atoms, names: Names, var: _Vars, idbase: str) -> tuple[list[str], list[str]]:
    ids, lits = [], []
    for a in atoms:
        idv = var.fresh(idbase)
        ids.append(idv)
        lits.append(f"{names.pred(a.pred)}{_args([idv] + [_term(t, names, var) for t in a.terms])}")
    return ids, lits


def _conflict_program(constraints, names: Names) -> str:
    out = []
    for dc in constraints:
        var = _Vars()
        for a in dc.atoms:
            for t in a.terms:
                if isinstance(t, Var):
                    var(t.name)
        for c in dc.inequalities:
            for t in (c.left, c.right):
                if isinstance(t, Var):
                    var(t.name)
        ids, lits = _body_atoms(dc.atoms, names, var, "Id")
        lits += [_comparison(c, names, var) for c in dc.inequalities]
        body = ", ".join(lits)
        key = _tuple(ids)
        out.append(f"conf_init({key}) :- {body}.")
        for i in ids:
            out.append(f"inConf_init({key}, {i}) :- {body}.")
    return "".join(l + "\n" for l in out)


def _query_program(rewritings, names: Names) -> str:
    out = []
    for q in rewritings:
        out.append(f"% {q.name}")
        for body in q.bodies:
            var = _Vars()
            for v in q.answer_vars:
                var(v)
            for a in body:
                for t in a.terms:
                    if isinstance(t, Var):
                        var(t.name)
            ids, lits = _body_atoms(body, names, var, "Id")
            answer = "()" if not q.answer_vars else _tuple([var(v) for v in q.answer_vars])
            b = ", ".join(lits)
            key = _tuple(ids)
            out.append(f"cause({answer}, {key}) :- {b}.")
            for i in ids:
                out.append(f"inCause({key}, {i}) :- {b}.")
    return "".join(l + "\n" for l in out)


def _pred_assignments(rule: PreferenceRule, dataset: Dataset, taxonomy: Taxonomy):
    pvars = set()
    for lit in rule.body:
        for v in lit.vars() if hasattr(lit, "vars") else ():
            if v.startswith("%"):
                pvars.add(v)
    pvars = sorted(pvars)
    if not pvars:
        yield {}
        return
    domain = sorted(dataset.predicates | taxonomy.predicates)
    for combo in itertools.product(domain, repeat=len(pvars)):
        yield dict(zip(pvars, combo))


def _ground_pred(p, assignment: dict) -> str:
    if isinstance(p, PredVar):
        return assignment["%" + p.name]
    if isinstance(p, PredName):
        return p.name
    return p


def _sub_holds(lit: Sub, assignment: dict, taxonomy: Taxonomy) -> bool:
    return taxonomy.subsumes(_ground_pred(lit.lower, assignment), _ground_pred(lit.upper, assignment))


def _pref_program(rules, dataset: Dataset, meta: MetaDatabase, taxonomy: Taxonomy, names: Names, notes: list) -> str:
    out = []
    data_preds = dataset.predicates
    for r_index, rule in enumerate(rules):
        for assignment in _pred_assignments(rule, dataset, taxonomy):
            keep = True
            for lit in rule.body:
                inner = lit.atom if isinstance(lit, Negated) else lit
                if isinstance(inner, Sub):
                    ok = _sub_holds(inner, assignment, taxonomy)
                    if ok == isinstance(lit, Negated):
                        keep = False
                        break
            if not keep:
                continue
            var = _Vars(reserved=("C",))
            x1, x2 = (var(v) for v in rule.head)
            for lit in rule.body:
                for v in lit.vars():
                    if not v.startswith("%"):
                        var(v)
            pos_data, neg_data, pos_meta, neg_meta, comps, binds = [], [], [], [], [], []
            unsafe = False
            for lit in rule.body:
                negated = isinstance(lit, Negated)
                inner = lit.atom if negated else lit
                if isinstance(inner, Sub):
                    continue
                if isinstance(inner, Comparison):
                    comps.append(_comparison(inner, names, var))
                    continue
                if isinstance(inner, IdBinding):
                    a = inner.atom
                    pred = _ground_pred(a.pred, assignment)
                    args = [var(inner.var.name)] + [_term(t, names, var) for t in a.terms]
                    binds.append(f"{names.pred(pred)}{_args(args)}")
                    continue
                pred = _ground_pred(inner.pred, assignment)
                terms = [_term(t, names, var) for t in inner.terms]
                if pred in data_preds or (pred not in meta.predicates and pred in taxonomy.predicates):
                    idv = var.fresh("Y" if negated else "X")
                    text = f"{names.pred(pred)}{_args([idv] + terms)}"
                    if negated:
                        neg_data.append("not " + text)
                        unsafe = True
                    else:
                        pos_data.append(text)
                else:
                    text = f"{names.pred(pred)}{_args(terms)}"
                    (neg_meta if negated else pos_meta).append(("not " + text) if negated else text)
            body = [f"inConf(C, {x1})", f"inConf(C, {x2})"] + pos_data + neg_data + pos_meta + neg_meta + comps + binds
            out.append(f"pref_init({x1}, {x2}, {rule.level}) :- {', '.join(body)}.")
            if unsafe and not any(n.startswith(f"rule {r_index + 1} ") for n in notes):
                notes.append(
                    f"rule {r_index + 1} (level {rule.level}): negated dataset atom with an unbound "
                    "identifier variable; strict solvers reject this as unsafe"
                )
    for lv in sorted({r.level for r in rules}):
        out.append(f"level({lv}).")
    return "".join(l + "\n" for l in out)


def emit_input(
    dataset: Dataset,
    meta: MetaDatabase | None = None,
    constraints=(),
    rewritings=(),
    rules=(),
    taxonomy: Taxonomy | None = None,
) -> AspInput:
    """The five input programs plus the token mapping."""
    meta = meta or MetaDatabase()
    taxonomy = taxonomy or Taxonomy()
    names = Names()
    notes: list[str] = []
    data = _data_program(dataset, names)
    meta_text = _meta_program(meta, names)
    conf = _conflict_program(list(constraints), names)
    queries = _query_program(list(rewritings), names)
    prefs = _pref_program(list(rules), dataset, meta, taxonomy, names, notes)
    for n in notes:
        warnings.warn(n, stacklevel=2)
    return AspInput(data, meta_text, conf, queries, prefs, names, notes)
