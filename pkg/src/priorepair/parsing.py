"""Parsers and serializers for the six input formats.

========  ===================================================
``.dkb``  ``<id> | <Pred>(<c>,...)``
``.meta`` ``<Pred>(<arg>,...)`` with ``#<id>`` fact references
``.dc``   ``<atom>, ..., <var> != <term> -> bot``
``.ucq``  ``<name>(<vars>) <- <atom>, ...`` (one line per union member)
``.prefs`` ``[level k]`` headers, ``pref(x1,x2) <- <lit>, ...``
``.tax``  ``<Pred> < <Pred>``
========  ===================================================

A ``#`` starts a comment when it begins a line or is followed by whitespace;
otherwise it is the fact-reference sigil.  In rule-like formats, identifiers
starting with a lowercase letter or ``_`` are variables, ``_`` alone is a fresh
anonymous variable, and symbols are written either quoted (``"a"``) or as
capitalized identifiers.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple

from .model import (
    COMPARISON_OPS,
    Atom,
    Comparison,
    Dataset,
    DenialConstraint,
    Fact,
    FactRef,
    IdBinding,
    MetaDatabase,
    ModelError,
    Negated,
    PredVar,
    PreferenceRule,
    QueryRewriting,
    Sub,
    Taxonomy,
    Var,
    classify,
    positive_vars,
)

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
VAR_RE = re.compile(r"[a-z_][A-Za-z0-9_]*\Z")
UPPER_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")
ANON_PREFIX = "_#"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->|<-)
  | (?P<op>!=|<=|>=|=|<|>)
  | (?P<punct>[(),|\[\]%])
  | (?P<ref>\#[^\s(),|\#"\[\]%=!<>]+)
  | (?P<string>"[^"\n]*")
  | (?P<word>[^\s(),|\#"\[\]%=!<>]+)
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def _strip_comment(line: str) -> str:
    for i, ch in enumerate(line):
        if ch != "#":
            continue
        if not line[:i].strip() or i + 1 == len(line) or line[i + 1].isspace():
            return line[:i]
    return line


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        pos = 0
        while pos < len(line):
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                raise ModelError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            kind = m.lastgroup
            if kind != "ws":
                tokens.append(Token(kind, m.group(), lineno, pos + 1))
            pos = m.end()
    return tokens


class _Stream:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ModelError("unexpected end of input", last.line if last else None)
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ModelError:
        tok = tok or self.peek() or (self.tokens[-1] if self.tokens else None)
        if tok is None:
            return ModelError(message)
        return ModelError(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text!r}", tok)
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text and tok.kind != "string":
            self.pos += 1
            return True
        return False

    def ident(self, what: str = "predicate name") -> Token:
        tok = self.next()
        if tok.kind != "word" or not IDENT_RE.match(tok.text):
            raise self.error(f"expected {what}, found {tok.text!r}", tok)
        return tok


# --- datasets and meta-databases ---------------------------------------------


def _data_constant(stream: _Stream) -> object:
    tok = stream.next()
    if tok.kind != "word":
        raise stream.error(f"expected constant, found {tok.text!r}", tok)
    return classify(tok.text)


def parse_dataset(text: str) -> Dataset:
    stream = _Stream(text)
    rows: list[tuple[str, Fact]] = []
    seen: dict[str, Token] = {}
    arities: dict[str, int] = {}
    index: dict[Fact, str] = {}
    while not stream.at_end():
        id_tok = stream.next()
        if id_tok.kind != "word":
            raise stream.error(f"expected fact id, found {id_tok.text!r}", id_tok)
        if id_tok.text in seen:
            raise stream.error(f"duplicate fact id {id_tok.text!r}", id_tok)
        seen[id_tok.text] = id_tok
        stream.expect("|")
        pred_tok = stream.ident()
        stream.expect("(")
        args = [_data_constant(stream)]
        while stream.accept(","):
            args.append(_data_constant(stream))
        stream.expect(")")
        fact = Fact(pred_tok.text, tuple(args))
        if arities.setdefault(fact.pred, len(args)) != len(args):
            raise stream.error(
                f"arity clash for {fact.pred}: {arities[fact.pred]} vs {len(args)}", pred_tok
            )
        if fact in index:
            raise stream.error(f"fact {fact} already has id {index[fact]!r}", id_tok)
        index[fact] = id_tok.text
        rows.append((id_tok.text, fact))
    return Dataset(rows)


def parse_meta(text: str, dataset: Dataset | None = None) -> MetaDatabase:
    stream = _Stream(text)
    facts: list[tuple[Fact, Token]] = []
    while not stream.at_end():
        pred_tok = stream.ident()
        stream.expect("(")
        args = []
        while True:
            tok = stream.next()
            if tok.kind == "ref":
                args.append(FactRef(tok.text[1:]))
            elif tok.kind == "word":
                args.append(classify(tok.text))
            else:
                raise stream.error(f"expected meta argument, found {tok.text!r}", tok)
            if not stream.accept(","):
                break
        stream.expect(")")
        facts.append((Fact(pred_tok.text, tuple(args)), pred_tok))
    meta = MetaDatabase()
    for fact, tok in facts:
        try:
            meta._add(fact, dataset)
        except ModelError as exc:
            raise ModelError(str(exc), tok.line, tok.col) from None
    return meta


# --- terms and atoms for rule-like formats -----------------------------------


class _Scope:
    """Per-statement counter for anonymous variables."""

    def __init__(self) -> None:
        self.anon = 0

    def fresh(self) -> Var:
        self.anon += 1
        return Var(f"{ANON_PREFIX}{self.anon}")


def _term(stream: _Stream, scope: _Scope):
    tok = stream.next()
    if tok.kind == "string":
        return tok.text[1:-1]
    if tok.kind == "ref":
        return FactRef(tok.text[1:])
    if tok.kind != "word":
        raise stream.error(f"expected term, found {tok.text!r}", tok)
    if tok.text == "_":
        return scope.fresh()
    value = classify(tok.text)
    if isinstance(value, int):
        return value
    if VAR_RE.match(tok.text):
        return Var(tok.text)
    if UPPER_RE.match(tok.text):
        return tok.text
    raise stream.error(f"cannot read {tok.text!r} as a term (quote symbols)", tok)


def _pred_term(stream: _Stream):
    if stream.accept("%"):
        return PredVar(stream.ident("predicate variable").text)
    return stream.ident().text


def _atom(stream: _Stream, scope: _Scope, allow_pred_var: bool = False) -> Atom:
    if allow_pred_var:
        pred = _pred_term(stream)
    else:
        pred = stream.ident().text
    stream.expect("(")
    terms = [_term(stream, scope)]
    while stream.accept(","):
        terms.append(_term(stream, scope))
    stream.expect(")")
    return Atom(pred, tuple(terms))


def parse_constraints(text: str) -> list[DenialConstraint]:
    stream = _Stream(text)
    out: list[DenialConstraint] = []
    while not stream.at_end():
        scope = _Scope()
        start = stream.peek()
        atoms: list[Atom] = []
        ineqs: list[Comparison] = []
        while True:
            nxt = stream.peek(1)
            if nxt is not None and nxt.text == "(" and not ineqs:
                atoms.append(_atom(stream, scope))
            else:
                left = _term(stream, scope)
                op = stream.next()
                if op.text != "!=":
                    raise stream.error(f"expected '!=', found {op.text!r}", op)
                right = _term(stream, scope)
                if not isinstance(left, Var):
                    raise stream.error("left side of an inequality must be a variable", op)
                ineqs.append(Comparison("!=", left, right))
            if not stream.accept(","):
                break
        stream.expect("->")
        stream.expect("bot")
        if not atoms:
            raise stream.error("constraint without relational atoms", start)
        bound = positive_vars(atoms)
        for c in ineqs:
            for v in c.vars():
                if v not in bound:
                    raise stream.error(f"unsafe variable {_var_text(v)} in inequality", start)
        out.append(DenialConstraint(tuple(atoms), tuple(ineqs)))
    return out


def parse_queries(text: str) -> list[QueryRewriting]:
    stream = _Stream(text)
    order: list[str] = []
    heads: dict[str, tuple[str, ...]] = {}
    bodies: dict[str, list[tuple[Atom, ...]]] = {}
    while not stream.at_end():
        scope = _Scope()
        name_tok = stream.ident("query name")
        stream.expect("(")
        answer: list[str] = []
        if not stream.accept(")"):
            while True:
                t = _term(stream, scope)
                if not isinstance(t, Var) or t.name.startswith(ANON_PREFIX):
                    raise stream.error("answer positions must hold named variables", name_tok)
                answer.append(t.name)
                if not stream.accept(","):
                    break
            stream.expect(")")
        stream.expect("<-")
        atoms = [_atom(stream, scope)]
        while stream.accept(","):
            atoms.append(_atom(stream, scope))
        bound = positive_vars(atoms)
        for v in answer:
            if v not in bound:
                raise stream.error(f"answer variable {v} missing from body", name_tok)
        name = name_tok.text
        if name in heads and heads[name] != tuple(answer):
            raise stream.error(f"query {name} declared with different answer variables", name_tok)
        if name not in heads:
            order.append(name)
            heads[name] = tuple(answer)
            bodies[name] = []
        bodies[name].append(tuple(atoms))
    return [QueryRewriting(n, heads[n], tuple(bodies[n])) for n in order]


def _literal(stream: _Stream, scope: _Scope):
    tok = stream.peek()
    nxt = stream.peek(1)
    if tok is None:
        raise stream.error("expected literal")
    if tok.kind == "word" and tok.text == "not" and nxt is not None and nxt.text != "(" and nxt.kind != "op":
        stream.next()
        return Negated(_atom(stream, scope))
    if tok.kind == "word" and tok.text == "sub" and nxt is not None and nxt.text == "(":
        stream.next()
        stream.expect("(")
        lower = _pred_term(stream)
        stream.expect(",")
        upper = _pred_term(stream)
        stream.expect(")")
        return Sub(lower, upper)
    if tok.kind == "word" and nxt is not None and nxt.text == "(":
        return _atom(stream, scope)
    left = _term(stream, scope)
    op = stream.next()
    if op.kind != "op" or op.text not in COMPARISON_OPS:
        raise stream.error(f"expected comparison operator, found {op.text!r}", op)
    id_tok = stream.peek()
    bracket = stream.peek(1)
    if op.text == "=" and id_tok is not None and id_tok.text == "id" and bracket is not None and bracket.text == "[":
        if not isinstance(left, Var):
            raise stream.error("id binding needs a variable on the left", op)
        stream.next()
        stream.expect("[")
        atom = _atom(stream, scope, allow_pred_var=True)
        stream.expect("]")
        return IdBinding(left, atom)
    right = _term(stream, scope)
    return Comparison(op.text, left, right)


def parse_rules(text: str) -> list[PreferenceRule]:
    stream = _Stream(text)
    level = 1
    rules: list[PreferenceRule] = []
    while not stream.at_end():
        if stream.accept("["):
            kw = stream.next()
            if kw.text != "level":
                raise stream.error(f"expected 'level', found {kw.text!r}", kw)
            num = stream.next()
            if num.kind != "word" or not num.text.isdigit() or int(num.text) < 1:
                raise stream.error("level must be a positive integer", num)
            level = int(num.text)
            stream.expect("]")
            continue
        scope = _Scope()
        head_tok = stream.expect("pref")
        stream.expect("(")
        x1 = _term(stream, scope)
        stream.expect(",")
        x2 = _term(stream, scope)
        stream.expect(")")
        if not (isinstance(x1, Var) and isinstance(x2, Var)) or x1.name.startswith(ANON_PREFIX) or x2.name.startswith(ANON_PREFIX):
            raise stream.error("rule head must be pref(<var>, <var>)", head_tok)
        stream.expect("<-")
        body = [_literal(stream, scope)]
        while stream.accept(","):
            body.append(_literal(stream, scope))
        rule = PreferenceRule((x1.name, x2.name), tuple(body), level)
        problem = rule_problem(rule)
        if problem:
            raise stream.error(problem, head_tok)
        rules.append(rule)
    return rules


def _head_binders(body) -> set[str]:
    out: set[str] = set()
    for lit in body:
        if isinstance(lit, IdBinding):
            out.add(lit.var.name)
        elif isinstance(lit, Atom):
            out |= {t.name for t in lit.terms if isinstance(t, Var)}
    return out


def rule_problem(rule: PreferenceRule) -> str | None:
    """Syntactic safety check; returns a message or None."""
    binders = _head_binders(rule.body)
    for x in rule.head:
        if x not in binders:
            return f"unbound head variable {x}"
    bound = positive_vars(rule.body)
    for lit in rule.body:
        if isinstance(lit, Comparison):
            for v in lit.vars():
                if v not in bound:
                    return f"unsafe variable {_var_text(v)} in comparison"
        if isinstance(lit, Negated) and isinstance(lit.atom.pred, PredVar):
            return "negated atoms need a concrete predicate"
    return None


def check_rules(rules: Iterable[PreferenceRule], meta: MetaDatabase) -> None:
    """Head variables must sit at fact-id positions of meta atoms (or be id-bound)."""
    for rule in rules:
        for x in rule.head:
            ok = False
            for lit in rule.body:
                if isinstance(lit, IdBinding) and lit.var.name == x:
                    ok = True
                elif isinstance(lit, Atom) and isinstance(lit.pred, str):
                    positions = meta.id_positions.get(lit.pred)
                    for i, t in enumerate(lit.terms):
                        # predicates without meta facts cannot be checked; such rules never fire
                        if t == Var(x) and (positions is None or i in positions):
                            ok = True
            if not ok:
                raise ModelError(f"head variable {x} of a level-{rule.level} rule is not bound to a fact id")


def parse_taxonomy(text: str) -> Taxonomy:
    stream = _Stream(text)
    pairs: list[tuple[str, str]] = []
    while not stream.at_end():
        lower = stream.ident().text
        stream.expect("<")
        upper = stream.ident().text
        pairs.append((lower, upper))
    return Taxonomy(pairs)


def _var_text(name: str) -> str:
    return "_" if name.startswith(ANON_PREFIX) else name


# --- serializers -------------------------------------------------------------


def dump_dataset(dataset: Dataset) -> str:
    return "".join(f"{fid} | {fact}\n" for fid, fact in dataset.items())


def dump_meta(meta: MetaDatabase) -> str:
    return "".join(f"{fact}\n" for fact in meta)


def format_term(t) -> str:
    if isinstance(t, Var):
        return _var_text(t.name)
    if isinstance(t, FactRef):
        return str(t)
    if isinstance(t, int):
        return str(t)
    if UPPER_RE.match(t):
        return t
    return f'"{t}"'


def format_pred(p) -> str:
    return str(p)


def format_atom(a: Atom) -> str:
    return f"{format_pred(a.pred)}({', '.join(format_term(t) for t in a.terms)})"


def format_literal(lit) -> str:
    if isinstance(lit, Atom):
        return format_atom(lit)
    if isinstance(lit, Negated):
        return "not " + format_atom(lit.atom)
    if isinstance(lit, Comparison):
        return f"{format_term(lit.left)} {lit.op} {format_term(lit.right)}"
    if isinstance(lit, IdBinding):
        return f"{lit.var.name} = id[{format_atom(lit.atom)}]"
    if isinstance(lit, Sub):
        return f"sub({format_pred(lit.lower)}, {format_pred(lit.upper)})"
    raise TypeError(lit)


def dump_constraints(constraints: Iterable[DenialConstraint]) -> str:
    return "".join(
        ", ".join(format_literal(lit) for lit in c.body) + " -> bot\n" for c in constraints
    )


def dump_queries(queries: Iterable[QueryRewriting]) -> str:
    lines = []
    for q in queries:
        head = f"{q.name}({', '.join(q.answer_vars)})"
        for body in q.bodies:
            lines.append(f"{head} <- {', '.join(format_atom(a) for a in body)}\n")
    return "".join(lines)


def dump_rules(rules: Iterable[PreferenceRule]) -> str:
    chunks = []
    current = None
    for r in rules:
        if r.level != current:
            chunks.append(f"[level {r.level}]\n")
            current = r.level
        body = ", ".join(format_literal(lit) for lit in r.body)
        chunks.append(f"pref({r.head[0]}, {r.head[1]}) <- {body}\n")
    return "".join(chunks)


def dump_taxonomy(taxonomy: Taxonomy) -> str:
    return "".join(f"{p} < {q}\n" for p, q in sorted(taxonomy.pairs))
