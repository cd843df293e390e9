import itertools

from hypothesis import given, settings, strategies as st

from priorepair.matcher import compare, holds, match
from priorepair.model import Atom, Comparison, Dataset, Fact, FactRef, IdBinding, Negated, Var, value_key
from priorepair.parsing import parse_rules


def test_first_rule_on_dates(running_rules_kb):
    kb = running_rules_kb
    body = parse_rules("pref(x1,x2) <- Date(x1,y1), Date(x2,y2), y2 < y1")[0].body
    pairs = {(m.binding["x1"].id, m.binding["x2"].id) for m in match(body, kb.dataset, kb.meta)}
    assert ("2", "1") in pairs
    assert pairs == {("1", "3"), ("2", "1"), ("2", "3")}


def test_single_atom(running_kb):
    ms = list(match((Atom("APr", (Var("x"),)),), running_kb.dataset))
    assert sorted(m.binding["x"] for m in ms) == ["a", "b"]
    assert sorted(next(iter(m.support)) for m in ms) == ["1", "7"]


def test_negation_as_failure(running_kb):
    ds = running_kb.dataset
    assert holds((Negated(Atom("Teach", ("b", Var("_#1")))),), ds)
    assert not holds((Negated(Atom("Teach", ("a", Var("_#1")))),), ds)


def test_id_binding(running_kb):
    ms = list(match((IdBinding(Var("i"), Atom("FPr", (Var("y"),))),), running_kb.dataset))
    assert [(m.binding["i"], m.binding["y"]) for m in ms] == [(FactRef("2"), "a")]


def test_comparisons_are_total():
    assert compare("<", 5, "a")
    assert compare("<", "B", "a")
    assert compare("!=", 1, "1")
    assert not compare("=", 1, "1")


# -- brute force ---------------------------------------------------------

PREDS = {"P": 2, "Q": 1}
DOM = [1, 2, "a", "b"]
VARS = [Var(n) for n in "wxyz"]

facts_st = st.sets(
    st.one_of(
        st.tuples(st.just("P"), st.sampled_from(DOM), st.sampled_from(DOM)),
        st.tuples(st.just("Q"), st.sampled_from(DOM)),
    ),
    max_size=8,
)
term_st = st.one_of(st.sampled_from(VARS), st.sampled_from(DOM))


@st.composite
def bodies(draw):
    atoms = []
    for _ in range(draw(st.integers(1, 3))):
        p = draw(st.sampled_from(sorted(PREDS)))
        atoms.append(Atom(p, tuple(draw(term_st) for _ in range(PREDS[p]))))
    bound = sorted({t.name for a in atoms for t in a.terms if isinstance(t, Var)})
    extra = []
    if bound and draw(st.booleans()):
        v = Var(draw(st.sampled_from(bound)))
        extra.append(Comparison(draw(st.sampled_from(["<", "<=", "!=", "="])), v, draw(st.sampled_from(DOM))))
    if bound and draw(st.booleans()):
        v = Var(draw(st.sampled_from(bound)))
        extra.append(Negated(Atom("Q", (v,))))
    return tuple(atoms + extra)


def _dataset(facts):
    items = sorted(facts, key=lambda f: (f[0], [value_key(v) for v in f[1:]]))
    return Dataset({str(i + 1): Fact(f[0], tuple(f[1:])) for i, f in enumerate(items)})


def _brute(body, ds):
    index = {(ds[i].pred, ds[i].args): i for i in ds.ids()}
    names = sorted({t.name for l in body if isinstance(l, Atom) for t in l.terms if isinstance(t, Var)})
    out = set()
    for values in itertools.product(DOM, repeat=len(names)):
        env = dict(zip(names, values))
        val = lambda t: env[t.name] if isinstance(t, Var) else t
        support = []
        ok = True
        for lit in body:
            if isinstance(lit, Atom):
                fid = index.get((lit.pred, tuple(val(t) for t in lit.terms)))
                if fid is None:
                    ok = False
                    break
                support.append(fid)
            elif isinstance(lit, Comparison):
                ok = compare(lit.op, val(lit.left), val(lit.right))
            elif isinstance(lit, Negated):
                ok = (lit.atom.pred, tuple(val(t) for t in lit.atom.terms)) not in index
            if not ok:
                break
        if ok:
            out.add((tuple(sorted(env.items(), key=str)), frozenset(support)))
    return out


@settings(max_examples=300, deadline=None)
@given(facts_st, bodies())
def test_match_equals_brute_force(facts, body):
    ds = _dataset(facts)
    got = set()
    for m in match(body, ds):
        env = {k: v for k, v in m.binding.items() if not k.startswith("_")}
        got.add((tuple(sorted(env.items(), key=str)), m.support))
    assert got == _brute(body, ds)


@settings(max_examples=150, deadline=None)
@given(facts_st, facts_st, bodies())
def test_monotone_without_negation(facts, more, body):
    body = tuple(l for l in body if not isinstance(l, Negated))
    small = {tuple(sorted(m.binding.items(), key=str)) for m in match(body, _dataset(facts))}
    big = {tuple(sorted(m.binding.items(), key=str)) for m in match(body, _dataset(facts | more))}
    assert small <= big
