import pytest

from priorepair.conflicts import conflicts
from priorepair.oracle import entailed_naive, optimal_repairs
from priorepair.pipeline import prioritize
from priorepair.semantics import (
    REPAIR_KINDS,
    SEMANTICS,
    Engine,
    answer_query,
    attack_relation,
    decide,
    localize,
)

from .randkb import random_kb


def _engine(kb):
    pr = prioritize(kb, "d")
    return Engine(kb, pr.priority, pr.conflicts)


def _q(kb, name):
    return next(q for q in kb.queries if q.name == name)


def test_figure_priority(running_kb):
    pr = prioritize(running_kb, "d")
    assert sorted(pr.priority) == [("1", "3"), ("5", "4"), ("6", "7")]


def test_attacks(running_kb):
    conf = conflicts(running_kb.dataset, running_kb.constraints)
    att = attack_relation(conf, [("5", "4")])
    assert att[("4", "5")] == {"4"}
    assert att[("1", "2")] == {"1", "2"}
    assert attack_relation([("9",)], [])[("9",)] == {"9"}


def test_localize(running_kb):
    eng = _engine(running_kb)
    causes = eng.causes(_q(running_kb, "q1"))[("a",)]
    reach = localize(causes, eng.ctx.attacks["P"])
    assert reach == {"1", "2", "3", "4", "5"}
    assert localize([{"1"}], {}) == {"1"}
    assert localize([], eng.ctx.attacks["P"]) == set()


def test_example_verdicts(running_kb):
    eng = _engine(running_kb)
    adm_b = eng.causes(_q(running_kb, "qadm"))[("b",)]
    apr_b = eng.causes(_q(running_kb, "qapr"))[("b",)]
    fpr_a = eng.causes(_q(running_kb, "qfpr"))[("a",)]
    fac_a = eng.causes(_q(running_kb, "q1"))[("a",)]
    assert eng.decide("IAR", "P", adm_b) is True
    assert eng.decide("brave", "P", apr_b) is False
    assert eng.decide("AR", "P", fpr_a) is False
    assert eng.decide("IAR", "C", fac_a) is True


def test_answer_query(running_kb):
    eng = _engine(running_kb)
    q1 = _q(running_kb, "q1")
    assert answer_query(q1, "IAR", "C", eng) == {("a",)}
    assert answer_query(q1, "brave", "S", eng) == {("a",), ("b",)}


def test_no_causes_not_entailed():
    for sem in SEMANTICS:
        for kind in REPAIR_KINDS:
            assert decide(sem, kind, [], [("1", "2")], []) is False


def test_unknown_names():
    with pytest.raises(ValueError):
        decide("XAR", "P", [{"1"}], [], [])
    with pytest.raises(ValueError):
        decide("AR", "Q", [{"1"}], [], [])


@pytest.mark.parametrize("seed", range(40))
def test_against_oracle(seed):
    r = random_kb(seed)
    eng = Engine(r.kb, r.priority, r.conflicts)
    ids = r.kb.dataset.ids()
    reps = {k: optimal_repairs(k, ids, r.conflicts, r.priority, pair_cap=200) for k in REPAIR_KINDS}
    for q in r.kb.queries:
        exact = eng.causes(q, exact=True)
        for ans, causes in eng.causes(q).items():
            ex = exact.get(ans, set())
            for kind in REPAIR_KINDS:
                for sem in SEMANTICS:
                    got = eng.decide(sem, kind, causes)
                    assert got == eng.decide(sem, kind, ex)
                    assert got == entailed_naive(sem, reps[kind], ex)


@pytest.mark.parametrize("seed", range(40))
def test_chains(seed):
    r = random_kb(seed)
    eng = Engine(r.kb, r.priority, r.conflicts)
    for q in r.kb.queries:
        for causes in eng.causes(q).values():
            v = {(k, s): eng.decide(s, k, causes) for k in REPAIR_KINDS for s in SEMANTICS}
            for k in REPAIR_KINDS:
                assert v[(k, "IAR")] <= v[(k, "AR")] <= v[(k, "brave")]
            assert v[("S", "AR")] <= v[("P", "AR")] <= v[("C", "AR")]
            assert v[("C", "brave")] <= v[("P", "brave")] <= v[("S", "brave")]
