import os

import pytest

from priorepair.oracle import (
    OracleCapExceeded,
    completion_optimal,
    decide_naive,
    entailed_naive,
    enumerate_repairs,
    fact_cap,
    optimal_repairs,
    pareto_optimal,
)
from priorepair.pipeline import prioritize

from .randkb import random_kb

R1 = frozenset({"1", "5", "6"})
R2 = frozenset({"2", "5", "6"})
R3 = frozenset({"3", "4", "6"})


def _setup(kb):
    pr = prioritize(kb, "d")
    return kb.dataset.ids(), pr.conflicts, pr.priority


def test_running_repairs(running_kb):
    ids, conf, prio = _setup(running_kb)
    reps = enumerate_repairs(ids, conf)
    assert len(reps) == 6
    assert set(pareto_optimal(reps, prio, conf, ids)) == {R1, R2, R3}
    assert set(completion_optimal(reps, prio, conf, ids)) == {R1, R2}


def test_trivial_repairs():
    assert enumerate_repairs(["1", "2"], []) == [frozenset({"1", "2"})]
    assert enumerate_repairs(["1"], [("1",)]) == [frozenset()]


def test_pareto_examples():
    reps = enumerate_repairs(["1", "2"], [("1", "2")])
    assert set(pareto_optimal(reps, [], [("1", "2")], ["1", "2"])) == set(reps)
    assert pareto_optimal(reps, [("1", "2")], [("1", "2")], ["1", "2"]) == [frozenset({"1"})]


def test_completion_examples():
    conf = [("1", "2")]
    reps = enumerate_repairs(["1", "2"], conf)
    assert set(completion_optimal(reps, [], conf, ["1", "2"])) == set(reps)
    assert completion_optimal(reps, [("2", "1")], conf, ["1", "2"]) == [frozenset({"2"})]


def test_cap(monkeypatch):
    monkeypatch.setenv("PRIOREPAIR_ORACLE_CAP", "3")
    assert fact_cap() == 3
    with pytest.raises(OracleCapExceeded):
        enumerate_repairs(["1", "2", "3", "4"], [])


def test_entailed_naive():
    reps = [frozenset({"1"}), frozenset({"2"})]
    assert entailed_naive("brave", reps, [{"1"}])
    assert not entailed_naive("AR", reps, [{"1"}])
    assert entailed_naive("AR", reps, [{"1"}, {"2"}])
    assert not entailed_naive("IAR", reps, [{"1"}, {"2"}])


def test_naive_verdicts(running_kb):
    ids, conf, prio = _setup(running_kb)
    assert decide_naive("IAR", "P", [{"6"}], ids, conf, prio)
    assert not decide_naive("brave", "P", [{"7"}], ids, conf, prio)
    assert not decide_naive("AR", "P", [{"2"}], ids, conf, prio)
    assert decide_naive("IAR", "C", [{"1"}, {"2"}, {"5"}], ids, conf, prio)


@pytest.mark.parametrize("seed", range(40))
def test_repair_chain(seed):
    r = random_kb(seed)
    ids = r.kb.dataset.ids()
    s = set(optimal_repairs("S", ids, r.conflicts, r.priority))
    p = set(optimal_repairs("P", ids, r.conflicts, r.priority))
    c = set(optimal_repairs("C", ids, r.conflicts, r.priority, pair_cap=200))
    assert c <= p <= s
    assert c, "completion-optimal repairs always exist"
