import pytest

from priorepair.asp import (
    AspError,
    Names,
    emit_input,
    emit_minconf,
    emit_priority,
    emit_semantics,
)
from priorepair.parsing import parse_constraints, parse_dataset

from .aspcheck import AspSyntaxError, check_program
from .conftest import GOLDEN


@pytest.mark.parametrize("strategy, rules", [("u", 6), ("d", 5), ("ru", 8), ("g", 17)])
def test_priority_goldens(strategy, rules):
    text = emit_priority(strategy)
    assert text == (GOLDEN / f"priority_{strategy}.lp").read_text()
    assert check_program(text) == rules


def test_u_ends_with_pref_rule():
    assert emit_priority("u").splitlines()[-1].startswith("pref(X, Y) :-")


def test_g_has_unstopped():
    assert "unstopped(K) :- level(I)" in emit_priority("g")


def test_minconf_golden():
    text = emit_minconf()
    assert text == (GOLDEN / "minconf.lp").read_text()
    assert check_program(text) == 4


def test_semantics_golden():
    assert emit_semantics("P", "AR") == (GOLDEN / "semantics_P_AR.lp").read_text()


@pytest.mark.parametrize("kind", ["S", "P", "C"])
@pytest.mark.parametrize("sem", ["brave", "AR", "IAR"])
def test_semantics_parse(kind, sem):
    assert check_program(emit_semantics(kind, sem)) > 0


def test_block_selection():
    pb = emit_semantics("P", "brave")
    assert ":- not sat." in pb and "valid(A) :- reachable(A), in(A)." in pb
    sar = emit_semantics("S", "AR")
    assert "valid(" not in sar and "pref_comp" not in sar
    assert "pref_comp(C, A, B) :- reachable(C, A), reachable(C, B), pref(A, B)." in emit_semantics("C", "IAR")


def test_iar_adds_cause_argument():
    text = emit_semantics("P", "IAR")
    assert "reachable(C, A) :- cause_fact(C, A)." in text
    assert "in(C, A) :- reachable(C, A), not rem(C, A)." in text
    # the global attack block is shared by all causes
    assert text.startswith("-att(X, A) :- inConf(X, A)")


def test_running_input(running_rules_kb):
    kb = running_rules_kb
    with pytest.warns(UserWarning, match="unsafe"):
        out = emit_input(kb.dataset, kb.meta, kb.constraints, kb.queries, kb.rules, kb.taxonomy)
    assert "data(1).\napr(1,a).\n" in out.data
    assert "date(1,2014)." in out.meta
    assert out.preferences.rstrip().endswith("level(1).")
    for text in out.programs().values():
        check_program(text)
    assert out.warnings  # the negated Teach atom


def test_empty_rules_and_inequality():
    ds = parse_dataset("1 | P(a,1)\n2 | P(a,2)\n")
    dc = parse_constraints("P(x,y), P(x,z), y != z -> bot")
    out = emit_input(ds, constraints=dc)
    assert out.preferences == ""
    assert "Y != Z" in out.conflicts
    check_program(out.conflicts)


def test_names_are_reversible():
    names = Names()
    assert names.pred("Not") != "not"
    assert names.const("Ann") == "ann"
    assert names.const("ann") != "ann"
    t = names.table()
    assert t["constants"][names.const("ann")] == "ann"


def test_unsanitizable_constant():
    with pytest.raises(AspError):
        Names().const('say "hi"')


def test_checker_rejects_garbage():
    with pytest.raises(AspSyntaxError):
        check_program("p(X :- q.")
