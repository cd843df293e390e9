import json

import pytest

from priorepair.cli import main

from .conftest import running_paths, rug_paths


def _flags(paths):
    out = []
    for k, v in paths.items():
        out += [f"--{k}", str(v)]
    return out


def _run(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_answer_running_example(capsys):
    code, out, _ = _run(capsys, ["answer", *_flags(running_paths()), "--strategy", "d", "--repair", "P", "--sem", "IAR"])
    assert code == 0
    rows = [json.loads(l) for l in out.splitlines()]
    verdict = {(r["query"], tuple(r["tuple"])): r["entailed"] for r in rows}
    assert verdict[("qadm", ("b",))] is True
    assert verdict[("qfpr", ("a",))] is False
    assert all(r["semantics"] == "P-IAR" for r in rows)


def test_answer_all_and_jobs_agree(capsys):
    base = ["answer", *_flags(running_paths()), "--strategy", "d", "--repair", "all", "--sem", "all"]
    _, one, _ = _run(capsys, base)
    _, two, _ = _run(capsys, base + ["--jobs", "3"])
    assert one == two
    rows = [json.loads(l) for l in one.splitlines()]
    v = {(r["query"], tuple(r["tuple"]), r["semantics"]): r["entailed"] for r in rows}
    assert v[("q1", ("a",), "C-IAR")] is True
    assert v[("qapr", ("b",), "P-brave")] is False
    assert v[("qfpr", ("a",), "P-AR")] is False


def test_priority_grounded_rug1(capsys):
    code, out, err = _run(capsys, ["priority", *_flags(rug_paths("rug1")), "--strategy", "g"])
    assert code == 0
    assert json.loads(out) == [
        {"from": "alpha", "to": "beta"},
        {"from": "alpha", "to": "gamma"},
        {"from": "beta", "to": "gamma"},
    ]
    assert "cycle" in err


def test_conflicts_empty(tmp_path, capsys):
    (tmp_path / "e.dkb").write_text("")
    code, out, _ = _run(capsys, ["conflicts", "--data", str(tmp_path / "e.dkb")])
    assert code == 0 and json.loads(out) == []


def test_conflicts_running(capsys):
    p = running_paths()
    _, out, _ = _run(capsys, ["conflicts", "--data", str(p["data"]), "--constraints", str(p["constraints"])])
    assert len(json.loads(out)) == 8


def test_pretty(capsys):
    p = running_paths()
    _, out, _ = _run(capsys, ["conflicts", "--pretty", "--data", str(p["data"]), "--constraints", str(p["constraints"])])
    assert out.startswith("[\n")


def test_input_errors(tmp_path, capsys):
    code, out, err = _run(capsys, ["conflicts", "--data", str(tmp_path / "missing.dkb")])
    assert code == 2 and out == "" and "missing.dkb" in err
    bad = tmp_path / "bad.dkb"
    bad.write_text("1 | P(a)\n1 | P(b)\n")
    code, _, err = _run(capsys, ["conflicts", "--data", str(bad)])
    assert code == 2 and "bad.dkb: line 2" in err


def test_repairs_and_cap(capsys, monkeypatch):
    code, out, _ = _run(capsys, ["repairs", *_flags(running_paths()), "--strategy", "d", "--kind", "C"])
    assert code == 0
    assert [json.loads(l) for l in out.splitlines()] == [["1", "5", "6"], ["2", "5", "6"]]
    monkeypatch.setenv("PRIOREPAIR_ORACLE_CAP", "3")
    code, _, err = _run(capsys, ["repairs", *_flags(running_paths()), "--kind", "S"])
    assert code == 3 and "cap" in err


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["emit-asp", "priority", "--strategy", "d"], "pref(X, Y) :- pref_init(X, Y, I), not cycle(X, Y, I)."),
        (["emit-asp", "minconf"], "conf(X) :- conf_init(X), not minimal(X)."),
        (["emit-asp", "semantics", "--repair", "C", "--sem", "brave"], ":- not sat."),
    ],
)
def test_emit_asp(capsys, argv, needle):
    code, out, _ = _run(capsys, argv)
    assert code == 0 and needle in out


def test_emit_asp_input(tmp_path, capsys):
    paths = running_paths("ex")
    code, _, err = _run(capsys, ["emit-asp", "input", *_flags(paths), "--out", str(tmp_path)])
    assert code == 0 and "unsafe" in err
    assert "apr(1,a)." in (tmp_path / "data.lp").read_text()
    names = json.loads((tmp_path / "names.json").read_text())
    assert names["predicates"]["apr"] == "APr"


def test_gen(tmp_path, capsys):
    code, out, _ = _run(capsys, ["gen", "--facts", "30", "--conflict-rate", "0.2", "--seed", "4", "--out", str(tmp_path)])
    assert code == 0 and len(out.splitlines()) == 5
    code, _, err = _run(capsys, ["gen", "--facts", "10", "--conflict-rate", "0.05", "--out", str(tmp_path)])
    assert code == 2 and "too few" in err
