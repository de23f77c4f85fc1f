import json
import os
import subprocess
import sys

import pytest

from racg.cli import main
from conftest import FIXTURES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fx(name):
    return FIXTURES / f"{name}.json"


def test_cliquegraph_single_vertex(capsys):
    code, out, _ = run(capsys, "cliquegraph", "--json", fx("k1"))
    assert code == 0
    assert json.loads(out) == {"vertices": ["{a}"], "edges": [], "labels": {"{a}": ["a"]}}


def test_cliquegraph_fig1_matches_stored_bytes(capsys):
    _, out, _ = run(capsys, "cliquegraph", "--json", fx("fig1"))
    assert out.encode() == (FIXTURES / "fig1.cliquegraph.expected.json").read_bytes()


def test_output_is_deterministic(capsys):
    outs = {run(capsys, "recognize", "--json", fx("ex31"))[1] for _ in range(3)}
    assert len(outs) == 1


def test_dot_output(capsys):
    code, out, _ = run(capsys, "collapse", "--dot", fx("k7"))
    assert code == 0 and out.startswith("graph G {") and out.count("--") == 3


def test_dot_rejected_for_non_graph_command(capsys):
    code, _, err = run(capsys, "check", "--dot", fx("k1"))
    assert code == 1 and "--dot" in err


def test_check_fig9(capsys):
    code, out, _ = run(capsys, "check", fx("fig9"))
    assert code == 0
    assert "at {a,b,c}: LHS 3 > k_J 2" in out
    code, out, _ = run(capsys, "check", "--json", fx("fig9"))
    assert json.loads(out)["inclusion_exclusion_ok"] is False


def test_collapse_failure_exits_1(capsys):
    code, _, err = run(capsys, "collapse", fx("fig9"))
    assert code == 1 and "Inclusion-Exclusion" in err


def test_recognize_ex31(capsys):
    code, out, _ = run(capsys, "recognize", "--json", fx("ex31"))
    assert code == 0
    v = json.loads(out)
    assert v["outcome"] == "True"
    assert len(v["certificate"]["presentation_graph"]["edges"]) == 7


def test_recognize_negative_exit_0(capsys):
    code, out, _ = run(capsys, "recognize", fx("fig6"))
    assert code == 0 and out.startswith("outcome: False")


def test_malformed_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": ["a"], "edges": [["a", "b"]]}')
    assert run(capsys, "check", bad)[0] == 1
    bad.write_text("{")
    assert run(capsys, "recognize", bad)[0] == 1
    assert run(capsys, "check", tmp_path / "missing.json")[0] == 1


def test_flag_validation(capsys):
    assert run(capsys, "recognize", "--radius", "0", fx("k1"))[0] == 1
    with pytest.raises(SystemExit):
        main(["recognize", "--radius", "x", str(fx("k1"))])


def test_max_vertices_is_a_resource_limit(capsys):
    code, _, err = run(capsys, "cliquegraph", "--max-vertices", "3", fx("fig1"))
    assert code == 2 and "max-vertices" in err


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("RACG_BUDGET_MS", "0")
    code, out, _ = run(capsys, "recognize", "--radius", "6", fx("ex35"))
    assert code == 2 and "resource-limit" in out
    monkeypatch.setenv("RACG_BUDGET_MS", "soon")
    assert run(capsys, "check", fx("k1"))[0] == 1


def test_other_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "poset", "--json", fx("fig2"))
    assert code == 0 and json.loads(out)["hasse"] == [[0, 3], [1, 3], [2, 3]]
    code, out, _ = run(capsys, "invgraph", fx("k3"))
    assert code == 0 and "7 vertices, 21 edges" in out
    code, out, _ = run(capsys, "invgraph", "--json", "--extension", fx("ex35"), "--radius", "4")
    assert code == 0 and len(json.loads(out)["vertices"]) == 11
    assert run(capsys, "invgraph")[0] == 1
    code, out, _ = run(capsys, "extend", "--json", fx("ex37"))
    assert len(json.loads(out)["defining_graph"]["edges"]) == 14
    code, out, _ = run(capsys, "extend", fx("ex35"))
    assert code == 0 and "do not commute" in out
    code, out, _ = run(capsys, "sils", fx("p3"))
    assert out == "no SILs\n"
    code, out, _ = run(capsys, "decompose", "--json", fx("fig12"))
    assert len(json.loads(out)) == 6
    pres = tmp_path / "p.json"
    pres.write_text('{"generators": ["a", "b"], "relators": [["a", "a"], ["a", "b", "a", "b"]]}')
    code, out, _ = run(capsys, "abelianize", pres)
    assert out == "Z/2 x Z/2\n"
    mat = tmp_path / "m.json"
    mat.write_text('{"matrix": [[2, 4], [6, 8]]}')
    code, out, _ = run(capsys, "snf", "--json", mat)
    assert json.loads(out)["invariant_factors"] == [2, 4]
    mat.write_text("[[1, 2], [3]]")
    assert run(capsys, "snf", mat)[0] == 1


def test_fixture_paths_resolve_from_any_directory(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "cliquegraph", "fixtures/k1.json")
    assert code == 0 and "1 vertices" in out


def test_batch_all_fixtures(capsys):
    code, out, _ = run(capsys, "batch", "--json", FIXTURES / "manifest.json")
    assert code == 0
    rows = json.loads(out)
    assert rows and all(r["match"] for r in rows), [r for r in rows if not r["match"]]


def test_batch_empty_and_missing(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    code, out, _ = run(capsys, "batch", "--json", empty)
    assert code == 0 and json.loads(out) == []
    m = tmp_path / "m.json"
    m.write_text(json.dumps([{"path": "gone.json"}, {"path": str(fx("k1")), "expected": "True"}]))
    code, out, err = run(capsys, "batch", "--json", "--jobs", "2", m)
    rows = json.loads(out)
    assert code == 0 and "gone.json" in err
    assert rows[0]["outcome"] == "error" and rows[1]["match"] is True
    m.write_text('{"entries": 3}')
    assert run(capsys, "batch", m)[0] == 1


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "racg.cli", "check", str(fx("k7"))], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.endswith("clique graph: yes\n")
