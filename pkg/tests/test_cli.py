import json

import pytest

from conftest import DATA, GOLDEN
from lrgroups.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


GOLDEN_RUNS = [
    ("enumerate_L_S4.json", ["enumerate", "--pres", DATA / "L_S4.txt", "--sub", "s,t", "--table"]),
    ("lowindex_S4_6.json", ["lowindex", "--amalgam", "S4", "--index", 6, "--exact", "--lr-filter"]),
    ("validate.json", ["amalgam", "validate", "--amalgam", "S4", "--amalgam", "S3xS4"]),
    ("graph_c5c7.json", ["graph", "analyze", DATA / "c5c7.g", "--all-decompositions", "--self-dual"]),
    ("graph_c5c5.json", ["graph", "analyze", DATA / "c5c5.g", "--gens", DATA / "c5c5.gens",
                         "--all-decompositions", "--self-dual"]),
    ("completion_S4.json", ["graph", "build-completion", "--amalgam", "S4", "--require-lr"]),
]


@pytest.mark.parametrize("golden,argv", GOLDEN_RUNS, ids=[g for g, _ in GOLDEN_RUNS])
def test_golden(capsys, golden, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_enumerate_index(capsys):
    code, out, _ = run(capsys, "enumerate", "--pres", DATA / "L_S4.txt", "--sub", "s,t")
    assert code == 0 and json.loads(out)["index"] == 4


def test_graph_analyze_c5c7(capsys):
    code, out, _ = run(capsys, "graph", "analyze", DATA / "c5c7.g", "--all-decompositions")
    data = json.loads(out)
    assert code == 0
    assert data["decomposition_count"] == 1 and data["self_dual"] is False


def test_graph_rotations_not_lr(capsys):
    code, out, _ = run(capsys, "graph", "analyze", DATA / "c5c7.g", "--gens", DATA / "c5c7_rotations.gens")
    assert code == 0 and json.loads(out)["verdict"]["is_lr_group"] is False


def test_table1_single(capsys):
    code, out, _ = run(capsys, "table1", "--amalgam", "S4")
    data = json.loads(out)
    assert code == 0 and data["pass"] and [r["amalgam"] for r in data["reports"]] == ["S4"]


def test_table1_text(capsys):
    code, out, _ = run(capsys, "table1", "--amalgam", "S4", "--amalgam", "4AT", "--format", "text")
    assert code == 0
    assert out.splitlines()[-1] == "PASS"
    assert "t, x, y, ete, a, (ca)^((cet)^-1)" in out


def test_usage_errors(capsys):
    assert run(capsys, "table1", "--amalgam", "bogus")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "enumerate", "--amalgam", "S4", "--sub", "q")[0] == 2
    assert run(capsys, "graph", "analyze", DATA / "missing.g")[0] == 2
    assert run(capsys, "lowindex", "--amalgam", "S4", "--index", 99)[0] == 2
    code, _, err = run(capsys, "table1", "--all", "--node-cap", 0)
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_bad_generator_file(capsys, tmp_path):
    f = tmp_path / "bad.gens"
    f.write_text("(1 2)\n")
    assert run(capsys, "graph", "analyze", DATA / "c5c7.g", "--gens", f)[0] == 2


def test_resource_errors(capsys, monkeypatch):
    code, _, err = run(capsys, "lowindex", "--amalgam", "7AT", "--index", 2)
    assert code == 3
    msg = json.loads(err)["message"]
    assert "1458" in msg and "table1" in msg
    code, _, _ = run(capsys, "enumerate", "--amalgam", "S4", "--max-cosets", 50)
    assert code == 3
    monkeypatch.setenv("LRGROUPS_NODE_CAP", "1000")
    assert run(capsys, "lowindex", "--amalgam", "4AT", "--index", 54, "--exact")[0] == 3
    monkeypatch.setenv("LRGROUPS_NODE_CAP", "many")
    assert run(capsys, "lowindex", "--amalgam", "S4", "--index", 2)[0] == 2


def test_output_file(capsys, tmp_path):
    out = tmp_path / "v.json"
    assert run(capsys, "amalgam", "validate", "--amalgam", "S4", "-o", out)[0] == 0
    assert json.loads(out.read_text())["pass"] is True
