import json

import pytest

from commuting_su2.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_groups_yn(capsys):
    code, out, _ = run(capsys, "groups", "--space", "yn", "--theory", "cohomology-z", "--n", "3")
    assert code == 0
    rows = {r["key"]: r["closed_form"] for r in json.loads(out)["reports"][0]["rows"]}
    assert rows["H3"] == "Z^3 + Z2"


def test_groups_k(capsys):
    code, out, _ = run(capsys, "groups", "--space", "blowup", "--theory", "k", "--n", "2", "--format", "markdown")
    assert code == 0 and "Z^2 + Z2^4" in out and "| K1 | Z^2 |" in out.replace("blowup | k | 2 | ", "")


def test_groups_oracle(capsys):
    code, out, err = run(capsys, "groups", "--space", "yn", "--n", "1", "--oracle")
    assert code == 0
    assert json.loads(out)["reports"][0]["verdict"] == "all degrees agree"
    assert "H^3" in err


def test_guard(capsys, monkeypatch):
    assert run(capsys, "groups", "--n", "7", "--oracle")[0] == 2
    monkeypatch.setenv("COMMUTING_SU2_MAX_N", "2")
    assert run(capsys, "groups", "--n", "3", "--oracle")[0] == 2
    assert run(capsys, "groups", "--n", "3", "--oracle", "--max-n", "3")[0] == 0


def test_usage_errors(capsys):
    assert run(capsys, "groups")[0] == 2
    assert run(capsys, "groups", "--n-range", "3..1")[0] == 2
    assert run(capsys, "nope")[0] == 2


def test_ring_tables(capsys):
    _, out, _ = run(capsys, "ring", "--space", "yn", "--n", "2")
    assert json.loads(out)["reports"][0]["products"]["a12"]["a12"] == "0"
    _, out, _ = run(capsys, "ring", "--space", "blowup", "--n", "3")
    t = json.loads(out)["reports"][0]["products"]
    assert t["x12"]["x23"].startswith("undetermined") and t["x12"]["x12"] == "u*x12"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n-range", "1..3")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "verify", "--check", "restriction", "--n", "10")
    assert code == 0 and "56" in json.loads(out)["checks"][0]["detail"][0]
    code, out, _ = run(capsys, "verify", "--check", "uct", "--n", "3", "--format", "csv")
    assert code == 0 and "b3(Y_3; Z2) = 8" in out


def test_restrict(capsys):
    code, out, _ = run(capsys, "restrict", "--n", "2")
    r = json.loads(out)["reports"][0]
    assert code == 0 and r["rank"] == 4 and r["columns"] == ["++", "+-", "-+", "--"]
    code, out, _ = run(capsys, "restrict", "--n", "2", "--format", "csv")
    assert out.splitlines()[2] == "u,1,1,1,1"


def test_fi_growth(capsys):
    _, out, _ = run(capsys, "fi-growth", "--n-range", "1..12", "--max-degree", "9")
    assert json.loads(out)["verdict"] == "non-polynomial up to degree 9"
    _, out, _ = run(capsys, "fi-growth", "--quantity", "h3-free", "--max-degree", "1")
    assert json.loads(out)["verdict"] == "polynomial of degree 1"
    _, out, _ = run(capsys, "fi-growth", "--values", "0,0,0,0", "--max-degree", "0")
    assert json.loads(out)["polynomial"]
    assert run(capsys, "fi-growth", "--values", "1,2", "--max-degree", "3")[0] == 2


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"space": "blowup", "theory": "k", "n": 2}))
    _, out, _ = run(capsys, "groups", "--config", str(cfg))
    rep = json.loads(out)["reports"][0]
    assert rep["space"] == "blowup" and rep["n"] == 2
    _, out, _ = run(capsys, "groups", "--config", str(cfg), "--n", "3")
    assert json.loads(out)["reports"][0]["n"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["groups", "--n-range", "1..3", "--space", "blowup", "--oracle"],
        ["ring", "--n", "3", "--space", "blowup"],
        ["verify", "--n", "2"],
        ["restrict", "--n", "3"],
        ["fi-growth"],
    ],
)
def test_json_is_deterministic_and_roundtrips(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert json.dumps(json.loads(first), sort_keys=True, indent=2) + "\n" == first


def test_out_file(capsys, tmp_path):
    target = tmp_path / "t.csv"
    assert run(capsys, "groups", "--n", "2", "--format", "csv", "--out", str(target))[1] == ""
    assert target.read_text().startswith("space,theory,n,key")
