import json

import pytest

from railyard.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def body(text):
    return [l for l in text.splitlines() if l and not l.startswith("#")]


def test_zfun_routes(capsys):
    rc, out, _ = run(capsys, "zfun", "--aztec", "2", "--check")
    # one monomial per tiling, all with coefficient one
    terms = body(out)[0].split(" + ")
    assert rc == 0 and len(terms) == 8 and terms[0] == "1"
    assert "x[0]^2*x[1]*x[2]*x[3]^2" in terms
    rc, out, _ = run(capsys, "zfun", "--aztec", "2", "--q", "--degree", "8", "--check")
    assert rc == 0
    assert body(out) == ["1 + 2*q + q^2 + q^3 + 2*q^4 + q^5"]


def test_zfun_symbolic_spec(tmp_path, capsys):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"l": 0, "r": 1, "lr": "LR", "signs": "+-"}))
    rc, out, _ = run(capsys, "zfun", "--spec", str(f), "--degree", "3", "--check")
    assert rc == 0
    assert body(out) == ["1 + x[0]*x[1]"]


def test_corr_single_edge(tmp_path, capsys):
    f = tmp_path / "e.json"
    f.write_text(json.dumps([[0, "-1/2", -1, "1/2"]]))
    rc, out, _ = run(capsys, "corr", "--aztec", "1", "--edges", str(f), "--check")
    assert rc == 0
    row = body(out)[1].split(",")
    assert row[0] == "0" and float(row[1]) == pytest.approx(0.5, abs=1e-12)


def test_sample_is_deterministic(tmp_path, capsys):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    assert main(["sample", "--aztec", "3", "--count", "5", "--seed", "7", "--out", str(a)]) == 0
    assert main(["sample", "--aztec", "3", "--count", "5", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    lines = a.read_text().splitlines()
    assert len(lines) == 6 and json.loads(lines[0])["provenance"]["seed"] == 7
    assert main(["sample", "--aztec", "2", "--format", "svg", "--out", str(tmp_path / "p")]) == 0
    assert (tmp_path / "p_0.svg").exists()


def test_kasteleyn_pass_and_fail(capsys):
    rc, out, _ = run(capsys, "kasteleyn", "--aztec", "2", "--check")
    assert rc == 0 and json.loads(out)["data"]["passed"]
    rc, _, _ = run(capsys, "kasteleyn", "--aztec", "2", "--check", "--tol", "-1")
    assert rc == 1


def test_aztec_actions(tmp_path, capsys):
    rc, out, _ = run(capsys, "aztec", "west", "--aztec", "2", "--method", "exact")
    assert rc == 0 and body(out)[0] == "x,y,n,lambda,value"
    rc, _, _ = run(capsys, "aztec", "creation", "--aztec", "3", "--lambda", "1/2", "--check")
    assert rc == 0
    rc, _, _ = run(capsys, "aztec", "epgf", "--degree", "3", "--lambda", "1/2", "--check")
    assert rc == 0
    rc, out, _ = run(capsys, "aztec", "classify", "--size", "21", "--format", "pgm", "--check")
    assert rc == 0 and out.startswith("P2")
    rc, out, _ = run(capsys, "aztec", "tiling", "--aztec", "3", "--seed", "1")
    assert rc == 0 and out.count("<polygon") == 12


def test_render_views(capsys):
    for view in ("ryg", "domino"):
        rc, out, _ = run(capsys, "render", "--aztec", "2", "--view", view, "--seed", "0")
        assert rc == 0 and out.startswith("<svg")


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "zfun", "--spec", str(bad))[0] == 2
    assert run(capsys, "zfun", "--spec", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "zfun")[0] == 2
    assert run(capsys, "aztec", "west")[0] == 2
    assert run(capsys, "aztec", "west", "--aztec", "2", "--lambda", "x")[0] == 2
    edges = tmp_path / "e.json"
    edges.write_text(json.dumps([[0, "-1/2", 5, "1/2"]]))
    assert run(capsys, "corr", "--aztec", "1", "--edges", str(edges))[0] == 2
    inf = tmp_path / "inf.json"
    inf.write_text(json.dumps({"l": 0, "r": 1, "lr": "LL", "signs": "+-", "weights": ["1/2", "1/2"]}))
    assert run(capsys, "sample", "--spec", str(inf))[0] == 2
