import json
from pathlib import Path

import pytest

from cgclosure.cli import run

SQ15 = {"type": "polytope", "vertices": [["0", "0"], ["3/2", "0"], ["0", "3/2"], ["3/2", "3/2"]]}
SEGMENT = {"type": "polytope", "field": 2, "vertices": [["0", "0"], ["1", ["0", "1"]]]}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return write


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


def verts(obj):
    return sorted(tuple(v) for v in obj["closure"]["vertices"])


def test_oracle_compute(files, capsys):
    assert run(["closure", "compute", "--body", files("sq.json", SQ15), "--mode", "oracle", "--bound", "3"]) == 0
    obj = out_json(capsys)
    assert verts(obj) == [("0/1", "0/1"), ("0/1", "1/1"), ("1/1", "0/1"), ("1/1", "1/1")]
    assert obj["stable"] is True


def test_exact_compute_and_verify(files, tmp_path, capsys):
    res = str(tmp_path / "r.json")
    body = files("seg.json", SEGMENT)
    assert run(["closure", "compute", "--body", body, "--out", res, "--timing"]) == 0
    obj = json.loads(Path(res).read_text())
    assert verts(obj) == [("0/1", "0/1")] and obj["timing"]["seconds"] >= 0
    assert run(["closure", "verify", "--result", res, "--body", body, "--bound", "6"]) == 0
    assert out_json(capsys)["passed"] is True


def test_verify_failure_exit_code(files, tmp_path, capsys):
    res = str(tmp_path / "r.json")
    body = files("sq.json", SQ15)
    assert run(["closure", "compute", "--body", body, "--out", res]) == 0
    obj = json.loads(Path(res).read_text())
    obj["cuts"] = [c for c in obj["cuts"] if c["c"] != [1, 0]]
    Path(res).write_text(json.dumps(obj))
    assert run(["closure", "verify", "--result", res, "--body", body, "--bound", "4"]) == 1
    assert "verification failed" in capsys.readouterr().err


def test_kronecker(capsys):
    assert run(["kronecker", "approx", "--pi", "[0,1]", "--field", "2", "--eps", "1/100", "--n0", "0"]) == 0
    assert out_json(capsys) == {"a": [99], "N": 70}
    assert run(["kronecker", "approx", "--pi", '[["0","1"],["1","1"]]', "--field", "2",
                "--eps", "1/10", "--certificate"]) == 0
    obj = out_json(capsys)
    assert obj["a"] == [17, 29] and obj["N"] == 12 and "norm_sq" in obj


def test_homogeneity_lift(files, capsys):
    body = files("seg.json", SEGMENT)
    assert run(["homogeneity", "lift", "--body", body, "--face-normal", '["1",["0","1"]]',
                "--cut", '{"c": [0, 1], "delta": ["0", "1"]}']) == 0
    obj = out_json(capsys)
    assert len(obj["family"]) == 2


def test_plot(files, tmp_path):
    out = tmp_path / "k.svg"
    assert run(["plot", "--body", files("sq.json", SQ15), "--bound", "1", "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.count('class="cut"') == 8 and svg.count('class="closure"') == 1


def test_plot_3d_is_domain_error(files, capsys):
    cube = {"type": "polytope", "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]}
    assert run(["plot", "--body", files("c.json", cube)]) == 1
    assert "NotPlottable" in capsys.readouterr().err


def test_usage_errors(files, capsys):
    assert run(["closure", "compute", "--body", "/no/such/file.json"]) == 2
    assert "no such file" in capsys.readouterr().err
    assert run(["closure", "compute", "--body", files("bad.json", {"type": "cube"})]) == 2
    assert "expected schema" in capsys.readouterr().err
    assert run(["frobnicate"]) == 2


def test_determinism(files, capsys):
    body = files("sq.json", SQ15)
    run(["closure", "compute", "--body", body])
    a = capsys.readouterr().out
    run(["closure", "compute", "--body", body])
    assert capsys.readouterr().out == a


def test_corpus_run(tmp_path, capsys, monkeypatch):
    inst = tmp_path / "instances"
    inst.mkdir()
    (tmp_path / "expected").mkdir()
    (inst / "sq15.json").write_text(json.dumps(
        {"name": "sq15", "body": SQ15, "expected": {"vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}}))
    (inst / "seg.json").write_text(json.dumps({"name": "seg", "body": SEGMENT}))
    (tmp_path / "expected" / "seg.json").write_text(json.dumps({"vertices": [[0, 0]]}))
    (inst / "wrong.json").write_text(json.dumps(
        {"body": SQ15, "mode": "oracle", "bound": 2, "expected": {"empty": True}}))
    monkeypatch.setenv("CG_THREADS", "2")
    assert run(["corpus", "run", "--dir", str(tmp_path)]) == 1
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1] == "2/3 instances passed"
    assert any(l.startswith("PASS seg") for l in lines) and any(l.startswith("FAIL wrong") for l in lines)
