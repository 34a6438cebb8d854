import json

import pytest

from dets2.cli import main
from dets2.core import build_Ed
from dets2.partitions import Partition, tensor_to_partition


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def last_json(out):
    return json.loads(out.strip().splitlines()[-1])


def test_compute_e2(tmp_path, capsys):
    path = write(tmp_path, "e2.json", build_Ed(2).to_json())
    code, out, _ = run(capsys, "compute", "--input", path)
    assert code == 0
    assert out.splitlines()[0] == "-1"
    assert last_json(out) == {"det": "-1", "nonzero": True}


def test_compute_omit_and_prime(tmp_path, capsys):
    path = write(tmp_path, "e3.json", build_Ed(3).to_json())
    for t in range(1, 7):
        code, out, _ = run(capsys, "compute", "--input", path, "--omit", str(t))
        assert code == 0 and last_json(out)["det"] == "1"
    code, out, _ = run(capsys, "ed", "--d", "2", "--prime", "7")
    assert json.loads(out)["field"] == {"prime": 7}


def test_compute_missing_slot(tmp_path, capsys):
    obj = build_Ed(2).to_json()
    del obj["vectors"]["1,3"]
    code, _, err = run(capsys, "compute", "--input", write(tmp_path, "bad.json", obj))
    assert code == 2 and "1,3" in err


@pytest.mark.parametrize(
    "content,needle",
    [
        ("{not json", "malformed JSON"),
        (json.dumps({"d": 2, "field": {"prime": 15}, "vectors": {}}), "not prime"),
        (json.dumps({"vectors": {}}), "'d'"),
    ],
)
def test_compute_input_errors(tmp_path, capsys, content, needle):
    p = tmp_path / "x.json"
    p.write_text(content)
    code, _, err = run(capsys, "compute", "--input", str(p))
    assert code == 2 and needle in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "compute", "--input", "/nonexistent/x.json")
    assert code == 2 and "not found" in err


def test_matrix_dump(tmp_path, capsys):
    path = write(tmp_path, "e2.json", build_Ed(2).to_json())
    code, out, _ = run(capsys, "matrix", "dump", "--input", path, "--which", "A")
    m = json.loads(out)
    assert code == 0 and (m["rows"], m["cols"]) == (8, 6)
    code, out, _ = run(capsys, "matrix", "dump", "--input", path, "--which", "Mk", "--k", "2")
    assert json.loads(out)["rows"] == 2
    code, _, err = run(capsys, "matrix", "dump", "--input", path, "--which", "Mk")
    assert code == 2


def test_partition_check(tmp_path, capsys):
    path = write(tmp_path, "p.json", tensor_to_partition(build_Ed(3)).to_json())
    code, out, _ = run(capsys, "partition", "check", "--input", path)
    assert code == 0
    assert json.loads(out) == {"cycle_free": True, "homogeneous": True, "det": "1", "agrees": True}
    cyc = Partition(2, (1, 1, 1, 2, 2, 2))
    path = write(tmp_path, "c.json", cyc.to_json())
    code, out, _ = run(capsys, "partition", "check", "--input", path, "--prime", "32003")
    assert code == 0 and json.loads(out)["det"] == "0" and json.loads(out)["cycle_free"] is False


def test_partition_survey(capsys, tmp_path):
    argv = ["partition", "survey", "--d", "3", "--samples", "2000", "--seed", "7", "--prime", "32003"]
    code, out, _ = run(capsys, *argv)
    rep = json.loads(out)
    assert code == 0 and rep["total"] == 2000 and rep["disagreements"] == 0
    code, out2, _ = run(capsys, *argv)
    assert out == out2
    code, out, _ = run(capsys, "partition", "survey", "--d", "2", "--exhaustive")
    rep = json.loads(out)
    assert code == 0 and rep["total"] == 64 and rep["cycle_free_and_nonzero"] == 12
    code, _, err = run(capsys, "partition", "survey", "--d", "3", "--exhaustive")
    assert code == 2 and "--allow-large" in err
    code, _, err = run(capsys, "partition", "survey", "--d", "3", "--samples", "5")
    assert code == 2 and "--seed" in err


def test_geom(tmp_path, capsys):
    obj = {"d": 2, "field": "rational", "points": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}
    code, out, _ = run(capsys, "geom", "--points", write(tmp_path, "pts.json", obj))
    rep = json.loads(out)
    assert code == 0 and rep["det"] == "0" and rep["case"] in ("I", "II")
    assert set(rep["witness"]) == {"1,2", "1,3", "2,3", "1,4", "2,4", "3,4"}


def test_verify_deterministic(capsys, tmp_path):
    argv = ["verify", "--d", "2", "--trials", "20", "--seed", "7", "--prime", "32003"]
    code, out, _ = run(capsys, *argv)
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert {s["suite"] for s in rep["suites"]} >= {"vanishing", "invariance", "multilinearity", "geometry"}
    _, out2, _ = run(capsys, *argv)
    assert out == out2
    _, out3, _ = run(capsys, *argv, "--workers", "2")
    assert out3 == out


def test_verify_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--d", "2"])
    assert exc.value.code == 2


def test_bad_prime_flag(capsys):
    code, _, err = run(capsys, "ed", "--d", "2", "--prime", "12")
    assert code == 2 and "not prime" in err


def test_oracle_regen_check(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "regen", "--check", "-o", str(tmp_path / "r.json"))
    assert code == 0
    assert json.loads((tmp_path / "r.json").read_text())["ok"]


def test_disagreement_exits_1_with_instance(tmp_path, capsys, monkeypatch):
    import dets2.cli as cli

    monkeypatch.setattr(cli, "det_s2", lambda t: t.field.zero)
    path = write(tmp_path, "p.json", tensor_to_partition(build_Ed(2)).to_json())
    code, out, _ = run(capsys, "partition", "check", "--input", path)
    rep = json.loads(out)
    assert code == 1 and rep["agrees"] is False
    assert Partition.from_json(rep["counterexample"]) == tensor_to_partition(build_Ed(2))


def test_invariant_violation_exits_1(tmp_path, capsys, monkeypatch):
    import dets2.cli as cli
    from dets2.linalg import InvariantViolation

    def boom(c):
        raise InvariantViolation("forced", c.to_json())

    monkeypatch.setattr(cli, "assert_vanishing", boom)
    obj = {"d": 2, "points": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}
    code, out, err = run(capsys, "geom", "--points", write(tmp_path, "pts.json", obj))
    assert code == 1 and "forced" in err
    assert json.loads(out)["instance"]["points"] == obj["points"]
