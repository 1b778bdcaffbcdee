import io
import json

import pytest

from perdec.cli import run_command

FINITE_DOUBLE_SWAP = {
    "kind": "finite",
    "size": 2,
    "transforms": [[1, 0], [1, 0]],
    "values": ["0", "1"],
}

Z_WINDOW_LINEAR = {
    "kind": "z-window",
    "length": 10,
    "shifts": [1, 1],
    "values": [str(x) for x in range(10)],
}

LATTICE_SEPARABLE = {
    "kind": "lattice-window",
    "dims": [2, 3],
    "values": ["0", "1", "2", "10", "11", "12"],
}

LATTICE_CORNER = {
    "kind": "lattice-window",
    "dims": [2, 2],
    "values": ["0", "0", "0", "1"],
}

THREE_CYCLE_TRANSFER = {
    "kind": "finite",
    "size": 3,
    "transforms": [[1, 2, 0], [0, 1, 2]],
    "values": ["1", "-1", "0"],
}


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _run(capsys, argv):
    code = run_command(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_validate_reports_shape(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", FINITE_DOUBLE_SWAP)
    code, doc = _run(capsys, ["validate", path])
    assert code == 0
    assert doc == {"result": "ok", "kind": "finite", "size": 2,
                   "transforms": 2}


def test_validate_not_commuting(tmp_path, capsys):
    bad = dict(FINITE_DOUBLE_SWAP, transforms=[[1, 0, 2], [0, 0, 0]], size=3,
               values=["0", "1", "2"])
    path = _write(tmp_path, "bad.json", bad)
    code, doc = _run(capsys, ["validate", path])
    assert code == 2
    assert doc["error"] == "not-commuting"
    assert len(doc["witness"]) == 3


def test_validate_bad_json_and_missing_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{\n  \"kind\": }\n")
    code, doc = _run(capsys, ["validate", str(path)])
    assert code == 2
    assert "line 2" in doc["error"]
    code, doc = _run(capsys, ["validate", str(tmp_path / "absent.json")])
    assert code == 2
    assert "cannot read" in doc["error"]


def test_decompose_violation_and_verify(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", FINITE_DOUBLE_SWAP)
    code, doc = _run(capsys, ["decompose", path])
    assert code == 1
    assert doc["result"] == "violation"
    assert doc["certificate"]["kind"] == "MixedDeltaNonzero"
    cert = _write(tmp_path, "cert.json", doc)
    code, doc = _run(capsys, ["decompose", path, "--verify", cert])
    assert code == 0
    assert doc == {"result": "verified", "agrees": True}
    tampered = json.loads((tmp_path / "cert.json").read_text())
    tampered["certificate"]["value"] = "7"
    cert2 = _write(tmp_path, "cert2.json", tampered)
    code, doc = _run(capsys, ["decompose", path, "--verify", cert2])
    assert code == 1
    assert doc["agrees"] is False


def test_decompose_success_and_verify(tmp_path, capsys):
    inst = {"kind": "cyclic-group", "modulus": 4, "shifts": [1, 2, 3],
            "values": ["2", "2", "2", "2"]}
    path = _write(tmp_path, "inst.json", inst)
    code, doc = _run(capsys, ["decompose", path])
    assert code == 0
    assert doc["result"] == "decomposition"
    assert len(doc["parts"]) == 3
    cert = _write(tmp_path, "cert.json", doc)
    code, doc = _run(capsys, ["decompose", path, "--verify", cert])
    assert code == 0 and doc["agrees"] is True
    broken = json.loads((tmp_path / "cert.json").read_text())
    broken["parts"][0][0] = "99"
    cert2 = _write(tmp_path, "cert2.json", broken)
    code, doc = _run(capsys, ["decompose", path, "--verify", cert2])
    assert code == 1 and doc["agrees"] is False


def test_decompose_four_transforms_is_an_input_error(tmp_path, capsys):
    inst = {"kind": "cyclic-group", "modulus": 3, "shifts": [1, 1, 1, 1],
            "values": ["0", "0", "0"]}
    path = _write(tmp_path, "inst.json", inst)
    code, doc = _run(capsys, ["decompose", path])
    assert code == 2
    assert "oracle" in doc["error"]


def test_star_check_pass(tmp_path, capsys):
    inst = {"kind": "cyclic-group", "modulus": 4, "shifts": [2],
            "values": ["5", "0", "5", "0"]}
    path = _write(tmp_path, "inst.json", inst)
    code, doc = _run(capsys, ["star-check", path])
    assert code == 0
    assert doc == {"result": "pass"}


def test_star_check_z_window_certificate(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", Z_WINDOW_LINEAR)
    code, doc = _run(capsys, ["star-check", path])
    assert code == 1
    cert = doc["certificate"]
    assert cert["blocks"] == [[0, 1]]
    assert cert["exponents"] == [1]
    assert cert["value"] == "1"
    saved = _write(tmp_path, "cert.json", doc)
    code, doc = _run(capsys, ["star-check", path, "--verify", saved])
    assert code == 0 and doc["agrees"] is True


def test_star_check_lattice_point(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", LATTICE_CORNER)
    code, doc = _run(capsys, ["star-check", path])
    assert code == 1
    assert doc == {"result": "point-violation",
                   "certificate": {"point": [0, 0]}}
    saved = _write(tmp_path, "cert.json", doc)
    code, doc = _run(capsys, ["star-check", path, "--verify", saved])
    assert code == 0 and doc["agrees"] is True
    moved = {"result": "point-violation", "certificate": {"point": [1, 1]}}
    bad = _write(tmp_path, "bad.json", moved)
    code, doc = _run(capsys, ["star-check", path, "--verify", bad])
    assert code == 1 and doc["agrees"] is False


def test_oracle_infeasible_and_verify(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", FINITE_DOUBLE_SWAP)
    code, doc = _run(capsys, ["oracle", path])
    assert code == 1
    assert doc["result"] == "infeasible"
    saved = _write(tmp_path, "cert.json", doc)
    code, doc = _run(capsys, ["oracle", path, "--verify", saved])
    assert code == 0 and doc["agrees"] is True
    tampered = json.loads((tmp_path / "cert.json").read_text())
    tampered["certificate"]["weights"] = ["0", "0"]
    bad = _write(tmp_path, "bad.json", tampered)
    code, doc = _run(capsys, ["oracle", path, "--verify", bad])
    assert code == 1 and doc["agrees"] is False


def test_oracle_rejects_z_window(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", Z_WINDOW_LINEAR)
    code, doc = _run(capsys, ["oracle", path])
    assert code == 2
    assert "star-check" in doc["error"]


def test_oracle_lattice_parts_and_dual(tmp_path, capsys):
    good = _write(tmp_path, "good.json", LATTICE_SEPARABLE)
    code, doc = _run(capsys, ["oracle", good])
    assert code == 0
    assert doc["result"] == "lattice-decomposition"
    assert doc["dims"] == [2, 3]
    saved = _write(tmp_path, "parts.json", doc)
    code, doc = _run(capsys, ["oracle", good, "--verify", saved])
    assert code == 0 and doc["agrees"] is True
    bad = _write(tmp_path, "bad.json", LATTICE_CORNER)
    code, doc = _run(capsys, ["oracle", bad])
    assert code == 1
    assert doc["result"] == "infeasible"
    dual = _write(tmp_path, "dual.json", doc)
    code, doc = _run(capsys, ["oracle", bad, "--verify", dual])
    assert code == 0 and doc["agrees"] is True


def test_lattice_decompose_and_gauge(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", LATTICE_SEPARABLE)
    code, doc = _run(capsys, ["lattice-decompose", path])
    assert code == 0
    assert doc["result"] == "lattice-decomposition"
    saved = _write(tmp_path, "parts.json", doc)
    code, verdict = _run(capsys, ["lattice-decompose", path,
                                  "--verify", saved])
    assert code == 0 and verdict["agrees"] is True
    code, doc2 = _run(capsys, ["lattice-decompose", path, "--base", "2"])
    assert code == 0
    saved2 = _write(tmp_path, "parts2.json", doc2)
    code, verdict = _run(capsys, ["lattice-decompose", path,
                                  "--verify", saved2])
    assert code == 0 and verdict["agrees"] is True


def test_lattice_decompose_point_violation(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", LATTICE_CORNER)
    code, doc = _run(capsys, ["lattice-decompose", path])
    assert code == 1
    assert doc["certificate"]["point"] == [0, 0]


def test_bounded_transfer_three_cycle(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", THREE_CYCLE_TRANSFER)
    code, doc = _run(capsys, ["bounded-transfer", path])
    assert code == 0
    assert doc["result"] == "bounded-transfer"
    assert doc["bound"] == "1"
    saved = _write(tmp_path, "cert.json", doc)
    code, verdict = _run(capsys, ["bounded-transfer", path,
                                  "--verify", saved])
    assert code == 0 and verdict["agrees"] is True
    tampered = json.loads((tmp_path / "cert.json").read_text())
    tampered["bound"] = "2"
    bad = _write(tmp_path, "bad.json", tampered)
    code, verdict = _run(capsys, ["bounded-transfer", path, "--verify", bad])
    assert code == 1 and verdict["agrees"] is False


def test_bounded_transfer_obstruction(tmp_path, capsys):
    inst = {"kind": "finite", "size": 2, "transforms": [[1, 0], [1, 0]],
            "values": ["1", "1"]}
    path = _write(tmp_path, "inst.json", inst)
    code, doc = _run(capsys, ["bounded-transfer", path])
    assert code == 1
    assert doc["result"] == "constrained-obstruction"
    assert doc["certificate"]["total"] == "1"
    saved = _write(tmp_path, "cert.json", doc)
    code, verdict = _run(capsys, ["bounded-transfer", path,
                                  "--verify", saved])
    assert code == 0 and verdict["agrees"] is True


def test_bounded_transfer_needs_two_transforms(tmp_path, capsys):
    inst = {"kind": "cyclic-group", "modulus": 3, "shifts": [1],
            "values": ["0", "0", "0"]}
    path = _write(tmp_path, "inst.json", inst)
    code, doc = _run(capsys, ["bounded-transfer", path])
    assert code == 2
    assert "two transforms" in doc["error"]


def test_search_smoke_and_verify(tmp_path, capsys):
    argv = ["search", "--n", "2", "--max-size", "5", "--trials", "40",
            "--seed", "11"]
    code = run_command(argv)
    first = capsys.readouterr().out
    assert code == 0
    doc = json.loads(first)
    assert doc["result"] == "report"
    assert doc["star_pass"] + doc["star_fail"] == 40
    assert doc["discrepancies"] == 0
    code = run_command(argv)
    second = capsys.readouterr().out
    assert second == first  # byte-identical reruns
    saved = _write(tmp_path, "report.json", doc)
    code, verdict = _run(capsys, ["search", "--verify", saved])
    assert code == 0 and verdict["agrees"] is True


def test_stdin_instance(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(Z_WINDOW_LINEAR)))
    code, doc = _run(capsys, ["star-check", "-"])
    assert code == 1
    assert doc["result"] == "violation"


def test_outputs_are_deterministic(tmp_path, capsys):
    path = _write(tmp_path, "inst.json", FINITE_DOUBLE_SWAP)
    run_command(["oracle", path])
    first = capsys.readouterr().out
    run_command(["oracle", path])
    second = capsys.readouterr().out
    assert first == second
    assert first.endswith("\n")


def test_unknown_subcommand_is_input_error(capsys):
    assert run_command(["frobnicate"]) == 2
