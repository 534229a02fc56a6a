import csv
import io
import json
import math

import numpy as np
import pytest

from qtexture.channels import is_texture_free
from qtexture.cli import main, matrix_document, parse_matrix_document
from qtexture.states import basis_state, free_state, maximally_mixed, pure_density
from qtexture.witnesses import theta_threshold


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "f1": write(tmp_path / "f1.json", matrix_document("density", free_state(3).data)),
        "e0": write(tmp_path / "e0.json", matrix_document("density", pure_density(basis_state(2, 0)).data)),
        "mm": write(tmp_path / "mm.json", matrix_document("density", maximally_mixed(2).data)),
        "minus": write(tmp_path / "minus.json",
                       matrix_document("density", pure_density(np.array([1, -1]) / np.sqrt(2)).data)),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def measure_json(capsys, *argv):
    code, out, _ = run(capsys, "measure", *argv, "--out", "json")
    assert code == 0
    return {row["id"]: row["value"] for row in json.loads(out)}


def test_measure_free_state_all_zero(capsys, files):
    vals = measure_json(capsys, files["f1"])
    assert len(vals) == 8
    assert all(abs(v) <= 1e-10 for v in vals.values())


def test_measure_basis_state(capsys, files):
    vals = measure_json(capsys, files["e0"], "--measure", "tF", "--measure", "tSR", "--measure", "tTr")
    assert vals["tF"] == pytest.approx(0.5, abs=1e-12)
    assert vals["tSR"] == pytest.approx(0.6931472, abs=1e-7)
    assert vals["tTr"] == pytest.approx(0.7071068, abs=1e-7)


def test_measure_maximally_mixed_gr(capsys, files):
    code, out, _ = run(capsys, "measure", files["mm"], "--measure", "tGR:alpha=0.5,z=1")
    assert code == 0
    assert float(out.split()[-1]) == pytest.approx(0.2928932, abs=1e-7)


def test_measure_infinite_rendering(capsys, files):
    code, out, _ = run(capsys, "measure", files["minus"], "--measure", "tSR", "--out", "csv")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith(",inf")
    assert measure_json(capsys, files["minus"], "--measure", "tSR")["tSR"] == "inf"


def test_csv_and_json_payloads_match(capsys, files):
    vals = measure_json(capsys, files["e0"])
    code, out, _ = run(capsys, "measure", files["e0"], "--out", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["id"] for r in rows] == list(vals)
    for r in rows:
        assert float(r["value"]) == vals[r["id"]]


def test_measure_domain_error_names_parameter(capsys, files):
    code, _, err = run(capsys, "measure", files["mm"], "--measure", "tGR:alpha=0.5,z=0.2")
    assert code == 2 and "z must be" in err
    code, _, err = run(capsys, "measure", files["mm"], "--measure", "tR:alpha=1.5")
    assert code == 2 and "alpha" in err
    code, _, err = run(capsys, "measure", files["mm"], "--measure", "tGR:alpha=0.5")
    assert code == 2 and "missing" in err


def test_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "kind": ')
    code, _, err = run(capsys, "measure", str(bad))
    assert code == 2 and "line" in err
    bad.write_text(json.dumps({"dim": 2, "kind": "density", "matrix": [[[1, 0], [0, 0]], [[0, 0], [0]]]}))
    code, _, err = run(capsys, "measure", str(bad))
    assert code == 2 and "matrix[1][1]" in err
    bad.write_text(json.dumps({"dim": 2, "kind": "density", "matrix": [[[0.6, 0], [0, 0]], [[0, 0], [0.6, 0]]]}))
    code, _, err = run(capsys, "measure", str(bad))
    assert code == 2 and "trace" in err
    code, _, _ = run(capsys, "measure", str(tmp_path / "missing.json"))
    assert code == 2


def test_witness_examples(capsys, files):
    code, out, _ = run(capsys, "witness", "w1", files["e0"], "--out", "json")
    res = json.loads(out)
    assert code == 0 and res["detected"] and res["expectation"] == pytest.approx(-0.5)
    assert res["derived_tF"] == pytest.approx(0.5)

    f1_2 = write_f1(files)
    code, out, _ = run(capsys, "witness", "theta:1.5708", f1_2, "--out", "json")
    res = json.loads(out)
    assert res["expectation"] == pytest.approx(1.0, abs=1e-4) and not res["detected"]

    code, out, _ = run(capsys, "witness", "imag:0,1,+", files["mm"], "--out", "json")
    res = json.loads(out)
    assert res["expectation"] == pytest.approx(0.0, abs=1e-15) and not res["detected"]


def write_f1(files):
    import pathlib

    p = pathlib.Path(files["e0"]).with_name("f1_2.json")
    return write(p, matrix_document("density", free_state(2).data))


def test_witness_spec_errors(capsys, files):
    for spec in ("bogus", "theta:abc", "theta:0.1", "jk:0,1", "jk:0,0,1.0", "imag:0,1,x", "universal:"):
        code, _, err = run(capsys, "witness", spec, files["e0"])
        assert code == 2, spec
        assert err


def test_universal_witness_from_file(capsys, tmp_path, files):
    a = write(tmp_path / "a.json", matrix_document("hermitian", pure_density(basis_state(2, 0)).data))
    code, out, _ = run(capsys, "witness", f"universal:{a}", files["e0"], "--out", "json")
    assert code == 0
    assert json.loads(out)["expectation"] == pytest.approx(-0.75)
    a3 = write(tmp_path / "a3.json", matrix_document("hermitian", np.eye(3)))
    code, _, err = run(capsys, "witness", f"universal:{a3}", files["e0"])
    assert code == 2 and "dim" in err


def test_gen_state(capsys, tmp_path):
    out = tmp_path / "s.json"
    assert main(["gen", "state", "--dim", "3", "--rank", "2", "--seed", "7", "--out", str(out)]) == 0
    kind, rho, doc = parse_matrix_document(out.read_text())
    assert kind == "density" and doc["dim"] == 3
    assert np.sum(np.linalg.eigvalsh(rho.data) > 1e-10) == 2
    again = tmp_path / "s2.json"
    main(["gen", "state", "--dim", "3", "--rank", "2", "--seed", "7", "--out", str(again)])
    assert out.read_bytes() == again.read_bytes()


def test_gen_round_trip_exact(tmp_path):
    from qtexture.states import make_rng, random_mixed

    out = tmp_path / "s.json"
    main(["gen", "state", "--dim", "4", "--seed", "11", "--out", str(out)])
    _, rho, _ = parse_matrix_document(out.read_text())
    want = random_mixed(4, 4, make_rng(11)).data
    assert np.max(np.abs(rho.data - want)) <= 1e-15


def test_gen_channel(tmp_path):
    out = tmp_path / "c.json"
    assert main(["gen", "channel", "--dim", "2", "--env", "3", "--seed", "7", "--out", str(out)]) == 0
    kind, ch, doc = parse_matrix_document(out.read_text())
    assert kind == "kraus_channel" and len(doc["kraus"]) == 3
    assert is_texture_free(ch)
    assert main(["gen", "channel", "--dim", "3", "--terms", "2", "--out", str(out)]) == 0
    assert is_texture_free(parse_matrix_document(out.read_text())[1])


def test_gen_unitary_and_witness(tmp_path):
    out = tmp_path / "u.json"
    assert main(["gen", "unitary", "--dim", "3", "--seed", "1", "--out", str(out)]) == 0
    kind, u, _ = parse_matrix_document(out.read_text())
    f1 = free_state(3).data
    assert kind == "unitary" and np.max(np.abs(u @ f1 @ u.conj().T - f1)) <= 1e-10
    assert main(["gen", "witness", "theta:2.0", "--dim", "4", "--out", str(out)]) == 0
    kind, w, doc = parse_matrix_document(out.read_text())
    assert kind == "hermitian" and doc["family"] == "theta"
    assert doc["threshold"] == pytest.approx(theta_threshold(2.0))


def test_gen_size_cap(capsys):
    code, _, err = run(capsys, "gen", "channel", "--dim", "8", "--env", "9")
    assert code == 2 and "cap" in err


def test_seed_from_environment(monkeypatch, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    monkeypatch.setenv("QTEXTURE_SEED", "5")
    main(["gen", "state", "--dim", "2", "--out", str(a)])
    main(["gen", "state", "--dim", "2", "--seed", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("QTEXTURE_SEED", "five")
    assert main(["gen", "state", "--dim", "2", "--out", str(a)]) == 2


def test_verify_minimal(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "verify", "--suite", "axioms", "--dims", "2", "--samples", "1", "--out", str(out))
    assert code == 0 and stdout.startswith("PASS axioms")
    rep = json.loads(out.read_text())
    assert rep["passed"]
    suite = rep["suites"][0]
    assert {"suite_id", "config", "checks_run", "violations", "worst_slack", "passed"} <= set(suite)
    assert suite["config"]["seed"] == 42


def test_verify_broken_tolerance(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "verify", "--suite", "witnesses", "--dims", "2,3", "--samples", "3",
                          "--tol", "1e-30", "--out", str(out))
    assert code == 1 and "FAIL" in stdout
    rep = json.loads(out.read_text())
    slacks = [v["slack"] for v in rep["suites"][0]["violations"]]
    assert slacks and all(-1e-9 < s < 0 for s in slacks if isinstance(s, float) and s != -1.0)


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "--dims", "1")[0] == 2
    assert run(capsys, "verify", "--dims", "x")[0] == 2
    assert run(capsys, "verify", "--suite", "nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
