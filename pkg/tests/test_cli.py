import json
import subprocess
import sys

import pytest

from diagbase.cli import canonical_bound_name, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_hol_orbits_a5_k3(capsys):
    doc = call_json(capsys, "hol", "orbits", "--group", "A5", "--k", "3")
    assert doc["regular_count"] == 1 and doc["subsets"] == 34220
    assert doc["config"]["seed"] == 0 and doc["config"]["budget"] == 10000


def test_brute_base_k2(capsys):
    doc = call_json(capsys, "diag", "brute-base", "--group", "A5", "--k", "2", "--top", "S", "--out", "full")
    assert doc["base_size"] == 4 == doc["formula_base_size"]
    doc = call_json(capsys, "diag", "brute-base", "--group", "A5", "--k", "2", "--top", "1", "--out", "1")
    assert doc["base_size"] == 3


def test_bounds_check_m11(capsys):
    doc = call_json(capsys, "bounds", "check", "--name", "e:prob", "--group", "M11", "--k", "5")
    assert doc["verdict"] == "holds"
    assert doc["parameters"]["parameter_source"]


def test_bound_aliases():
    assert canonical_bound_name("e:prob") == "prob"
    assert canonical_bound_name("u=k/2") == "u_half"
    assert canonical_bound_name("Q1") == "q1q2"
    with pytest.raises(ValueError):
        canonical_bound_name("e:nonsense")


def test_no_meta_output_is_byte_identical(capsys):
    argv = ["construct", "base", "--group", "A5", "--k", "61", "--ell", "2", "--seed", "7", "--no-meta"]
    _, first, _ = call(capsys, *argv)
    _, second, _ = call(capsys, *argv)
    assert first == second and "meta" not in json.loads(first)
    # the thread count must not leak into the report
    _, third, _ = call(capsys, *argv, "--threads", "5")
    assert third == first


def test_meta_is_present_by_default(capsys):
    doc = call_json(capsys, "catalog", "list")
    assert {"timestamp", "version", "elapsed_s"} <= set(doc["meta"])
    assert any(g["name"] == "M11" for g in doc["groups"])


@pytest.mark.parametrize("argv", [
    ["hol", "search", "--group", "A5", "--m", "3", "--seed", "2"],
    ["construct", "base", "--group", "A5", "--k", "61", "--ell", "2"],
    ["construct", "k2", "--group", "A5", "--out", "1"],
])
def test_emitted_certificates_verify(capsys, tmp_path, argv):
    path = tmp_path / "cert.json"
    assert run(argv + ["--output", str(path)]) == 0
    doc = call_json(capsys, "verify", str(path))
    assert doc["valid"] and doc["digest_intact"] and doc["recomputed_valid"]


def test_tampered_witness_is_rejected(capsys, tmp_path):
    path = tmp_path / "w.json"
    run(["hol", "search", "--group", "A5", "--m", "3", "--output", str(path)])
    doc = json.loads(path.read_text())
    doc["subset"][0] = next(x for x in range(60) if x not in doc["subset"])
    path.write_text(json.dumps(doc))
    res = call_json(capsys, "verify", str(path))
    assert not res["valid"] and not res["digest_intact"]


def test_stored_verdicts_are_not_trusted(capsys, tmp_path):
    # a self-consistent digest over a wrong base must still fail recomputation
    from diagbase.cli import _seal
    path = tmp_path / "c.json"
    run(["construct", "base", "--group", "A5", "--k", "61", "--ell", "2", "--output", str(path)])
    doc = json.loads(path.read_text())
    body = {k: v for k, v in doc.items() if k not in ("digest", "config", "meta", "schema_version")}
    body["rows"][0] = [0] * 61
    path.write_text(json.dumps(_seal(body)))
    res = call_json(capsys, "verify", str(path))
    assert res["digest_intact"] and not res["recomputed_valid"] and not res["valid"]


def test_refusal_exits_zero(capsys):
    doc = call_json(capsys, "construct", "edge", "--group", "A5", "--k", "3600", "--ell", "2", "--top", "S")
    assert doc["kind"] == "refusal" and doc["tag"]


def test_failing_bound_exits_zero(capsys):
    doc = call_json(capsys, "bounds", "check", "--name", "prob", "--group", "A5", "--k", "5")
    assert doc["verdict"] == "fails"


@pytest.mark.parametrize("argv, code", [
    (["hol", "orbits", "--group", "A5", "--k", "5"], 3),
    (["bounds", "check", "--name", "q1q2", "--group", "A5", "--k", "4"], 2),
    (["hol", "orbits", "--group", "NoSuchGroup", "--k", "3"], 2),
    (["diag", "verify-base", "--group", "A5", "--points", "1,2;x"], 2),
])
def test_error_exit_codes(capsys, argv, code):
    got, out, err = call(capsys, *argv)
    assert got == code and out == "" and err


def test_usage_error_from_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["hol", "nonsense"])
    assert exc.value.code == 2


def test_grid_csv(capsys):
    code, out, _ = call(capsys, "bounds", "grid", "--name", "prob", "--group", "M11",
                        "--k-range", "5:8", "--format", "csv", "--threads", "2")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "group,k,verdict,lhs,rhs"
    assert len(lines) == 5 and all(",holds," in ln for ln in lines[1:])


def test_h_table_command(capsys):
    doc = call_json(capsys, "bounds", "hT", "--group", "L2(8)")
    assert doc["rows"][0]["h_exact"] == 9 and doc["rows"][0]["agree"]


def test_diag_act_and_verify_base(capsys):
    doc = call_json(capsys, "diag", "act", "--group", "A5", "--point", "3,0", "--pi", "1,0")
    assert doc["image"][-1] == 0
    doc = call_json(capsys, "diag", "verify-base", "--group", "A5", "--points", "0,0;1,0", "--top", "1")
    assert doc["is_base"] is False


def test_prob_commands(capsys):
    doc = call_json(capsys, "prob", "qk", "--group", "A5", "--k", "30", "--m", "60")
    assert doc["verdict"] == "holds"
    doc = call_json(capsys, "prob", "bridge", "--k", "4", "--p", "3/4")
    assert doc["Q_k_upper"] == "1/4" and doc["certifying"]


def test_console_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "diagbase.cli", "catalog", "list", "--no-meta"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["kind"] == "catalog_list"
