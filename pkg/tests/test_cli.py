import json
import subprocess
import sys

import pytest

from ptsc.cli import EXIT_ERROR, EXIT_NOT_SC, EXIT_OK, CliError, RunConfig, main
from ptsc.oracle import Witness


@pytest.fixture
def files(tmp_path, ex1, f1, f2):
    paths = {}
    for name, obj in [("ex1", ex1.to_json_obj()), ("f1", f1.to_json_obj()), ("f2", f2.to_json_obj())]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        paths[name] = str(p)
    dead = tmp_path / "dead.json"
    dead.write_text(json.dumps({"rows": 2, "cols": 3, "entries": [[1, 3]]}))
    paths["dead"] = str(dead)
    fd = tmp_path / "fd.json"
    fd.write_text(json.dumps({"rows": 2, "cols": 3, "entries": [[1, 1]]}))
    paths["fd"] = str(fd)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_check_verdicts(capsys, files):
    code, out = run(capsys, "check", "--system", files["ex1"], "--perturb", files["f1"])
    assert code == EXIT_OK and json.loads(out)["verdict"] == "PTSC"
    code, out = run(capsys, "check", "--system", files["ex1"], "--perturb", files["f2"], "--method", "graph")
    assert code == EXIT_OK and json.loads(out)["verdict"] == "PSSC"


def test_check_with_witness(capsys, files, tmp_path):
    wpath = tmp_path / "w.json"
    code, out = run(capsys, "check", "--system", files["ex1"], "--perturb", files["f2"], "--witness", str(wpath))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["verdict"] == "PSSC"
    w = Witness.from_json_obj(json.loads(wpath.read_text()))
    assert abs(w.recompute_residual() - rep["witness"]["residual"]) <= 1e-12
    assert rep["witness"]["residual"] <= 1e-6


def test_witness_lambda_is_a44(capsys, files):
    code, out = run(capsys, "witness", "--system", files["ex1"], "--perturb", files["f2"], "--seed", "3")
    obj = json.loads(out)
    assert code == EXIT_OK
    base = {(i, j): float(v) for i, j, v in obj["base"]}
    lam = complex(*obj["lambda"])
    # the (3,3) entry fails first; its nonzero mode comes from the a44 block
    assert lam == pytest.approx(base[(4, 4)])


def test_not_structurally_controllable_exit(capsys, files):
    code, out = run(capsys, "check", "--system", files["dead"], "--perturb", files["fd"])
    assert code == EXIT_NOT_SC and json.loads(out)["verdict"] == "NOT_STRUCTURALLY_CONTROLLABLE"


def test_error_exits(capsys, files, tmp_path):
    code, out = run(capsys, "bogus")
    assert code == EXIT_ERROR and "error" in json.loads(out)
    code, out = run(capsys, "check", "--system", files["ex1"], "--perturb", files["fd"])
    assert code == EXIT_ERROR and json.loads(out)["error"]["type"] == "PatternError"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = run(capsys, "check", "--system", str(bad), "--perturb", files["f1"])
    assert code == EXIT_ERROR
    code, out = run(capsys, "check", "--system", str(tmp_path / "missing.json"), "--perturb", files["f1"])
    assert code == EXIT_ERROR
    code, out = run(capsys)
    assert code == EXIT_ERROR


def test_run_config_validation(monkeypatch):
    with pytest.raises(CliError):
        RunConfig("check", tol=0)
    with pytest.raises(CliError):
        RunConfig("check", trials=0)
    monkeypatch.setenv("PTSC_SEED", "41")
    assert RunConfig("check", seed=1).seed == 41
    monkeypatch.setenv("PTSC_SEED", "x")
    with pytest.raises(CliError):
        RunConfig("check")


def test_seed_env_reaches_report(capsys, files, monkeypatch):
    monkeypatch.setenv("PTSC_SEED", "17")
    code, out = run(capsys, "oracle", "--system", files["ex1"], "--perturb", files["f2"], "--seed", "2")
    assert code == EXIT_OK and json.loads(out)["seed"] == 17


@pytest.mark.parametrize("cmd", ["check", "witness", "oracle", "minsupport", "scrp"])
def test_byte_identical_reports(capsys, files, cmd):
    args = [cmd, "--system", files["ex1"], "--perturb", files["f2"], "--seed", "5", "--full-trace"]
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second and first[0] == EXIT_OK


def test_output_file_and_graphs(capsys, files, tmp_path):
    out = tmp_path / "rep.json"
    code, _ = run(capsys, "minsupport", "--system", files["ex1"], "--perturb", files["f2"], "-o", str(out))
    assert code == EXIT_OK and json.loads(out.read_text())["size"] == 1
    gdir = tmp_path / "g"
    code, text = run(capsys, "graphs", "--system", files["ex1"], "--perturb", files["f2"], "--dump-graphs", str(gdir))
    assert code == EXIT_OK and len(json.loads(text)["graphs"]) == 6
    assert (gdir / "scc_3_3.dot").exists()


def test_scrp_with_realization(capsys, files, tmp_path):
    from conftest import RADIUS_A, RADIUS_B

    vals = [[i + 1, j + 1, v] for i, row in enumerate(RADIUS_A) for j, v in enumerate(row) if v != "0"]
    vals += [[i + 1, 5, row[0]] for i, row in enumerate(RADIUS_B) if row[0] != "0"]
    rp = tmp_path / "r.json"
    rp.write_text(json.dumps({"values": vals}))
    code, out = run(capsys, "scrp", "--system", files["ex1"], "--perturb", files["f1"], "--realization", str(rp))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["feasibility"].startswith("infeasible")
    assert rep["realization"]["sigma_min_controllability"] == pytest.approx(5.3401, abs=1e-3)


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "ptsc", "check", "--system", files["ex1"], "--perturb", files["f1"]],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"] == "PTSC"
