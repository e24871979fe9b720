import csv
import io
import json
import math

import numpy as np
import pytest

from lowscat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_compute_mpt_nn(capsys):
    res = run_json(capsys, "compute", "--potential", "mpt", "--v", "0.9071", "--mu", "0.7991")
    assert res["a"] == pytest.approx(-18.51, rel=5e-3)
    assert res["r0"] == pytest.approx(2.70, abs=0.02)
    assert res["nodes"] == 0 and res["method"] == "numerov" and res["rule"] == "simpson"


def test_compute_well_unitarity(capsys):
    res = run_json(capsys, "compute", "--potential", "well", "--v", "1.2337", "--mu", "1.0")
    assert res["a"] in ("unitary+", "unitary-")
    assert res["r0"] == pytest.approx(1.0, abs=0.02)


def test_compute_lambda_input(capsys):
    res = run_json(capsys, "compute", "--potential", "mpt", "--lam", "2", "--mu", "2")
    assert isinstance(res["a"], str)


def test_compute_tabulated_zero(capsys, tmp_path):
    path = tmp_path / "zeros.json"
    path.write_text(json.dumps({"family": "tabulated", "r": [0, 1, 2], "v": [0, 0, 0]}))
    res = run_json(capsys, "compute", "--potential", "tabulated", "--file", str(path), "--dr", "1e-3")
    assert res["a"] == 0 and res["r0"] is None


def test_compute_physical_units(capsys):
    res = run_json(capsys, "compute", "--potential", "gaussian", "--v", "1", "--mu", "1", "--units", "np")
    assert res["physical"]["energy_scale_mev"] == pytest.approx(82.94, rel=1e-3)


def test_output_is_deterministic(capsys, tmp_path):
    args = ["compute", "--potential", "gaussian", "--v", "1.2121", "--mu", "0.5672"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    out = tmp_path / "res.json"
    assert main([*args, "--out", str(out)]) == 0
    assert out.read_text() == first


def _csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["r", "u"]
    return np.array(rows[1:], dtype=float)


def test_wavefunction_unitarity_is_tanh(capsys):
    code, out, _ = run(capsys, "wavefunction", "--potential", "mpt", "--v", "1", "--mu", "2", "--dr", "1e-3")
    assert code == 0
    data = _csv(out)
    mask = data[:, 0] <= data[-4, 0]
    r = data[mask, 0]
    R = data[-4, 0]
    assert np.max(np.abs(data[mask, 1] - np.tanh(2 * r) / math.tanh(2 * R))) < 1e-6


def test_wavefunction_without_potential_is_a_line(capsys, tmp_path):
    path = tmp_path / "zeros.json"
    path.write_text(json.dumps({"r": [0, 2], "v": [0, 0]}))
    code, out, _ = run(capsys, "wavefunction", "--potential", "tabulated", "--file", str(path),
                       "--dr", "1e-3", "--r-max", "4")
    data = _csv(out)
    assert code == 0 and data[-1, 0] == pytest.approx(4.0, abs=2e-3)
    assert np.allclose(data[:, 1], data[:, 0], rtol=1e-12, atol=1e-12)


def test_wavefunction_tails_agree_for_equal_observables(capsys):
    tails = []
    for pot, v, mu in (("well", "1.1096", "0.3918"), ("mpt", "0.9071", "0.7991")):
        _, out, _ = run(capsys, "wavefunction", "--potential", pot, "--v", v, "--mu", mu, "--dr", "1e-3",
                        "--r-max", "40")
        data = _csv(out)
        tails.append(np.interp(35.0, data[:, 0], data[:, 1]))
    assert tails[0] == pytest.approx(tails[1], rel=2e-3)


def test_tune_command(capsys):
    res = run_json(capsys, "tune", "--potential", "gaussian", "--a-target", "-18.5", "--r0-target", "2.7",
                   "--trace")
    assert res["converged"]
    assert res["achieved"]["a"] == pytest.approx(-18.5, rel=1e-3)
    assert res["history"]


def test_scan_command(capsys):
    code, out, _ = run(capsys, "scan", "--potential", "well", "--mu", "1", "--vary", "v", "--start", "0.2",
                       "--stop", "2", "--num", "10", "--format", "csv", "--dr", "1e-3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 10
    assert sum(r["divergence"] == "True" for r in rows) == 1


def test_phaseshift_command(capsys):
    res = run_json(capsys, "phaseshift", "--potential", "well", "--v", "1.7575", "--mu", "0.5",
                   "--k-min", "0.01", "--k-max", "0.1", "--num", "3")
    assert len(res) == 3
    for row in res:
        assert row["kcot"] == pytest.approx(row["kcot_expansion"], abs=1e-3)


@pytest.mark.parametrize("preset,key,value", [("deuteron", "E_fr_mev", -2.223), ("he4-dimer", "E_zr_mk", -1.48)])
def test_bound_command(capsys, preset, key, value):
    res = run_json(capsys, "bound", "--preset", preset)
    assert res[key] == pytest.approx(value, abs=0.02)


def test_table_one(capsys):
    code, out, _ = run(capsys, "table", "1")
    assert code == 0 and "FAIL" not in out


def test_table_verify_round_trip(capsys, tmp_path):
    rec = tmp_path / "rec.json"
    assert main(["compute", "--potential", "gaussian", "--v", "1.9102", "--mu", "0.6754", "--dr", "1e-3",
                 "--out", str(rec)]) == 0
    res = run_json(capsys, "table", "--verify", str(rec), "--format", "json")
    assert res["passed"]


def test_config_file_under_flags(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"potential": "gaussian", "v": 1.0, "mu": 2.0, "dr": 1e-3}))
    res = run_json(capsys, "compute", "--config", str(cfg), "--mu", "1.0")
    assert res["potential"]["mu"] == 1.0 and res["config"]["dr"] == 1e-3


@pytest.mark.parametrize("argv,code", [
    (["compute", "--potential", "well", "--v", "1"], 2),
    (["compute", "--potential", "well", "--v", "-1", "--mu", "1"], 2),
    (["compute", "--bogus"], 2),
    ([], 2),
    (["bound", "--a", "-5", "--r0", "1", "--system", "np"], 3),
    (["compute", "--potential", "tabulated", "--file", "/nonexistent/v.json"], 4),
])
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert json.loads(err)["exit_code"] == code
