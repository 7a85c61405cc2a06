import csv
import io as _io
import json
import subprocess
import sys

import pytest

from projconst import cli
from projconst.errors import SolverError


def run_json(*argv):
    code, out, err = cli.run(list(argv))
    assert code == 0, err
    return json.loads(out)["results"]


def test_bounds_reproduces_table_values():
    res = run_json("bounds", "--field", "complex")
    assert len(res["rows"]) == 10
    assert all(r["abs_deviation"] <= 1e-12 for r in res["reproduced"])
    assert {r["label"].split()[-1] for r in res["reproduced"]} == {"C2", "C3"}


def test_construct_verify_roundtrip(tmp_path):
    path = tmp_path / "sys.json"
    code, _, _ = cli.run(["construct", "--n", "3", "--field", "complex", "--output", str(path)])
    assert code == 0
    cert = run_json("verify", "--input", str(path))["certificate"]
    assert cert["gerzon_saturated"] and cert["rank_one_independent"] and cert["minimal"]
    assert cert["tight_frame_weights"] == "uniform"


def test_minproj_space():
    res = run_json("minproj", "--space", "R2-hexagon")
    assert res["value"] == pytest.approx(4 / 3, abs=1e-9)
    assert res["certificate"]["lower_bound"] == pytest.approx(4 / 3, abs=1e-9)
    assert res["orthogonal_projection_norm"] == pytest.approx(4 / 3, abs=1e-12)


def test_minproj_complex_defaults_to_descent():
    res = run_json("minproj", "--space", "C2", "--restarts", "2", "--iters", "50")
    assert res["method"] == "descent"
    assert res["value"] >= (1 + 3 ** 0.5) / 2 - 1e-6


def test_phi_with_hessian(tmp_path):
    path = tmp_path / "phi.json"
    code, out, _ = cli.run(["phi", "--n", "2", "--N", "3", "--restarts", "4", "--hessian", "--output", str(path)])
    assert code == 0
    res = json.loads(out)["results"]
    assert res["hessian"]["passed"]
    assert res["reproduced"][0]["abs_deviation"] < 1e-6
    again = run_json("phi", "--input", str(path))
    assert again["state"]["objective"] == res["state"]["objective"]


def test_phi_is_deterministic():
    argv = ["phi", "--n", "2", "--N", "4", "--restarts", "4", "--seed", "5"]
    assert cli.run(argv)[1] == cli.run(argv)[1]


def test_norm_commands():
    res = run_json("norm", "--space", "C3", "--x", "1,1,1")
    assert res["value"] == pytest.approx(3 ** 0.5)
    assert res["functional_form_value"] == pytest.approx(res["value"])
    assert run_json("norm", "--n", "2", "--x", "1,0")["value"] == pytest.approx(1.0)


def test_moments_gamma_r4():
    rows = run_json("moments", "--n", "4", "--field", "complex")["rows"]
    assert max(r["abs_deviation"] for r in rows) < 1e-10
    row = run_json("gamma", "--n", "2", "--grid", "1000")["rows"][0]
    assert row["majorization_holds"] and row["gamma4"] == pytest.approx(4 / 9)
    r4 = run_json("r4", "--grid", "500")
    assert r4["below_upper_bound"] and r4["alpha_star"] == pytest.approx(1.4592, abs=2e-3)
    assert r4["rows"][0]["value"] is not None


def test_curvature_from_input(tmp_path):
    path = tmp_path / "sys.json"
    code, _, _ = cli.run(["construct", "--n", "2", "--output", str(path)])
    doc = json.loads(path.read_text())
    doc["results"]["system"]["weights"] = [1 / 3] * 3
    path.write_text(json.dumps(doc))
    res = run_json("moments", "--n", "2", "--k", "4", "--input", str(path))
    assert res["curvature"][0]["lhs"] == pytest.approx(3 / 8, abs=1e-12)


def test_csv_has_round_trip_precision():
    code, out, _ = cli.run(["bounds", "--n", "3", "--format", "csv"])
    rows = list(csv.DictReader(_io.StringIO(out)))
    assert float(rows[0]["G"]) == (1 + 5 ** 0.5) / 2


def test_text_format():
    code, out, _ = cli.run(["bounds", "--n", "2", "--format", "text"])
    assert code == 0 and "wall_time_s" in out and "reproduced" in out


def test_exit_codes(tmp_path, monkeypatch):
    assert cli.run(["construct", "--n", "23"])[0] == 4
    assert cli.run(["norm", "--space", "R23", "--x", ",".join(["0"] * 23)])[0] == 4
    assert cli.run(["minproj", "--space", "C2", "--method", "lp-exact"])[0] == 4
    assert cli.run(["construct"])[0] == 2
    assert cli.run(["verify", "--input", str(tmp_path / "nope.json")])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"field": "real", "n": 2, "vectors": [[1, "x"]]}))
    code, _, err = cli.run(["verify", "--input", str(bad)])
    assert code == 2 and "/vectors/0/1" in err
    assert cli.run(["phi", "--n", "3", "--N", "2"])[0] == 1
    assert cli.run(["bogus"])[0] == 2

    def fail(*a, **k):
        raise SolverError("boom")
    monkeypatch.setattr(cli, "minimal_projection", fail)
    assert cli.run(["minproj", "--space", "R2-hexagon"])[0] == 3


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "projconst.cli", "bounds", "--n", "2"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["results"]["rows"][0]["G"] == pytest.approx(4 / 3)


def test_table():
    rows = {r["space"]: r for r in run_json("table", "--restarts", "2", "--iters", "50")["rows"]}
    assert rows["R23"]["computed"] == "out of scope"
    for sid in ("R2-hexagon", "R3-dodecahedron", "R7", "C2", "C3"):
        assert rows[sid]["abs_deviation"] <= 1e-6
