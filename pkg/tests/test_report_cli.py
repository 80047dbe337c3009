import json

import numpy as np
import pytest

from penrose_lab import cli
from penrose_lab.pipeline import SCHEMA_VERSION, run_pipeline
from penrose_lab.report import emit, to_csv, to_json, to_plotdata
from penrose_lab.scenarios import load_scenario

LIGHT = {"toggles.glue": False, "toggles.imcf": False, "toggles.criteria": False}


def test_json_is_schema_stamped_and_deterministic(reports):
    text = to_json(reports["flat_ball"])
    doc = json.loads(text)
    assert doc["schema_version"] == SCHEMA_VERSION
    assert set(doc) == {"schema_version", "version", "scenario", "stages", "verdicts"}
    again = run_pipeline(load_scenario("flat_ball"))
    assert to_json(again) == text
    assert "seconds" not in text and "seconds" in to_json(again, timing=True)


def test_nonfinite_values_are_strings(reports):
    doc = json.loads(to_json(reports["flat_ball"]))
    cb = next(v for v in doc["verdicts"] if v["name"] == "curvature_bound")
    assert cb["rhs"] == "inf"


def test_plotdata_schwarzschild_flow(reports):
    text = to_plotdata(reports["schw_m1_rb4"])["flow_hawking_mass"]
    y = np.loadtxt(text.splitlines(), comments="#")[:, 1]
    np.testing.assert_allclose(y, 1.0, atol=1e-4)


def test_csv_one_row_per_run(reports):
    rs = [reports["flat_ball"], reports["star"]]
    lines = to_csv(rs).strip().splitlines()
    assert len(lines) == 3 and lines[0].startswith("scenario,")


def test_emit(tmp_path, reports):
    paths = emit(reports["star"], "plotdata", tmp_path / "out")
    assert paths and all(p.suffix == ".dat" for p in paths)
    with pytest.raises(ValueError):
        emit(reports["star"], "xml", tmp_path)
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError):
        emit(reports["star"], "json", blocker / "sub")


def test_cli_list(capsys):
    assert cli.main(["list-scenarios"]) == 0
    assert "pg_m1_rb4" in capsys.readouterr().out


def test_cli_run_json(tmp_path, capsys):
    code = cli.main(["run", "--scenario", "schw_small", "--out", str(tmp_path), "--grid", "512",
                     "--toggle", "imcf=off", "--toggle", "glue=off"])
    assert code == 0
    doc = json.loads((tmp_path / "schw_small.json").read_text())
    assert doc["stages"]["imcf"]["status"] == "skipped"
    assert doc["scenario"]["grid"]["count"] == 512


def test_cli_sweep_csv(tmp_path):
    code = cli.main(["sweep", "--scenario", "flat_ball", "--axis", "grid.count", "--values",
                     "256", "512", "--format", "csv", "--out", str(tmp_path),
                     "--toggle", "imcf=off", "--toggle", "criteria=off"])
    assert code == 0
    rows = (tmp_path / "flat_ball.csv").read_text().strip().splitlines()
    assert len(rows) == 3 and rows[1].split(",")[1] == "256"


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("name: x\nfamily: star\n")
    assert cli.main(["run", "--scenario", str(bad)]) == cli.EXIT_USAGE
    assert "unknown family" in capsys.readouterr().err
    dense = tmp_path / "dense.yaml"
    dense.write_text("name: d\nfamily: constant_density_star\nparameters: {rho0: 1.0, r_b: 2.0}\n")
    assert cli.main(["run", "--scenario", str(dense)]) == cli.EXIT_STAGE
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", "--scenario", "flat_ball", "--toggle", "nope"])
    assert exc.value.code == cli.EXIT_USAGE


def test_cli_verify_reports_violations(monkeypatch, capsys):
    from penrose_lab import acceptance
    fake = [acceptance.CheckResult(1, "a", True, "ok"), acceptance.CheckResult(2, "b", False, "no")]
    monkeypatch.setattr(acceptance, "run_all", lambda: fake)
    assert cli.main(["verify"]) == cli.EXIT_ACCEPTANCE
    assert "1/2" in capsys.readouterr().out
