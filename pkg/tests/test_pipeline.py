import numpy as np
import pytest
from numpy.testing import assert_allclose

from penrose_lab.pipeline import STAGES, observable, run_pipeline, sweep
from penrose_lab.scenarios import load_scenario

from conftest import LY_SCHW


def test_report_shape(reports):
    for name, r in reports.items():
        assert list(r.stages) == list(STAGES)
        assert not r.hard_failure, name
        for v in r.verdicts:
            assert {"name", "criterion", "holds", "lhs", "rhs", "tolerance"} <= set(v)


def test_flat(reports):
    r = reports["flat_ball"]
    assert_allclose(r.artifact("masses", "m_LY"), 0.0, atol=1e-12)
    assert r.artifact("hulls", "mots_radius") is None
    for name in ("hoop_mass", "isoperimetric", "curvature_bound", "schoen_yau"):
        v = [x for x in r.verdicts if x["name"] == name or x.get("details", {}).get("criterion") == name]
        assert v and v[0]["conclusion"] in ("inconclusive", "not_exists")


def test_schwarzschild(reports):
    r = reports["schw_m1_rb4"]
    assert_allclose(r.artifact("masses", "m_LY"), LY_SCHW, atol=1e-5)
    pen = r.verdict("penrose_mots")
    assert pen["holds"]
    assert_allclose(pen["rhs"], 1.0, atol=1e-6)
    assert all(v["holds"] for v in r.verdicts if "conclusion" not in v)


def test_pg(reports):
    r = reports["pg_m1_rb4"]
    assert_allclose(r.artifact("hulls", "mots_radius"), 2.0, atol=1e-6)
    pen = r.verdict("penrose_mots")
    assert pen["holds"] and abs(pen["rhs"] - 1.0) < 1e-4
    assert not r.verdict("hull_chain")["details"]["applies"]


def test_toggles_skip_downstream():
    spec = load_scenario("schw_small").with_overrides(**{"toggles.jang": False})
    r = run_pipeline(spec)
    assert r.stages["jang"].status == "skipped"
    assert r.stages["hulls"].status == "skipped"
    assert r.stages["masses"].status == "ok"


def test_hard_failure_recorded():
    # too dense: 2M(r)/r reaches 1 inside the domain, so no data can be built
    r = run_pipeline(load_scenario("star").with_overrides(**{"parameters.rho0": 1.0}))
    assert r.hard_failure
    assert r.stages["constraints"].status == "failed"
    assert "density too large" in r.stages["constraints"].error
    assert all(r.stages[s].status == "skipped" for s in STAGES[1:])


def test_grid_sweep_orders():
    spec = load_scenario("schw_m1_rb4").with_overrides(
        **{"toggles.glue": False, "toggles.imcf": False, "toggles.criteria": False,
           "toggles.wang_yau_family": False})
    _, table = sweep(spec, "grid.count", [512, 1024, 2048, 4096, 8192], ["m_H_boundary"],
                     reference={"m_H_boundary": 1.0})
    assert np.all(np.array(table["observables"]["m_H_boundary"]["orders"]) >= 1.9)


def test_r_b_sweep_approaches_mass():
    spec = load_scenario("schw_small").with_overrides(
        **{"parameters.m": 1.0, "grid.r_min": 3.0, "toggles.glue": False, "toggles.imcf": False,
           "toggles.criteria": False, "toggles.wang_yau_family": False})
    radii = [4.0, 8.0, 16.0, 32.0]
    reports, _ = sweep(spec, "r_b", radii, ["m_LY"])
    vals = [observable(r, "m_LY") for r in reports]
    assert_allclose(vals, [r * (1 - np.sqrt(1 - 2 / r)) for r in radii], rtol=1e-5)
    assert np.all(np.diff(vals) < 0) and vals[-1] > 1.0


def test_sweep_rejects_unknown_axis():
    with pytest.raises(ValueError):
        sweep(load_scenario("flat_ball"), "colour", [1, 2])
