import numpy as np
import pytest
import yaml
from hypothesis import given, settings, strategies as st

from penrose_lab.errors import ScenarioError
from penrose_lab.scenarios import (BUILTIN, dump_scenario, list_scenarios, load_scenario,
                                   parse_scenario)


def test_builtin_pg():
    spec = load_scenario("pg_m1_rb4")
    assert spec.family == "painleve_gullstrand"
    assert spec.parameters == {"m": 1.0, "r_b": 4.0}
    data = spec.build_data()
    assert data.grid.r_max == 4.0 and data.grid.count == 1024


def test_every_builtin_builds():
    assert [n for n, _ in list_scenarios()] == sorted(BUILTIN)
    for name in BUILTIN:
        assert load_scenario(name).build_data().grid.count >= 16


def test_round_trip(tmp_path):
    spec = load_scenario("schw_small")
    text = dump_scenario(spec)
    assert text.startswith("# units:")
    path = tmp_path / "s.yaml"
    path.write_text(text)
    assert load_scenario(str(path)) == spec


def test_missing_fields_reported_with_line():
    with pytest.raises(ScenarioError, match=r"<scenario>:3: missing fields: parameters.r_b"):
        parse_scenario("name: x\nfamily: schwarzschild\nparameters:\n  m: 1.0\n")
    with pytest.raises(ScenarioError, match="missing fields: family"):
        parse_scenario("name: x\n")


def test_unknown_field_and_bad_values():
    with pytest.raises(ScenarioError, match=r":3: unknown fields: colour"):
        parse_scenario("name: x\nfamily: flat\ncolour: red\nparameters: {r_b: 1}\n")
    with pytest.raises(ScenarioError, match="grid.count"):
        parse_scenario("name: x\nfamily: flat\nparameters: {r_b: 1}\ngrid: {count: 4}\n")
    with pytest.raises(ScenarioError, match="finite number"):
        parse_scenario("name: x\nfamily: flat\nparameters: {r_b: abc}\n")
    with pytest.raises(ScenarioError, match="parse error"):
        parse_scenario("name: [x\n")
    with pytest.raises(ScenarioError, match="no scenario"):
        load_scenario("/nonexistent/file.yaml")


def _table(r):
    return [[float(x), 1.0, float(x), 0.0, 0.0] for x in r]


def test_custom_table_monotone_r():
    rows = _table(np.linspace(0.0, 2.0, 20))
    rows[5][0] = rows[3][0]  # the sixth row steps back
    text = yaml.safe_dump({"name": "t", "family": "custom_table", "table": rows})
    with pytest.raises(ScenarioError, match=r"not strictly increasing \(row 6\)"):
        parse_scenario(text)


def test_custom_table_file(tmp_path):
    r = np.linspace(0.0, 2.0, 64)
    np.savetxt(tmp_path / "t.csv", np.array(_table(r)), delimiter=",", header="r,a,rho,k_rr,k_t")
    (tmp_path / "s.yaml").write_text("name: t\nfamily: custom_table\ntable_file: t.csv\n")
    data = load_scenario(str(tmp_path / "s.yaml")).build_data()
    np.testing.assert_allclose(data.rho, r)


@settings(max_examples=20, deadline=None)
@given(st.integers(16, 4096), st.booleans())
def test_overrides(count, imcf):
    spec = load_scenario("flat_ball").with_overrides(**{"grid.count": count, "toggles.imcf": imcf})
    assert spec.grid["count"] == count
    assert spec.enabled("imcf") is imcf
    assert spec.enabled("glue")
