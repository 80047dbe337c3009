"""Scenario files: YAML key-value documents describing one pipeline run.

A scenario names a data family with its parameters, the radial grid, the
Jang boundary conditions and optional stage toggles and tolerance
overrides. Built-in scenarios are available by name.
"""

import copy
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import families
from .errors import ScenarioError
from .initial_data import RadialGrid, SphericalInitialData

HEADER = "# units: G = c = 1; lengths in units of the mass parameter m when there is one\n"

FAMILIES = {
    "flat": ("r_b",),
    "schwarzschild": ("m", "r_b"),
    "schwarzschild_isotropic": ("m", "r_b"),
    "painleve_gullstrand": ("m", "r_b"),
    "constant_density_star": ("rho0", "r_b"),
    "dumbbell": (),
    "custom_table": (),
}
TOGGLES = ("jang", "wang_yau_family", "imcf", "glue", "criteria")
ORIENTATIONS = ("future", "past", "either")
TABLE_COLUMNS = ("r", "a", "rho", "k_rr", "k_t")
TOP_KEYS = {"name", "family", "parameters", "grid", "jang", "toggles", "tolerances",
            "glue", "orientation", "table", "table_file", "description"}


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    family: str
    parameters: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    jang: dict = field(default_factory=dict)
    toggles: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    glue: dict = field(default_factory=dict)
    orientation: str = "either"
    table: tuple = None
    description: str = ""

    def enabled(self, stage):
        return bool(self.toggles.get(stage, True))

    def with_overrides(self, **changes):
        """Copy with ``section.key`` overrides, e.g. ``{"grid.count": 2048}``."""
        d = self.to_dict()
        for key, value in changes.items():
            section, _, sub = key.partition(".")
            if sub:
                d.setdefault(section, {})
                d[section] = dict(d[section], **{sub: value})
            else:
                d[section] = value
        return spec_from_dict(d)

    def to_dict(self):
        out = {"name": self.name, "family": self.family,
               "parameters": dict(self.parameters), "grid": dict(self.grid),
               "jang": dict(self.jang), "toggles": dict(self.toggles),
               "tolerances": dict(self.tolerances), "glue": dict(self.glue),
               "orientation": self.orientation}
        if self.table is not None:
            out["table"] = [list(row) for row in self.table]
        if self.description:
            out["description"] = self.description
        return out

    def build_data(self):
        """The initial data set described by the scenario."""
        p, g = self.parameters, self.grid
        count = int(g.get("count", 1024))
        fam = self.family
        if fam == "flat":
            return families.flat(p["r_b"], count, g.get("r_min", 0.0))
        if fam == "schwarzschild":
            return families.schwarzschild(p["m"], p["r_b"], count, g.get("r_min"))
        if fam == "schwarzschild_isotropic":
            return families.schwarzschild_isotropic(p["m"], p["r_b"], count, g.get("r_min"))
        if fam == "painleve_gullstrand":
            return families.painleve_gullstrand(p["m"], p["r_b"], count, g.get("r_min"))
        if fam == "constant_density_star":
            return families.constant_density_star(p["rho0"], p["r_b"], count)
        if fam == "dumbbell":
            return families.dumbbell(g.get("r_min", 0.3), g.get("r_max", 3.0), count)
        cols = np.asarray(self.table, dtype=float).T
        return SphericalInitialData(RadialGrid(cols[0]), cols[1], cols[2], cols[3], cols[4],
                                    name=self.name)


def _line_of(node, key):
    """1-based line of ``key`` in a composed YAML mapping, or of the mapping itself."""
    if node is None:
        return None
    if isinstance(node, yaml.MappingNode):
        for k, _ in node.value:
            if k.value == key:
                return k.start_mark.line + 1
    return node.start_mark.line + 1


def _fail(msg, line=None, source="<scenario>"):
    where = f"{source}:{line}: " if line else f"{source}: "
    raise ScenarioError(where + msg)


def _sub_node(root, key):
    if isinstance(root, yaml.MappingNode):
        for k, v in root.value:
            if k.value == key:
                return v
    return None


def _read_table(path, base):
    p = Path(path)
    if not p.is_absolute() and base is not None:
        p = Path(base) / p
    try:
        arr = np.loadtxt(p, delimiter=",", comments="#", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ScenarioError(f"cannot read table {p}: {exc}") from exc
    return arr.tolist()


def spec_from_dict(d, node=None, source="<scenario>", base=None):
    """Validate a parsed scenario mapping."""
    if not isinstance(d, dict):
        _fail("scenario must be a mapping", None, source)
    unknown = sorted(set(d) - TOP_KEYS)
    if unknown:
        _fail(f"unknown fields: {', '.join(unknown)}", _line_of(node, unknown[0]), source)
    missing = [k for k in ("name", "family") if k not in d]
    if missing:
        _fail(f"missing fields: {', '.join(missing)}", _line_of(node, None), source)
    fam = d["family"]
    if fam not in FAMILIES:
        _fail(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}",
              _line_of(node, "family"), source)
    params = d.get("parameters") or {}
    missing = [k for k in FAMILIES[fam] if k not in params]
    if missing:
        _fail(f"missing fields: {', '.join('parameters.' + k for k in missing)}",
              _line_of(node, "parameters") if "parameters" in d else _line_of(node, "family"),
              source)
    for k, v in params.items():
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not np.isfinite(v):
            _fail(f"parameter {k} must be a finite number", _line_of(_sub_node(node, "parameters"), k),
                  source)
    grid = dict(d.get("grid") or {})
    if "count" in grid and (not isinstance(grid["count"], int) or grid["count"] < 16):
        _fail("grid.count must be an integer >= 16", _line_of(_sub_node(node, "grid"), "count"), source)
    if "r_min" in grid and "r_max" in grid and not grid["r_min"] < grid["r_max"]:
        _fail("grid.r_min must be below grid.r_max", _line_of(node, "grid"), source)
    toggles = dict(d.get("toggles") or {})
    bad = sorted(set(toggles) - set(TOGGLES))
    if bad:
        _fail(f"unknown toggles: {', '.join(bad)}", _line_of(node, "toggles"), source)
    orientation = d.get("orientation", "either")
    if orientation not in ORIENTATIONS:
        _fail(f"orientation must be one of {', '.join(ORIENTATIONS)}",
              _line_of(node, "orientation"), source)
    table = None
    if fam == "custom_table":
        if "table" in d:
            table = d["table"]
        elif "table_file" in d:
            table = _read_table(d["table_file"], base)
        else:
            _fail("missing fields: table (or table_file)", _line_of(node, "family"), source)
        line = _line_of(node, "table") or _line_of(node, "table_file")
        try:
            arr = np.asarray(table, dtype=float)
        except (TypeError, ValueError):
            _fail("table rows must be numeric", line, source)
        if arr.ndim != 2 or arr.shape[1] != len(TABLE_COLUMNS):
            _fail(f"table rows need the columns {', '.join(TABLE_COLUMNS)}", line, source)
        if arr.shape[0] < 16:
            _fail("table needs at least 16 rows", line, source)
        steps = np.diff(arr[:, 0])
        if np.any(steps <= 0):
            row = int(np.flatnonzero(steps <= 0)[0]) + 2
            _fail(f"table column r is not strictly increasing (row {row})", line, source)
        if np.any(arr[:, 1] <= 0) or np.any(arr[:, 2] < 0):
            _fail("table needs a > 0 and rho >= 0", line, source)
        table = tuple(tuple(float(x) for x in row) for row in arr)
    return ScenarioSpec(
        name=str(d["name"]), family=fam, parameters=dict(params), grid=grid,
        jang=dict(d.get("jang") or {}), toggles=toggles,
        tolerances=dict(d.get("tolerances") or {}), glue=dict(d.get("glue") or {}),
        orientation=orientation, table=table, description=str(d.get("description", "")))


def parse_scenario(text, source="<scenario>", base=None):
    try:
        node = yaml.compose(text)
        d = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        _fail(f"parse error: {getattr(exc, 'problem', exc)}", mark.line + 1 if mark else None, source)
    return spec_from_dict(d, node, source, base)


def load_scenario(path_or_name):
    """A scenario file, or a built-in scenario by name."""
    if path_or_name in BUILTIN:
        return spec_from_dict(copy.deepcopy(BUILTIN[path_or_name]), source=path_or_name)
    p = Path(path_or_name)
    if not p.exists():
        raise ScenarioError(f"no scenario file or built-in named {path_or_name!r}")
    return parse_scenario(p.read_text(), str(p), p.parent)


def dump_scenario(spec):
    return HEADER + yaml.safe_dump(spec.to_dict(), sort_keys=False)


BUILTIN = {
    "flat_ball": {
        "name": "flat_ball", "family": "flat", "parameters": {"r_b": 4.0},
        "grid": {"count": 1024}, "description": "Euclidean ball, k = 0"},
    "schw_m1_rb4": {
        "name": "schw_m1_rb4", "family": "schwarzschild_isotropic",
        "parameters": {"m": 1.0, "r_b": 4.0}, "grid": {"count": 4096},
        "description": "time-symmetric Schwarzschild from the horizon to area radius 4"},
    "schw_small": {
        "name": "schw_small", "family": "schwarzschild", "parameters": {"m": 0.01, "r_b": 4.0},
        "grid": {"count": 1024, "r_min": 3.0},
        "description": "weak-field Schwarzschild annulus [3, 4]"},
    "pg_m1_rb4": {
        "name": "pg_m1_rb4", "family": "painleve_gullstrand", "parameters": {"m": 1.0, "r_b": 4.0},
        "grid": {"count": 1024}, "jang": {"inner": "neumann"}, "orientation": "future",
        "description": "Painleve-Gullstrand slice, horizon at r = 2 inside the domain"},
    "pg_annulus": {
        "name": "pg_annulus", "family": "painleve_gullstrand", "parameters": {"m": 1.0, "r_b": 4.0},
        "grid": {"count": 1024, "r_min": 3.0}, "jang": {"inner": "dirichlet"},
        "description": "Painleve-Gullstrand annulus [3, 4] outside the horizon"},
    "star": {
        "name": "star", "family": "constant_density_star",
        "parameters": {"rho0": 0.01, "r_b": 2.0}, "grid": {"count": 1024},
        "description": "uniform-density time-symmetric star"},
    "dumbbell": {
        "name": "dumbbell", "family": "dumbbell", "grid": {"count": 1024},
        "description": "time-symmetric profile with a bulge and a neck"},
}


def list_scenarios():
    return [(name, BUILTIN[name].get("description", "")) for name in sorted(BUILTIN)]
