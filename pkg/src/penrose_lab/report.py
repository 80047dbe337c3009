"""Report emission: json documents, flat csv tables and plot series.

Output is byte-stable for identical inputs: keys are sorted, floats are
written with ``repr`` and wall-clock timings are left out unless asked for.
Non-finite numbers are written as the strings ``"nan"``, ``"inf"`` and
``"-inf"``.
"""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

FORMATS = ("json", "csv", "plotdata")
CSV_COLUMNS = (
    ("masses", "m_LY"), ("masses", "m_WY_tau0"), ("masses", "m_WY_family"),
    ("masses", "m_H_boundary"), ("hulls", "mots_radius"), ("hulls", "m_H_hull"),
    ("jang", "residual"), ("jang", "blowup_radius"), ("jang", "admissible"),
    ("glue", "m_ext"), ("glue", "A_tail"), ("glue", "m_adm_hat"), ("glue", "C1_measured"),
    ("imcf", "m_H_start"), ("imcf", "m_H_end"),
    ("criteria", "m_ST"), ("criteria", "m_star"), ("criteria", "C_absolute"),
)


def _clean(obj):
    """Plain JSON types; numpy scalars and arrays converted, non-finite as strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def to_json(report, timing=False):
    return json.dumps(_clean(report.to_dict(timing)), sort_keys=True, indent=2) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def to_csv(reports, extra=None):
    """One row per run: scenario, stage statuses, key observables, verdict outcomes."""
    reports = list(reports)
    verdict_names = sorted({v["name"] for r in reports for v in r.verdicts})
    extra = extra or [{} for _ in reports]
    extra_keys = sorted({k for e in extra for k in e})
    header = (["scenario"] + extra_keys + [f"status.{s}" for s in reports[0].stages]
              + [f"{s}.{k}" for s, k in CSV_COLUMNS] + [f"holds.{n}" for n in verdict_names])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r, e in zip(reports, extra):
        outcome = {v["name"]: v["holds"] for v in r.verdicts}
        w.writerow([r.scenario["name"]] + [_cell(e.get(k)) for k in extra_keys]
                   + [st.status for st in r.stages.values()]
                   + [_cell(r.artifact(s, k)) for s, k in CSV_COLUMNS]
                   + [_cell(outcome.get(n)) for n in verdict_names])
    return buf.getvalue()


def to_plotdata(report):
    """``{series name: text}`` with two whitespace-separated columns per series."""
    out = {}
    for name in sorted(report.series):
        x, y = report.series[name]
        lines = [f"# {report.scenario['name']} {name}", "# x y"]
        lines += [f"{float(a)!r} {float(b)!r}" for a, b in zip(np.asarray(x), np.asarray(y))]
        out[name] = "\n".join(lines) + "\n"
    return out


def emit(reports, fmt, out, sweep_table=None, timing=False):
    """Write one or more reports into the directory ``out``; returns the paths."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    reports = list(reports) if isinstance(reports, (list, tuple)) else [reports]
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    paths = []

    def write(path, text):
        with open(path, "w", newline="") as fh:
            fh.write(text)
        paths.append(path)

    if fmt == "json":
        for i, r in enumerate(reports):
            suffix = f".{i:03d}" if len(reports) > 1 else ""
            write(out / f"{r.scenario['name']}{suffix}.json", to_json(r, timing))
        if sweep_table is not None:
            write(out / "sweep.json", json.dumps(_clean(sweep_table), sort_keys=True, indent=2) + "\n")
    elif fmt == "csv":
        extra = None
        if sweep_table is not None:
            cast = int if sweep_table["axis"] == "grid.count" else float
            extra = [{sweep_table["axis"]: cast(v)} for v in sweep_table["values"]]
        write(out / f"{reports[0].scenario['name']}.csv", to_csv(reports, extra))
    else:
        for i, r in enumerate(reports):
            suffix = f".{i:03d}" if len(reports) > 1 else ""
            for name, text in to_plotdata(r).items():
                write(out / f"{r.scenario['name']}{suffix}.{name}.dat", text)
    return paths
