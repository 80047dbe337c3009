"""Run every built-in scenario and write json and csv reports.

    python3 scripts/run_builtins.py [out_dir]
"""

import sys
from pathlib import Path

from penrose_lab.pipeline import run_pipeline
from penrose_lab.report import emit
from penrose_lab.scenarios import BUILTIN, load_scenario


def main(out="out/builtins"):
    out = Path(out)
    reports = [run_pipeline(load_scenario(name)) for name in sorted(BUILTIN)]
    for r in reports:
        bad = [n for n, st in r.stages.items() if st.status not in ("ok", "skipped")]
        print(f"{r.scenario['name']:14s} {'ok' if not bad else 'issues: ' + ', '.join(bad)}")
    for fmt in ("json", "csv"):
        for path in emit(reports, fmt, out):
            print(f"wrote {path}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
