"""Command line interface.

    penrose-lab list-scenarios
    penrose-lab run --scenario pg_m1_rb4 --out out/ --format json
    penrose-lab sweep --scenario schw_m1_rb4 --axis grid.count --values 512 1024 2048
    penrose-lab verify

Exit codes: 0 completed, 1 bad usage or input, 2 a stage failed hard,
3 an acceptance check failed under ``verify``.
"""

import argparse
import sys

from . import __version__
from .errors import PenroseLabError
from .pipeline import OBSERVABLES, SWEEP_AXES, run_pipeline, sweep
from .report import FORMATS, emit
from .scenarios import TOGGLES, list_scenarios, load_scenario

EXIT_OK, EXIT_USAGE, EXIT_STAGE, EXIT_ACCEPTANCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which is reserved for stage failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _toggle(text):
    stage, sep, state = text.partition("=")
    if not sep or stage not in TOGGLES or state not in ("on", "off"):
        raise argparse.ArgumentTypeError(
            f"expected STAGE=on|off with STAGE in {', '.join(TOGGLES)}, got {text!r}")
    return stage, state == "on"


def _scenario(args):
    spec = load_scenario(args.scenario)
    changes = {}
    if args.grid is not None:
        changes["grid.count"] = args.grid
    for stage, on in args.toggle or ():
        changes[f"toggles.{stage}"] = on
    return spec.with_overrides(**changes) if changes else spec


def _common(p):
    p.add_argument("--scenario", required=True, help="built-in name or scenario file")
    p.add_argument("--out", help="output directory (reports go to stdout summary only if omitted)")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--grid", type=int, help="override grid.count")
    p.add_argument("--toggle", type=_toggle, action="append", metavar="STAGE=on|off")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings in json")


def build_parser():
    parser = _Parser(prog="penrose-lab", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("list-scenarios", help="show built-in scenarios")
    run = sub.add_parser("run", help="run the pipeline on one scenario")
    _common(run)
    sw = sub.add_parser("sweep", help="run the pipeline along one parameter axis")
    _common(sw)
    sw.add_argument("--axis", choices=SWEEP_AXES, required=True)
    sw.add_argument("--values", type=float, nargs="+", required=True)
    sw.add_argument("--observable", action="append", choices=sorted(OBSERVABLES))
    sub.add_parser("verify", help="run the acceptance suite")
    return parser


def _summary(report):
    lines = [f"scenario {report.scenario['name']}"]
    for name, st in report.stages.items():
        extra = f"  ({st.error})" if st.error else ""
        lines.append(f"  {name:12s} {st.status}{extra}")
    for v in report.verdicts:
        if "conclusion" in v:
            lines.append(f"  [{v['conclusion']}] {v['name']}: {v['lhs']:.6g} vs {v['rhs']:.6g}")
            continue
        mark = "ok  " if v["holds"] else "FAIL"
        line = f"  [{mark}] {v['name']}: {v['lhs']:.6g} {v.get('relation', '')} {v['rhs']:.6g}"
        # chained verdicts can fail on a link other than the headline pair
        links = (v.get("details") or {}).get("checks") or {}
        bad = [k for k, c in links.items() if not c["holds"]]
        if bad:
            line += f"  (failing: {', '.join(bad)})"
        lines.append(line)
    return "\n".join(lines)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-scenarios":
            for name, desc in list_scenarios():
                print(f"{name:14s} {desc}")
            return EXIT_OK
        if args.command == "verify":
            from .acceptance import run_all
            results = run_all()
            failed = [r.number for r in results if not r.passed]
            print(f"{len(results) - len(failed)}/{len(results)} acceptance checks passed")
            return EXIT_ACCEPTANCE if failed else EXIT_OK
        spec = _scenario(args)
        if args.command == "run":
            reports, table = [run_pipeline(spec)], None
        else:
            values = [int(v) for v in args.values] if args.axis == "grid.count" else args.values
            reports, table = sweep(spec, args.axis, values, args.observable)
        for r in reports:
            print(_summary(r))
        if args.out:
            for path in emit(reports, args.format, args.out, table, args.timing):
                print(f"wrote {path}")
        return EXIT_STAGE if any(r.hard_failure for r in reports) else EXIT_OK
    except (PenroseLabError, OSError) as exc:
        print(f"penrose-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
