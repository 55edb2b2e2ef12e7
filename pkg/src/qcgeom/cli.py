"""Command-line front end.

``qcgeom check`` runs suites over an example or a chart file and writes a
JSON report; ``qcgeom emit`` writes an example chart file.

Exit codes: 0 when every must-vanish check vanishes, 1 when one does not
(or could not be computed), 2 on input or configuration errors.
"""
import argparse
import logging
import sys

from .atlas import EXAMPLES, emit_chart, example_chart
from .errors import ChartSchemaError, ConstructionInvalid
from .ratjet.expr import ExpressionSyntaxError, UnknownSymbolError
from .report import report_json
from .runner import SUITES, RunConfig, resolve_chart, run

__all__ = ["main", "build_parser"]

log = logging.getLogger("qcgeom")

_INPUT_ERRORS = (OSError, ChartSchemaError, ExpressionSyntaxError, UnknownSymbolError, ValueError)


def _suites(text):
    items = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in items if s not in SUITES]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"unknown suite(s) {bad}; choose from {','.join(SUITES)}")
    return items


def build_parser():
    p = argparse.ArgumentParser(prog="qcgeom", description=__doc__.split("\n\n")[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run verification suites and write a JSON report")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--example", choices=sorted(EXAMPLES))
    src.add_argument("--chart", metavar="PATH", help="chart JSON file")
    c.add_argument("--n", type=int, default=1, help="quaternionic rank for --example (default 1)")
    c.add_argument("--deform", metavar="EXPR", help="conformal factor mu; every eta_l becomes mu * eta_l")
    c.add_argument("--points", type=int, default=5, help="number of sample points (default 5)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--jet-order", type=int, default=3, help="jet order of the contact forms (default 3)")
    c.add_argument("--coeff-bound", type=int, default=7, help="bound on sample numerators/denominators (default 7)")
    c.add_argument("--suites", type=_suites, default=("structure", "torsion", "theorem"),
                   help=f"comma-separated subset of {','.join(SUITES)} (default structure,torsion,theorem)")
    c.add_argument("--json", metavar="PATH", help="report destination ('-' for stdout)")
    c.add_argument("--prescreen", action="store_true", help="also run every point mod p and compare verdicts")

    e = sub.add_parser("emit", help="write an example chart as JSON")
    e.add_argument("--example", required=True, choices=sorted(EXAMPLES))
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--out", metavar="PATH", help="destination (default stdout)")
    return p


def _summary(result):
    lines = []
    for p in result.points:
        failed = [c for c in p.checks if c.failed] + ([c for c in p.cone["checks"] if c.failed] if p.cone else [])
        verdict = p.classification["verdict"] if p.classification else "-"
        lines.append(f"point {p.index}: {'FAIL' if failed else 'ok'}  {verdict}"
                     + (f"  ({len(p.retries)} retries)" if p.retries else ""))
        for c in failed:
            lines.append(f"  {c.name}: {c.status} {c.witness or ''}".rstrip())
    lines.append(f"{result.label}: {'FAIL' if result.failed() else 'PASS'}")
    return "\n".join(lines)


def _check(args):
    cfg = RunConfig(example=args.example, chart_path=args.chart, n=args.n, deform=args.deform,
                    points=args.points, seed=args.seed, jet_order=args.jet_order,
                    coeff_bound=args.coeff_bound, suites=args.suites, prescreen=args.prescreen)
    try:
        cfg.validate()
        chart = resolve_chart(cfg)
    except ConstructionInvalid:
        raise
    except _INPUT_ERRORS as exc:
        print(f"qcgeom: error: {exc}", file=sys.stderr)
        return 2
    log.info("checking %s at %d point(s), seed %d", chart.label, cfg.points, cfg.seed)
    result = run(cfg, chart)
    text = report_json(result)
    if args.json == "-":
        sys.stdout.write(text)
    else:
        if args.json:
            try:
                with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)
            except OSError as exc:
                print(f"qcgeom: error: {exc}", file=sys.stderr)
                return 2
        print(_summary(result))
    return 1 if result.failed() else 0


def _emit(args):
    try:
        chart = example_chart(args.example, args.n)
    except ValueError as exc:
        print(f"qcgeom: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        try:
            emit_chart(chart, args.out)
        except OSError as exc:
            print(f"qcgeom: error: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(chart.to_json())
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return _check(args) if args.command == "check" else _emit(args)
    except ConstructionInvalid as exc:
        print(f"qcgeom: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
