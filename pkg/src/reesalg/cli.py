"""Command line entry point: ``reesalg run|corpus|calibrate|paper-suite``."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from . import __version__
from .calibration import calibrate
from .jobs import SCHEMA_VERSION, JobParseError, parse_job, run_job, with_overrides

SUITE_FILES = ("example_2_8.job", "example_2_8_plane.job", "example_3_6.job")


def shipped_job(name: str) -> str:
    return resources.files("reesalg").joinpath("data", name).read_text(encoding="utf-8")


def _overrides(args) -> dict:
    return {"characteristic": args.char, "order": args.order, "n_max": args.n_max,
            "window": args.window, "degree_bound": args.degree_bound,
            "time_budget": args.time_budget}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_run(args) -> int:
    try:
        with open(args.jobfile, encoding="utf-8") as fh:
            spec = with_overrides(parse_job(fh.read()), **_overrides(args))
    except JobParseError as exc:
        print(f"{args.jobfile}: {exc}", file=sys.stderr)
        return 3
    report = run_job(spec)
    _emit(report.to_json() if args.json else report.human(), args.out)
    return report.exit_code


def suite_document(overrides: dict | None = None) -> tuple:
    reports = []
    for name in SUITE_FILES:
        spec = with_overrides(parse_job(shipped_job(name)), **(overrides or {}))
        reports.append((name, run_job(spec)))
    doc = {"schema_version": SCHEMA_VERSION, "tool_version": __version__,
           "suite": [{"job": name, "report": r.as_dict()} for name, r in reports]}
    code = max((r.exit_code for _, r in reports), default=0)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n", code, reports


def cmd_paper_suite(args) -> int:
    text, code, reports = suite_document(_overrides(args))
    if args.json:
        _emit(text, args.out)
    else:
        _emit("\n\n".join(f"== {name}\n{r.human()}" for name, r in reports), args.out)
    return code


def cmd_corpus(args) -> int:
    from .corpus import corpus_run

    table = corpus_run(args.vars, args.max_degree, args.count, args.seed,
                       args.time_budget or 300)
    _emit(table.to_json() if args.json else table.human(), args.out)
    agg = table.aggregates()
    if not table.calibration.get("passed", False):
        return 2
    bad = agg["soundness_violations"] + agg["reg_disagreements"] + agg["lemma_violations"]
    return 1 if bad or agg["errors"] else 0


def cmd_calibrate(args) -> int:
    rec = calibrate(args.char or 32003, force=True)
    if args.json:
        _emit(json.dumps(rec.as_dict(), indent=2, sort_keys=True), args.out)
    else:
        lines = [f"characteristic {rec.characteristic}"]
        for c in rec.checks:
            lines.append(f"{'PASS' if c.ok else 'FAIL'}  {c.name}: expected {c.expected}, "
                         f"observed {c.observed}")
        _emit("\n".join(lines), args.out)
    return 0 if rec.passed else 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=int, help="prime characteristic")
    common.add_argument("--order", choices=["degrevlex", "lex"])
    common.add_argument("--n-max", type=int)
    common.add_argument("--window", type=int)
    common.add_argument("--degree-bound", type=int)
    common.add_argument("--time-budget", type=int, help="seconds per task")
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--out", help="write the report to this file")

    parser = argparse.ArgumentParser(prog="reesalg", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", parents=[common], help="run a job file")
    p.add_argument("jobfile")
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("corpus", parents=[common], help="random monomial ideal corpus")
    p.add_argument("--vars", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=cmd_corpus)
    p = sub.add_parser("calibrate", parents=[common], help="run the duality calibration")
    p.set_defaults(func=cmd_calibrate)
    p = sub.add_parser("paper-suite", parents=[common], help="run the shipped example jobs")
    p.set_defaults(func=cmd_paper_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
