"""Command-line interface.

Each subcommand runs the pipeline up to its own stage and prints the
matching slice of the report::

    lnegraph validate --input graph.json
    lnegraph nash --example a2_minimal --format dot
    lnegraph report --input graph.json --format json

Exit codes: 0 success, 2 validation failure, 3 not-LNE certificate,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .dot import export_dot
from .errors import GraphValidationError, InvariantViolation
from .io import example_names, load_example, load_graph
from .nash import default_cap
from .pipeline import PipelineReport, run_pipeline

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_LNE = 3
EXIT_INTERNAL = 4

_COMMON = ["tool", "input_hash", "input", "validation", "not_lne_certificate", "stages_completed"]

# subcommand -> (last pipeline stage, extra report keys, default DOT stage)
COMMANDS = {
    "validate": ("validate", [], "input"),
    "zmin": ("cycles", ["fundamental_cycle", "multiplicities", "l_vector", "l_nodes",
                        "total_multiplicity"], "input"),
    "rates": ("rates", ["multiplicities", "l_nodes", "inner_rates", "coarse_p_vector"], "input"),
    "nash": ("nash", ["refined_graph", "p_vector", "p_nodes", "local_degrees"], "refined"),
    "discriminant": ("discriminant", ["quotient", "eggers_wall"], "eggers_wall"),
    "report": ("discriminant", None, None),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lnegraph",
        description="Combinatorial invariants of LNE surface singularities from a resolution graph.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check the input graph",
        "zmin": "fundamental cycle, multiplicities and the ℒ-vector",
        "rates": "inner rates and the 𝒫-vector on the input graph",
        "nash": "refine until the graph factors through the Nash transform",
        "discriminant": "quotient graph and Eggers-Wall tree of the discriminant",
        "report": "everything",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", metavar="FILE", help="graph file (JSON)")
        src.add_argument("--example", choices=example_names(), help="bundled example graph")
        p.add_argument("--format", choices=["json", "dot", "text"], default="json")
        p.add_argument("--stage", choices=["input", "refined", "quotient", "eggers_wall"],
                       help="graph to draw with --format dot")
        p.add_argument("-o", "--output", metavar="FILE", help="write here instead of stdout")
    return parser


def select(report: PipelineReport, command: str) -> dict:
    full = report.to_dict()
    extra = COMMANDS[command][1]
    if extra is None:
        return full
    return {k: full[k] for k in _COMMON + extra if k in full}


def render_text(data: dict) -> str:
    lines = []
    for key, value in data.items():
        if key in ("input", "tool"):
            continue
        if isinstance(value, dict) and value and all(not isinstance(x, (dict, list))
                                                     for x in value.values()):
            lines.append(f"{key}:")
            lines += [f"  {k}: {v}" for k, v in value.items()]
        elif isinstance(value, (dict, list)):
            lines.append(f"{key}: {json.dumps(value, ensure_ascii=False, sort_keys=False)}")
        else:
            lines.append(f"{key}: {json.dumps(value)}")
    return "\n".join(lines) + "\n"


def render(report: PipelineReport, args) -> str:
    if args.format == "json":
        return json.dumps(select(report, args.command), indent=2, ensure_ascii=False) + "\n"
    if args.format == "text":
        return render_text(select(report, args.command))
    if args.stage:
        return export_dot(report, args.stage)
    default = COMMANDS[args.command][2]
    if default is not None:
        return export_dot(report, default)
    present = {"input": True, "refined": report.refined is not None,
               "quotient": report.quotient is not None,
               "eggers_wall": report.eggers_wall is not None}
    return "".join(export_dot(report, s) for s, ok in present.items() if ok)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cap = default_cap()
    except ValueError:
        print("error: LNE_BLOWUP_CAP must be an integer", file=sys.stderr)
        return EXIT_INVALID
    try:
        G = load_example(args.example) if args.example else load_graph(args.input, validate=False)
    except GraphValidationError as exc:
        for problem in exc.problems:
            print(f"error: {problem.rule}: {problem.subject}: {problem.message}", file=sys.stderr)
        return EXIT_INVALID

    try:
        report = run_pipeline(G, cap=cap, stop_after=COMMANDS[args.command][0])
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        if exc.diagnostic is not None:
            print(json.dumps(exc.diagnostic, indent=2, default=str), file=sys.stderr)
        return EXIT_INTERNAL
    try:
        text = render(report, args)
    except ValueError as exc:
        # a DOT stage that the run never reached
        print(f"error: {exc}", file=sys.stderr)
        text = ""
        if report.validation.ok and report.certificate is None:
            return EXIT_INVALID

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if not report.validation.ok:
        for problem in report.validation.problems:
            print(f"error: {problem.rule}: {problem.subject}: {problem.message}", file=sys.stderr)
        return EXIT_INVALID
    if report.certificate is not None:
        for v in report.certificate.violations:
            print(f"not LNE: {v.rule} at {v.vertex}: {v.detail}", file=sys.stderr)
        return EXIT_NOT_LNE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
