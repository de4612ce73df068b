"""Command line interface.

Subcommands: deduce, compile, transform, check, analyze.  Data goes to
stdout or the requested output file; diagnostics go to stderr.  Exit codes:
0 success, 1 domain/verification failure (or a violated check), 2 input
error.  ``check`` and ``analyze`` can additionally render figures next to
their output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from . import documents as docs
from .analysis import analyze as run_analysis
from .deduction import run_deduction_pipeline
from .engine import InputTypingError, TransformError, transform
from .graphs import GraphError
from .rules import generate_rules
from .triples import TypeGraphMismatch


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise docs.DocumentError(f"cannot read {what} {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_deduce(args) -> int:
    spec = docs.parse_spec(_read(args.spec, "specification"))
    annotated = run_deduction_pipeline(spec, enable_np=not args.no_np_deduction)
    _emit(docs.serialize_annotated(annotated), args.output)
    return 0


def _cmd_compile(args) -> int:
    spec = docs.parse_spec(_read(args.spec, "specification"))
    rules = generate_rules(spec, args.direction,
                           enable_np=not args.no_np_deduction)
    _emit(docs.serialize_rules(rules), args.output)
    return 0


def _cmd_transform(args) -> int:
    spec = docs.parse_spec(_read(args.spec, "specification"))
    model = docs.parse_model(_read(args.model, "model"))
    scheduler = "random" if args.seed is not None else "canonical"
    try:
        result = transform(spec, model, args.direction,
                           enable_np=not args.no_np_deduction,
                           scheduler=scheduler, seed=args.seed)
    except TransformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(docs.serialize_triple(result.triple), args.output)
    if args.trace:
        trace_doc = {"steps": [{"rule": s.rule, "assignment": dict(s.assignment),
                                "created": list(s.created)}
                               for s in result.trace.steps],
                     "diagnostics": list(result.trace.diagnostics)}
        Path(args.trace).write_text(yaml.safe_dump(trace_doc, sort_keys=True))
    return 0


def _figures_dir(args) -> Path | None:
    if not getattr(args, "figures", None):
        return None
    directory = Path(args.figures)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _cmd_check(args) -> int:
    from .patterns import check_spec
    spec = docs.parse_spec(_read(args.spec, "specification"))
    host = docs.parse_triple(_read(args.triple, "triple"), spec.metamodel)
    report = check_spec(host, spec)
    if args.format == "structured":
        _emit(docs.serialize_report(report), args.output)
    else:
        lines = []
        for e in report.entries:
            lines.append(f"{e.pattern} [{e.direction}]: {e.verdict}")
            for m in e.matches:
                detail = f" ({m.detail})" if m.detail else ""
                assignment = ", ".join(f"{k}->{v}" for k, v in m.assignment) \
                    or "(empty match)"
                lines.append(f"  {m.classification}{detail}: {assignment}")
        lines.append("satisfied" if report.satisfied else "VIOLATED")
        _emit("\n".join(lines) + "\n", args.output)
    figures = _figures_dir(args)
    if figures:
        from .viz import render_check_report, render_triple
        render_triple(host, figures / "host.png", "checked triple")
        render_check_report(report, figures / "check_report.png")
    return 0 if report.satisfied else 1


def _cmd_analyze(args) -> int:
    spec = docs.parse_spec(_read(args.spec, "specification"))
    report = run_analysis(spec)
    _emit(docs.serialize_analysis(report), args.output)
    figures = _figures_dir(args)
    if figures:
        from .viz import render_analysis_report, render_triple
        render_analysis_report(report, figures / "analysis_report.png")
        for p in spec.positive_patterns():
            render_triple(p.positive, figures / f"pattern_{p.name}.png", p.name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tripat",
        description="Compile and execute declarative triple-graph pattern "
                    "transformations")
    sub = parser.add_subparsers(dest="command", required=True)

    deduce = sub.add_parser("deduce", help="run the deduction pipeline")
    deduce.add_argument("spec")
    deduce.add_argument("-o", "--output")
    deduce.add_argument("--no-np-deduction", action="store_true")
    deduce.set_defaults(func=_cmd_deduce)

    comp = sub.add_parser("compile", help="generate operational rules")
    comp.add_argument("spec")
    comp.add_argument("--direction", required=True,
                      choices=("forward", "backward"))
    comp.add_argument("-o", "--output")
    comp.add_argument("--no-np-deduction", action="store_true")
    comp.set_defaults(func=_cmd_compile)

    trans = sub.add_parser("transform", help="run a forward or backward transformation")
    trans.add_argument("spec")
    trans.add_argument("model")
    trans.add_argument("--direction", required=True,
                       choices=("forward", "backward"))
    trans.add_argument("-o", "--output")
    trans.add_argument("--trace")
    trans.add_argument("--seed", type=int)
    trans.add_argument("--no-np-deduction", action="store_true")
    trans.set_defaults(func=_cmd_transform)

    check = sub.add_parser("check", help="check a triple against a specification")
    check.add_argument("spec")
    check.add_argument("triple")
    check.add_argument("--format", choices=("text", "structured"), default="text")
    check.add_argument("-o", "--output")
    check.add_argument("--figures", help="directory for rendered figures")
    check.set_defaults(func=_cmd_check)

    analyze = sub.add_parser("analyze", help="static analysis of a specification")
    analyze.add_argument("spec")
    analyze.add_argument("-o", "--output")
    analyze.add_argument("--figures", help="directory for rendered figures")
    analyze.set_defaults(func=_cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (docs.DocumentError, InputTypingError, TypeGraphMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
