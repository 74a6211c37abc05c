"""Command-line front end: eval, pipeline, serve.

Exit codes for eval: 0 TRUE, 1 FALSE, 2 UNKNOWN, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from .evaluator import EvalParams, Verdict, check_po
from .parser import ParseError, parse_predicate
from .render import render
from .rules import append_rule, make_rule
from .store import (
    Group,
    InterchangeError,
    ProofObligation,
    load_component,
    save_component,
)
from .pipeline import render_report, report_csv, run_pipeline
from .values import format_value

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract wants 3."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="bevalkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one predicate")
    p_eval.add_argument("--goal", required=True)
    p_eval.add_argument("--hyp", action="append", default=[],
                        help="hypothesis, repeatable")
    p_eval.add_argument("--component", help="component name in the workspace")
    p_eval.add_argument("--params", default="",
                        help='flag string, e.g. "-p MAXINT 1024 -p init"')
    p_eval.add_argument("--add-rule", action="store_true")
    p_eval.add_argument("--wd", action="store_true",
                        help="route an added rule to the wd_pmm file")
    p_eval.add_argument("--workspace", default=None)

    p_pipe = sub.add_parser("pipeline", help="run the strategy pipeline")
    p_pipe.add_argument("--component-file", required=True)
    p_pipe.add_argument("--params", default="")
    p_pipe.add_argument("--emit-rules", action="store_true")
    p_pipe.add_argument("--csv", action="store_true")

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("--workspace", default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def _workspace(arg: Optional[str]) -> Path:
    return Path(arg or os.environ.get("BEVALKIT_WORKSPACE", "."))


def _parse_params(text: str) -> EvalParams:
    if not text.strip():
        return EvalParams()
    return EvalParams.from_flag_string(text)


def _cmd_eval(args) -> int:
    try:
        params = _parse_params(args.params)
    except ValueError as err:
        print(f"bad --params: {err}", file=sys.stderr)
        return EXIT_USAGE
    if args.add_rule and not args.component:
        print("--add-rule requires --component", file=sys.stderr)
        return EXIT_USAGE
    try:
        goal = parse_predicate(args.goal)
        hyps = tuple(parse_predicate(h) for h in args.hyp)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_USAGE

    component = None
    workspace = _workspace(args.workspace)
    if args.component:
        try:
            component = load_component(workspace, args.component)
        except InterchangeError as err:
            print(f"cannot load component: {err}", file=sys.stderr)
            return EXIT_USAGE

    po = ProofObligation(
        name="Goal",
        group=Group.WD if args.wd else Group.COMMON,
        hypotheses=hyps,
        goal=goal,
    )
    if component is not None:
        result = check_po(po, params, component.definitions)
    else:
        result = check_po(po, params)

    if result.verdict is Verdict.UNKNOWN:
        print(f"UNKNOWN ({result.reason})")
    else:
        print(result.verdict.value)
    print(f"elapsed: {result.elapsed_ms} ms")
    if result.counterexample:
        for name in sorted(result.counterexample):
            print(f"counterexample: {name} = "
                  f"{format_value(result.counterexample[name])}")

    if args.add_rule and result.verdict is Verdict.TRUE:
        rule = make_rule(po, result, module_path=component.module_path)
        final = append_rule(component, rule, workspace)
        target = f"{component.name}_wd.pmm" if final.wd else f"{component.name}.pmm"
        print(f"rule added: {final.theory_name} -> {target}")

    return {
        Verdict.TRUE: EXIT_TRUE,
        Verdict.FALSE: EXIT_FALSE,
        Verdict.UNKNOWN: EXIT_UNKNOWN,
    }[result.verdict]


def _cmd_pipeline(args) -> int:
    try:
        params = _parse_params(args.params)
    except ValueError as err:
        print(f"bad --params: {err}", file=sys.stderr)
        return EXIT_USAGE
    path = Path(args.component_file)
    try:
        component = load_component(path.parent, path.stem)
    except InterchangeError as err:
        print(f"cannot load component: {err}", file=sys.stderr)
        return EXIT_USAGE
    report = run_pipeline(component, params, emit_rules=args.emit_rules)
    if args.emit_rules:
        save_component(component, path.parent)
    sys.stdout.write(report_csv(report) if args.csv else render_report(report))
    return EXIT_TRUE


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(str(_workspace(args.workspace)))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_TRUE


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command == "eval":
        return _cmd_eval(args)
    if args.command == "pipeline":
        return _cmd_pipeline(args)
    return _cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
