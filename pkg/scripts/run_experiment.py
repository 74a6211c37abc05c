#!/usr/bin/env python3
"""Run the strategy pipeline over the bundled fixtures and show the
feedback loop: pass 1 emits rules for everything the evaluator closes,
pass 2 reruns forces-only and closes the same POs via the emitted rules.

Usage:
    python scripts/run_experiment.py [--workspace DIR] [--params FLAGS] [--csv]

The workspace defaults to a throwaway directory; pass one to keep the
emitted pmm / User_Pass / status files around for inspection.
"""

import argparse
import shutil
import sys
import tempfile
from pathlib import Path

from bevalkit.evaluator import EvalParams
from bevalkit.pipeline import render_report, report_csv, run_pipeline
from bevalkit.store import discover_components, load_component, save_component

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workspace", default=None,
                        help="directory to copy fixtures into (kept afterwards)")
    parser.add_argument("--params", default="",
                        help='flag string, e.g. "-p MAXINT 1024 -p TIME_OUT 2000"')
    parser.add_argument("--csv", action="store_true",
                        help="print CSV rows instead of tables")
    args = parser.parse_args(argv)

    params = (EvalParams.from_flag_string(args.params) if args.params.strip()
              else EvalParams())
    if args.workspace:
        workspace = Path(args.workspace)
        workspace.mkdir(parents=True, exist_ok=True)
        cleanup = None
    else:
        cleanup = tempfile.TemporaryDirectory(prefix="bevalkit-experiment-")
        workspace = Path(cleanup.name)

    for p in sorted(FIXTURES.glob("*")):
        shutil.copy(p, workspace)
    names = discover_components(workspace)

    emit = lambda text: sys.stdout.write(text + "\n")
    try:
        emit("=== pass 1: forces, then evaluator, emitting rules ===")
        firsts = {}
        for name in names:
            c = load_component(workspace, name)
            report = run_pipeline(c, params, emit_rules=True)
            save_component(c, workspace)
            firsts[name] = report
            emit(report_csv(report) if args.csv else render_report(report))

        emit("=== pass 2: forces only, reusing the emitted rules ===")
        for name in names:
            c = load_component(workspace, name)
            report = run_pipeline(c, params)
            emit(report_csv(report) if args.csv else render_report(report))
            for group in ("common", "wd"):
                before, after = getattr(firsts[name], group), getattr(report, group)
                if before.total and after.f123 != before.beval:
                    emit(f"!! {name}/{group}: rerun f123 {after.f123} "
                         f"!= first-pass beval {before.beval}")
                    return 1
        emit("feedback loop closed: every evaluator-proved PO now "
             "discharges at force 3 via its emitted rule")
        if args.workspace:
            emit(f"workspace kept at {workspace}")
    finally:
        if cleanup is not None:
            cleanup.cleanup()
    return 0


if __name__ == "__main__":
    sys.exit(main())
