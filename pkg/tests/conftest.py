"""Shared pytest wiring: the acceptance-criteria summary.

Tests marked ``acceptance("<criterion>")`` roll up into one PASS/FAIL line
per criterion at the end of the run, so the gate can be read at a glance.
"""

import pytest

CRITERIA = {
    "gain-cells": "gain formula reproduces the six published table cells exactly",
    "byte-card": "card over 1..8 --> {0,1} proves TRUE in under 10 s; "
                 "init expansion gates definition visibility",
    "byte-goldens": "pmm and User_Pass theory blocks render byte-for-byte",
    "oracle-equivalence": "1000 random predicates, zero oracle mismatches, "
                          "under 60 s",
    "feedback-loop": "evaluator closes POs the forces leave open; emitted "
                     "rules close them on a forces-only rerun",
    "invariant-suites": "round-trip, normalization, monotonicity, "
                        "strengthening, timeout, append-only, determinism",
}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(criterion): ties a test to an acceptance criterion"
    )
    config._acceptance_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        criterion = marker.args[0]
        item.config._acceptance_results.setdefault(criterion, []).append(
            report.passed
        )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", {})
    seen = [c for c in CRITERIA if c in results]
    if not seen:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in seen:
        verdict = "PASS" if all(results[criterion]) else "FAIL"
        terminalreporter.write_line(
            f"[PRIMARY] {criterion}: {verdict} - {CRITERIA[criterion]}"
        )
