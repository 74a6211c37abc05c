"""Strategy pipeline: F1, then F1;F2;F3, then the evaluator, per component.

Counts are split into the common and well-definedness groups. The gain
column is the percentage of POs closed exclusively by the evaluator stage,
floor-rounded. Statuses only ever move away from UNPROVED here; a PO this
run cannot close keeps whatever status an earlier run gave it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .evaluator import EvalParams, Verdict, check_po
from .prover import FORCE_1, FORCE_3, prove
from .rules import (
    append_rule,
    append_user_pass_entry,
    make_rule,
    parse_pmm,
    system_clock,
)
from .store import Component, Group, Status


def gain(total: int, baseline_proved: int, with_beval_proved: int) -> int:
    """Percentage of POs proved exclusively by the evaluator, floored."""
    if not (0 <= baseline_proved <= with_beval_proved <= total):
        raise ValueError("need 0 <= baseline <= with_beval <= total")
    if total == 0:
        return 0
    return (100 * (with_beval_proved - baseline_proved)) // total


@dataclass(frozen=True)
class GroupCounts:
    total: int
    f1: int
    f123: int
    beval: int

    def __post_init__(self) -> None:
        if not (0 <= self.f1 <= self.f123 <= self.beval <= self.total):
            raise ValueError("strategy counts must be monotone")

    @property
    def gain_percent(self) -> int:
        return gain(self.total, self.f123, self.beval)


@dataclass(frozen=True)
class PoDetail:
    name: str
    group: str
    outcome: str  # proved-f1 | proved-f2 | proved-f3 | proved-beval | open
    note: str = ""


@dataclass(frozen=True)
class PipelineReport:
    component: str
    common: GroupCounts
    wd: GroupCounts
    details: tuple[PoDetail, ...]


def run_pipeline(
    c: Component,
    params: EvalParams = EvalParams(),
    emit_rules: bool = False,
    clock: Callable[[], str] = system_clock,
    monotonic: Callable[[], float] = time.monotonic,
) -> PipelineReport:
    """Attempt every PO at force 1, the survivors at forces 2-3 with the
    component's current rules, and the remainder with the evaluator. TRUE
    verdicts become PROVED_BEVAL and, with emit_rules, a pmm rule plus a
    User_Pass entry."""
    rules = parse_pmm(c.pmm_text) + parse_pmm(c.wd_pmm_text, wd=True)
    outcomes: dict[str, PoDetail] = {}
    counts = {Group.COMMON: [0, 0, 0, 0], Group.WD: [0, 0, 0, 0]}
    survivors = []
    for po in c.pos:
        counts[po.group][0] += 1
        result = prove(po, FORCE_1)
        if result.proved:
            counts[po.group][1] += 1
            counts[po.group][2] += 1
            counts[po.group][3] += 1
            set_proved = Status.PROVED_F1
            po.status, po.provenance = set_proved, None
            outcomes[po.name] = PoDetail(po.name, po.group.value, "proved-f1")
        else:
            survivors.append(po)

    still_open = []
    for po in survivors:
        result = prove(po, FORCE_3, rules)
        if result.proved:
            counts[po.group][2] += 1
            counts[po.group][3] += 1
            status = Status.PROVED_F2 if result.force == 2 else Status.PROVED_F3
            po.status, po.provenance = status, result.rule_name
            outcome = "proved-f2" if result.force == 2 else "proved-f3"
            note = f"rule {result.rule_name}" if result.rule_name else ""
            outcomes[po.name] = PoDetail(po.name, po.group.value, outcome, note)
        else:
            still_open.append(po)

    for po in still_open:
        result = check_po(po, params, c.definitions, monotonic)
        if result.verdict is Verdict.TRUE:
            counts[po.group][3] += 1
            rule_note = ""
            emitted_name = None
            if emit_rules:
                rule = make_rule(po, result, clock, c.module_path)
                final = append_rule(c, rule)
                append_user_pass_entry(c, po.name, final.theory_name)
                emitted_name = final.theory_name
                rule_note = f"rule {final.theory_name} emitted"
            po.status, po.provenance = Status.PROVED_BEVAL, emitted_name
            outcomes[po.name] = PoDetail(
                po.name, po.group.value, "proved-beval", rule_note
            )
        else:
            note = result.verdict.value
            if result.reason:
                note += f": {result.reason}"
            outcomes[po.name] = PoDetail(po.name, po.group.value, "open", note)

    details = tuple(outcomes[po.name] for po in c.pos)
    return PipelineReport(
        component=c.name,
        common=GroupCounts(*counts[Group.COMMON]),
        wd=GroupCounts(*counts[Group.WD]),
        details=details,
    )


_HEADERS = ("Component", "Group", "T. POs", "F1", "F1;F2;F3", "F1;F2;F3;BEval", "Gain")


def _row_cells(name: str, group: str, g: GroupCounts) -> tuple[str, ...]:
    """A count cell prints as - when it equals the previous strategy's
    count; F1's previous is zero."""
    def cell(value: int, previous: int) -> str:
        return "-" if value == previous else str(value)

    return (
        name,
        group,
        str(g.total),
        cell(g.f1, 0),
        cell(g.f123, g.f1),
        cell(g.beval, g.f123),
        f"{g.gain_percent}%",
    )


def render_report(r: PipelineReport) -> str:
    rows = [
        _HEADERS,
        _row_cells(r.component, "common", r.common),
        _row_cells(r.component, "wd", r.wd),
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(len(_HEADERS))]
    out = []
    for row in rows:
        first = row[0].ljust(widths[0])
        rest = "  ".join(cell.rjust(widths[i + 1]) for i, cell in enumerate(row[1:]))
        out.append(f"{first}  {rest}".rstrip())
    if r.details:
        out.append("")
        out.append("Details:")
        for d in r.details:
            line = f'  [{d.group}] "{d.name}": {d.outcome}'
            if d.note:
                line += f" ({d.note})"
            out.append(line)
    return "\n".join(out) + "\n"


def report_csv(r: PipelineReport) -> str:
    lines = ["component,group,total,f1,f123,f123_beval,gain"]
    for group, g in (("common", r.common), ("wd", r.wd)):
        lines.append(
            f"{r.component},{group},{g.total},{g.f1},{g.f123},{g.beval},{g.gain_percent}"
        )
    return "\n".join(lines) + "\n"
