"""Proof-rule emission: pmm / wd_pmm THEORY blocks and User_Pass theories.

The rendered formats are byte-exact contracts consumed by the prover side:
note the trailing space after "IS" on a rule header, the double space in
"added  in", the tab-space tail on the comment close, and the three spaces
after "=>" in the rule body. Do not "clean up" any of it.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from .ast import BinOp, Expr, conjoin, conjuncts
from .evaluator import EvalResult, Verdict
from .parser import ParseError, parse_predicate
from .render import render, render_operand
from .store import Component, Group, ProofObligation, component_paths, _write_atomic

TIMESTAMP_FORMAT = "%a %b %d %H:%M:%S %Z %Y"


def system_clock() -> str:
    return time.strftime(TIMESTAMP_FORMAT, time.localtime())


def fixed_clock(text: str) -> Callable[[], str]:
    return lambda: text


class RuleError(Exception):
    pass


class PmmFormatError(Exception):
    def __init__(self, message: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


@dataclass(frozen=True)
class Rule:
    theory_name: str
    po_name: str
    description: str
    timestamp: str
    elapsed_ms: int
    module_path: str
    guards: tuple[Expr, ...]
    conclusion: Expr
    wd: bool


@dataclass(frozen=True)
class UserPass:
    entries: tuple[tuple[str, str], ...]


def sanitize_theory_name(po_name: str) -> str:
    return "RulesProB" + re.sub(r"[^A-Za-z0-9]", "_", po_name)


def make_rule(
    po: ProofObligation,
    result: EvalResult,
    clock: Callable[[], str] = system_clock,
    module_path: str = "",
    description: Optional[str] = None,
) -> Rule:
    """Build a rule from a TRUE evaluation. Refuses anything else: rules are
    axioms for the prover, so the soundness gate lives here."""
    if result.verdict is not Verdict.TRUE:
        raise RuleError(
            f"refusing to make a rule from a {result.verdict.value} verdict"
        )
    if description is None:
        description = f"Check assertion ({render(po.goal)}) deduction"
    return Rule(
        theory_name=sanitize_theory_name(po.name),
        po_name=po.name,
        description=description,
        timestamp=clock(),
        elapsed_ms=result.elapsed_ms,
        module_path=module_path,
        guards=tuple(po.hypotheses),
        conclusion=po.goal,
        wd=po.group is Group.WD,
    )


def _render_guard(g: Expr) -> str:
    # Tighter-than-& context so or/=>/<=> guards and conjunction guards
    # come out parenthesized and the joined body reads back unambiguously.
    return render_operand(g, 41)


def render_rule(r: Rule) -> str:
    if r.guards:
        body = " & ".join(_render_guard(g) for g in r.guards)
        body_line = f"  {body} =>   ({render(r.conclusion)})"
    else:
        body_line = f"  ({render(r.conclusion)})"
    lines = [
        f"THEORY {r.theory_name} IS ",
        f"  /* Expression from ({r.po_name}), it was added  in {r.timestamp}",
        f"  evaluated with ProB in {r.elapsed_ms} milliseconds."
        f" Module Path:{r.module_path} */\t ",
        f"  \"`{r.description}'\"",
        body_line,
        "END",
    ]
    return "\n".join(lines) + "\n"


_THEORY_RE = re.compile(r"^THEORY\s+(\S+)\s+IS\s*$")
_ADDED_RE = re.compile(r"^/\* Expression from \((.*)\), it was added  in (.*)$")
_EVAL_RE = re.compile(
    r"^evaluated with ProB in (\d+) milliseconds\. Module Path:(.*) \*/$"
)
_DESC_RE = re.compile(r"^\"`(.*)'\"$")


def parse_pmm(text: str, wd: bool = False) -> list[Rule]:
    """Parse a pmm file back into rules. Guards are recovered by splitting
    the antecedent on top-level conjunction, so a rule whose single guard was
    itself a conjunction reads back as several guards; the conjoined guard
    predicate is unchanged either way."""
    rules: list[Rule] = []
    lines = text.splitlines()
    i = 0
    n = len(lines)
    while i < n:
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        m = _THEORY_RE.match(line)
        if not m:
            raise PmmFormatError(f"expected THEORY header, got {line!r}", i + 1)
        theory_name = m.group(1)
        if i + 4 >= n:
            raise PmmFormatError("truncated THEORY block", i + 1)
        m_added = _ADDED_RE.match(lines[i + 1].strip())
        if not m_added:
            raise PmmFormatError("malformed rule comment (first line)", i + 2)
        po_name, timestamp = m_added.group(1), m_added.group(2)
        m_eval = _EVAL_RE.match(lines[i + 2].strip())
        if not m_eval:
            raise PmmFormatError("malformed rule comment (second line)", i + 3)
        elapsed_ms, module_path = int(m_eval.group(1)), m_eval.group(2)
        m_desc = _DESC_RE.match(lines[i + 3].strip())
        if m_desc is None:
            raise PmmFormatError("malformed description line", i + 4)
        description = m_desc.group(1)
        body_lines = []
        j = i + 4
        while j < n and lines[j].strip() != "END":
            body_lines.append(lines[j].strip())
            j += 1
        if j >= n:
            raise PmmFormatError(f"THEORY {theory_name} not closed by END", i + 1)
        body_text = " ".join(body_lines).strip()
        try:
            body = parse_predicate(body_text)
        except ParseError as err:
            raise PmmFormatError(f"cannot parse rule body: {err}", i + 5) from err
        if isinstance(body, BinOp) and body.op == "=>":
            guards = tuple(conjuncts(body.left))
            conclusion = body.right
        else:
            guards = ()
            conclusion = body
        rules.append(
            Rule(
                theory_name, po_name, description, timestamp,
                elapsed_ms, module_path, guards, conclusion, wd,
            )
        )
        i = j + 1
    return rules


def render_user_pass(p: UserPass) -> str:
    if not p.entries:
        raise RuleError("a User_Pass needs at least one entry")
    lines = ["THEORY User_Pass IS"]
    for idx, (selector, rule_name) in enumerate(p.entries):
        entry = f"        Operation({selector}) & mp(Tac({rule_name}))"
        if idx < len(p.entries) - 1:
            entry += ";"
        lines.append(entry)
    lines.append("END")
    return "\n".join(lines) + "\n"


_ENTRY_RE = re.compile(r"^Operation\(([^)]*)\) & mp\(Tac\(([^)]*)\)\)$")


def parse_user_pass(text: str) -> UserPass:
    """Inverse of render_user_pass; empty text gives an empty entry list."""
    stripped = text.strip()
    if not stripped:
        return UserPass(())
    lines = stripped.splitlines()
    if lines[0].strip() != "THEORY User_Pass IS":
        raise PmmFormatError("expected THEORY User_Pass IS", 1)
    if lines[-1].strip() != "END":
        raise PmmFormatError("User_Pass not closed by END", len(lines))
    body = " ".join(s.strip() for s in lines[1:-1])
    entries = []
    for lineno, part in enumerate(body.split(";"), start=2):
        part = part.strip()
        if not part:
            continue
        m = _ENTRY_RE.match(part)
        if not m:
            raise PmmFormatError(f"malformed User_Pass entry {part!r}", lineno)
        entries.append((m.group(1), m.group(2)))
    return UserPass(tuple(entries))


def _existing_theory_names(text: str) -> frozenset:
    return frozenset(r.theory_name for r in parse_pmm(text))


def append_rule(
    c: Component,
    r: Rule,
    directory: Optional[Union[str, Path]] = None,
) -> Rule:
    """Append to pmm_text or wd_pmm_text per r.wd, suffixing the theory name
    on collision. Existing text is never modified, only extended; with a
    directory the target file is rewritten all-or-nothing. Returns the rule
    as appended (its theory_name may carry a collision suffix)."""
    old = c.wd_pmm_text if r.wd else c.pmm_text
    taken = _existing_theory_names(old)
    name = r.theory_name
    k = 2
    while name in taken:
        name = f"{r.theory_name}_{k}"
        k += 1
    final = replace(r, theory_name=name)
    new = old + ("\n" if old else "") + render_rule(final)
    assert new.startswith(old)
    if r.wd:
        c.wd_pmm_text = new
    else:
        c.pmm_text = new
    if directory is not None:
        paths = component_paths(directory, c.name)
        _write_atomic(paths["wd_pmm" if r.wd else "pmm"], new)
    return final


def append_user_pass_entry(
    c: Component,
    selector: str,
    rule_name: str,
    directory: Optional[Union[str, Path]] = None,
) -> UserPass:
    current = parse_user_pass(c.user_pass_text)
    updated = UserPass(current.entries + ((selector, rule_name),))
    c.user_pass_text = render_user_pass(updated)
    if directory is not None:
        paths = component_paths(directory, c.name)
        _write_atomic(paths["user_pass"], c.user_pass_text)
    return updated
