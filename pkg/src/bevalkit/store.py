"""Proof-obligation store: interchange format, per-component files, status.

One component lives in a directory as ``<name>.pos`` (the interchange file)
plus sidecars ``<name>.pmm``, ``<name>_wd.pmm``, ``<name>.pass``,
``<name>.status``, and ``<name>.audit``. The interchange format is
line-oriented:

    COMPONENT <name> PATH <module path>
    DEF <NAME> == <expression>
    PO "<name>" GROUP <common|wd>
    HYP <predicate>
    GOAL <predicate>
    END

Lines starting with // are comments. Save of an imported component is a
fixpoint: importing the saved text and saving again is byte-identical.
"""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from .ast import DefinitionTable, Expr
from .parser import ParseError, parse_predicate
from .render import render


class Group(Enum):
    COMMON = "common"
    WD = "wd"


class Status(Enum):
    UNPROVED = "UNPROVED"
    PROVED_F1 = "PROVED_F1"
    PROVED_F2 = "PROVED_F2"
    PROVED_F3 = "PROVED_F3"
    PROVED_BEVAL = "PROVED_BEVAL"


PROVED_STATUSES = frozenset(s for s in Status if s is not Status.UNPROVED)


class InterchangeError(Exception):
    def __init__(self, message: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line
        self.reason = message


@dataclass
class ProofObligation:
    name: str
    group: Group
    hypotheses: tuple[Expr, ...]
    goal: Expr
    status: Status = Status.UNPROVED
    provenance: Optional[str] = None


@dataclass
class Component:
    name: str
    module_path: str
    definitions: DefinitionTable
    pos: list[ProofObligation]
    pmm_text: str = ""
    wd_pmm_text: str = ""
    user_pass_text: str = ""
    audit: list[str] = field(default_factory=list)

    def find_po(self, name: str) -> ProofObligation:
        for po in self.pos:
            if po.name == name:
                return po
        raise InterchangeError(f"unknown proof obligation {name!r}")


_COMPONENT_RE = re.compile(r"^COMPONENT\s+(\S+)\s+PATH\s+(.*\S)\s*$")
_DEF_RE = re.compile(r"^DEF\s+([A-Za-z_][A-Za-z0-9_]*)\s*==\s*(.+)$")
_PO_RE = re.compile(r'^PO\s+"([^"]+)"\s+GROUP\s+(common|wd)\s*$')
_STATUS_RE = re.compile(r'^"([^"]+)"\s+(\S+)(?:\s+(\S+))?\s*$')


def _parse_line_predicate(text: str, lineno: int) -> Expr:
    try:
        return parse_predicate(text)
    except ParseError as err:
        raise InterchangeError(f"cannot parse {text!r}: {err}", lineno) from err


def import_component(text: str) -> Component:
    """Parse an interchange file into a Component with all POs UNPROVED."""
    name: Optional[str] = None
    module_path = ""
    defs = DefinitionTable()
    pos: list[ProofObligation] = []
    current: Optional[dict] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        if current is None:
            if line.startswith("COMPONENT"):
                if name is not None:
                    raise InterchangeError("duplicate COMPONENT line", lineno)
                m = _COMPONENT_RE.match(line)
                if not m:
                    raise InterchangeError("malformed COMPONENT line", lineno)
                name, module_path = m.group(1), m.group(2)
                continue
            if line.startswith("DEF"):
                m = _DEF_RE.match(line)
                if not m:
                    raise InterchangeError("malformed DEF line", lineno)
                body = _parse_line_predicate(m.group(2), lineno)
                try:
                    defs.add(m.group(1), body)
                except Exception as err:
                    raise InterchangeError(str(err), lineno) from err
                continue
            if line.startswith("PO"):
                m = _PO_RE.match(line)
                if not m:
                    raise InterchangeError("malformed PO header", lineno)
                po_name = m.group(1)
                if any(p.name == po_name for p in pos):
                    raise InterchangeError(
                        f"duplicate proof obligation name {po_name!r}", lineno
                    )
                current = {"name": po_name, "group": Group(m.group(2)),
                           "hyps": [], "goal": None}
                continue
            raise InterchangeError(f"unexpected line {line!r}", lineno)
        # inside a PO block
        if line.startswith("HYP"):
            if current["goal"] is not None:
                raise InterchangeError("HYP after GOAL", lineno)
            current["hyps"].append(_parse_line_predicate(line[3:].strip(), lineno))
            continue
        if line.startswith("GOAL"):
            if current["goal"] is not None:
                raise InterchangeError("duplicate GOAL", lineno)
            current["goal"] = _parse_line_predicate(line[4:].strip(), lineno)
            continue
        if line == "END":
            if current["goal"] is None:
                raise InterchangeError(
                    f"proof obligation {current['name']!r} has no GOAL", lineno
                )
            pos.append(
                ProofObligation(
                    current["name"], current["group"],
                    tuple(current["hyps"]), current["goal"],
                )
            )
            current = None
            continue
        raise InterchangeError(f"unexpected line {line!r} inside PO block", lineno)
    if current is not None:
        raise InterchangeError(f"proof obligation {current['name']!r} not closed by END")
    if name is None:
        raise InterchangeError("missing COMPONENT line")
    try:
        defs.check_acyclic()
    except Exception as err:
        raise InterchangeError(str(err)) from err
    return Component(name, module_path, defs, pos)


def render_component(c: Component) -> str:
    """Canonical interchange text; import(render(c)) reproduces c's POs."""
    lines = [f"COMPONENT {c.name} PATH {c.module_path}"]
    for def_name in c.definitions:
        lines.append(f"DEF {def_name} == {render(c.definitions[def_name])}")
    for po in c.pos:
        lines.append("")
        lines.append(f'PO "{po.name}" GROUP {po.group.value}')
        for h in po.hypotheses:
            lines.append(f"HYP {render(h)}")
        lines.append(f"GOAL {render(po.goal)}")
        lines.append("END")
    return "\n".join(lines) + "\n"


def render_status(c: Component) -> str:
    lines = []
    for po in c.pos:
        entry = f'"{po.name}" {po.status.value}'
        if po.provenance:
            entry += f" {po.provenance}"
        lines.append(entry)
    return "\n".join(lines) + ("\n" if lines else "")


def _apply_status_text(c: Component, text: str) -> None:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        m = _STATUS_RE.match(line)
        if not m:
            raise InterchangeError("malformed status line", lineno)
        po = c.find_po(m.group(1))
        try:
            po.status = Status(m.group(2))
        except ValueError as err:
            raise InterchangeError(f"unknown status {m.group(2)!r}", lineno) from err
        po.provenance = m.group(3)


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def component_paths(directory: Union[str, Path], name: str) -> dict[str, Path]:
    d = Path(directory)
    return {
        "pos": d / f"{name}.pos",
        "pmm": d / f"{name}.pmm",
        "wd_pmm": d / f"{name}_wd.pmm",
        "user_pass": d / f"{name}.pass",
        "status": d / f"{name}.status",
        "audit": d / f"{name}.audit",
    }


def save_component(c: Component, directory: Union[str, Path]) -> None:
    """Write all component files atomically (each file all-or-nothing)."""
    paths = component_paths(directory, c.name)
    paths["pos"].parent.mkdir(parents=True, exist_ok=True)
    _write_atomic(paths["pos"], render_component(c))
    _write_atomic(paths["pmm"], c.pmm_text)
    _write_atomic(paths["wd_pmm"], c.wd_pmm_text)
    _write_atomic(paths["user_pass"], c.user_pass_text)
    _write_atomic(paths["status"], render_status(c))
    audit_text = "\n".join(c.audit) + ("\n" if c.audit else "")
    _write_atomic(paths["audit"], audit_text)


def load_component(directory: Union[str, Path], name: str) -> Component:
    """Read ``<name>.pos`` plus whatever sidecars exist."""
    paths = component_paths(directory, name)
    if not paths["pos"].exists():
        raise InterchangeError(f"no component file {paths['pos']}")
    c = import_component(paths["pos"].read_text(encoding="utf-8"))
    if c.name != name:
        raise InterchangeError(
            f"component header names {c.name!r} but the file is {name!r}"
        )
    if paths["pmm"].exists():
        c.pmm_text = paths["pmm"].read_text(encoding="utf-8")
    if paths["wd_pmm"].exists():
        c.wd_pmm_text = paths["wd_pmm"].read_text(encoding="utf-8")
    if paths["user_pass"].exists():
        c.user_pass_text = paths["user_pass"].read_text(encoding="utf-8")
    if paths["status"].exists():
        _apply_status_text(c, paths["status"].read_text(encoding="utf-8"))
    if paths["audit"].exists():
        c.audit = paths["audit"].read_text(encoding="utf-8").splitlines()
    return c


def list_pos(c: Component, filter: str = "all") -> list[ProofObligation]:
    """File-order PO listing; filter is all | unproved | proved."""
    key = filter.lower() if isinstance(filter, str) else filter
    if key == "all":
        return list(c.pos)
    if key == "unproved":
        return [po for po in c.pos if po.status is Status.UNPROVED]
    if key == "proved":
        return [po for po in c.pos if po.status is not Status.UNPROVED]
    raise ValueError(f"unknown filter {filter!r}")


def set_status(
    c: Component,
    po_name: str,
    status: Status,
    provenance: Optional[str] = None,
) -> Component:
    po = c.find_po(po_name)
    po.status = status
    po.provenance = provenance
    return c


def reset_status(c: Component, po_name: str, note: str = "") -> Component:
    """Regress a PO to UNPROVED; the only sanctioned path back, and it
    leaves an audit record."""
    po = c.find_po(po_name)
    entry = f'RESET "{po_name}" from {po.status.value}'
    if note:
        entry += f" ({note})"
    c.audit.append(entry)
    po.status = Status.UNPROVED
    po.provenance = None
    return c


def discover_components(directory: Union[str, Path]) -> list[str]:
    d = Path(directory)
    if not d.is_dir():
        return []
    return sorted(p.stem for p in d.glob("*.pos"))
