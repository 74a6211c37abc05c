"""HTTP service over a workspace of component files.

The workspace is one directory of interchange files; every request reads
component state from disk, and mutations (rule appends, pipeline runs) are
serialized with one lock per component. Request/response shapes are
documented in docs/api.md; that file is the canonical schema.
"""

from __future__ import annotations

import asyncio
import threading
import time
from dataclasses import asdict, replace
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .evaluator import EvalParams, EvalResult, check_po
from .parser import ParseError
from .parser import parse_predicate
from .render import render
from .rules import append_rule, make_rule, system_clock
from .store import (
    Component,
    Group,
    InterchangeError,
    ProofObligation,
    Status,
    component_paths,
    discover_components,
    list_pos,
    load_component,
    save_component,
)
from .pipeline import render_report, run_pipeline
from .values import format_value

SERVER_TIMEOUT_CAP_MS = 60000
LOCK_WAIT_S = 2.0

_PARAM_FIELDS = {
    "minint": int,
    "maxint": int,
    "timeout_ms": int,
    "init": bool,
    "kodkod": bool,
    "smt": bool,
    "clpfd": bool,
}


class _ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.payload = {"code": code, "message": message, **extra}


def _params_from_json(obj) -> EvalParams:
    if obj is None:
        return EvalParams()
    if not isinstance(obj, dict):
        raise _ApiError(422, "invalid-params", "params must be an object")
    fields = {}
    for key, value in obj.items():
        want = _PARAM_FIELDS.get(key)
        if want is None:
            raise _ApiError(422, "invalid-params", f"unknown parameter {key!r}")
        if want is bool:
            if not isinstance(value, bool):
                raise _ApiError(422, "invalid-params", f"{key} must be a boolean")
        elif not isinstance(value, int) or isinstance(value, bool):
            raise _ApiError(422, "invalid-params", f"{key} must be an integer")
        fields[key] = value
    try:
        return EvalParams(**fields)
    except ValueError as err:
        raise _ApiError(422, "invalid-params", str(err)) from err


def _params_json(p: EvalParams) -> dict:
    out = asdict(p)
    out["flag_string"] = p.to_flag_string()
    return out


def _parse_or_422(text, where: str):
    if not isinstance(text, str):
        raise _ApiError(422, "parse-error", f"{where} must be a string", where=where)
    try:
        return parse_predicate(text)
    except ParseError as err:
        raise _ApiError(
            422, "parse-error", err.message, where=where, line=err.line, col=err.col
        )


def _result_json(result: EvalResult, params: EvalParams) -> dict:
    ce = None
    if result.counterexample is not None:
        ce = {
            name: format_value(value)
            for name, value in sorted(result.counterexample.items())
        }
    return {
        "verdict": result.verdict.value,
        "reason": result.reason,
        "elapsed_ms": result.elapsed_ms,
        "counterexample": ce,
        "params": _params_json(params),
    }


def _po_json(po: ProofObligation) -> dict:
    return {
        "name": po.name,
        "group": po.group.value,
        "status": po.status.value,
        "provenance": po.provenance,
        "hypotheses": [render(h) for h in po.hypotheses],
        "goal": render(po.goal),
    }


def create_app(workspace: str, clock: Callable[[], str] = system_clock) -> FastAPI:
    app = FastAPI(title="bevalkit", docs_url=None, redoc_url=None)
    root = Path(workspace)
    locks: dict[str, threading.Lock] = {}
    locks_guard = threading.Lock()

    def lock_for(name: str) -> threading.Lock:
        with locks_guard:
            return locks.setdefault(name, threading.Lock())

    def load_or_404(name: str) -> Component:
        if name not in discover_components(root):
            raise _ApiError(404, "unknown-component", f"no component {name!r}")
        try:
            return load_component(root, name)
        except InterchangeError as err:
            raise _ApiError(422, "bad-component-file", str(err))

    @app.exception_handler(_ApiError)
    async def _api_error(_request, exc: _ApiError):
        return JSONResponse(exc.payload, status_code=exc.status)

    async def body_json(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception:
            raise _ApiError(422, "invalid-body", "request body is not valid JSON")
        if not isinstance(body, dict):
            raise _ApiError(422, "invalid-body", "request body must be an object")
        return body

    async def run_cancellable(request: Request, fn):
        """Run fn(monotonic) in a worker; a client disconnect flips the
        injected clock past any deadline so the evaluation winds down as a
        timeout instead of running on unobserved."""
        cancel = threading.Event()

        def mono() -> float:
            t = time.monotonic()
            return t + 1e9 if cancel.is_set() else t

        task = asyncio.create_task(asyncio.to_thread(fn, mono))
        try:
            while not task.done():
                await asyncio.sleep(0.05)
                if not cancel.is_set() and await request.is_disconnected():
                    cancel.set()
            return task.result()
        finally:
            cancel.set()

    @app.get("/api/components")
    async def components():
        out = []
        for name in discover_components(root):
            c = load_or_404(name)
            out.append(
                {
                    "name": c.name,
                    "module_path": c.module_path,
                    "po_count": len(c.pos),
                    "unproved_count": len(list_pos(c, "unproved")),
                }
            )
        return {"components": out}

    @app.get("/api/components/{name}/pos")
    async def component_pos(name: str, filter: str = "all"):
        c = load_or_404(name)
        try:
            selected = list_pos(c, filter)
        except ValueError:
            raise _ApiError(
                422, "invalid-filter", "filter must be all, unproved, or proved"
            )
        return {"component": c.name, "pos": [_po_json(po) for po in selected]}

    @app.get("/api/components/{name}/pmm")
    async def component_pmm(name: str):
        c = load_or_404(name)
        return {"component": c.name, "text": c.pmm_text}

    @app.get("/api/components/{name}/wd_pmm")
    async def component_wd_pmm(name: str):
        c = load_or_404(name)
        return {"component": c.name, "text": c.wd_pmm_text}

    @app.get("/api/components/{name}/user_pass")
    async def component_user_pass(name: str):
        c = load_or_404(name)
        return {"component": c.name, "text": c.user_pass_text}

    @app.post("/api/eval")
    async def eval_endpoint(request: Request):
        body = await body_json(request)
        goal_text = body.get("goal")
        if not goal_text:
            raise _ApiError(422, "invalid-request", "goal is required")
        hyp_texts = body.get("hypotheses", [])
        if not isinstance(hyp_texts, list):
            raise _ApiError(422, "invalid-request", "hypotheses must be a list")
        component_name = body.get("component")
        add_rule = bool(body.get("add_rule", False))
        wd = bool(body.get("wd", False))
        po_name = body.get("po_name")
        if add_rule and not component_name:
            raise _ApiError(422, "invalid-request", "add_rule requires component")

        params = _params_from_json(body.get("params"))
        params = replace(
            params, timeout_ms=min(params.timeout_ms, SERVER_TIMEOUT_CAP_MS)
        )
        goal = _parse_or_422(goal_text, "goal")
        hyps = tuple(
            _parse_or_422(t, f"hypothesis[{i}]") for i, t in enumerate(hyp_texts)
        )

        defs = None
        if component_name:
            c = load_or_404(component_name)
            defs = c.definitions
            if po_name is not None and all(p.name != po_name for p in c.pos):
                raise _ApiError(404, "unknown-po", f"no proof obligation {po_name!r}")

        po = ProofObligation(
            name=po_name or "Goal",
            group=Group.WD if wd else Group.COMMON,
            hypotheses=hyps,
            goal=goal,
        )

        def work(mono):
            if defs is None:
                return check_po(po, params, monotonic=mono)
            return check_po(po, params, defs, monotonic=mono)

        result = await run_cancellable(request, work)
        payload = _result_json(result, params)

        if add_rule:
            if result.verdict.value != "TRUE":
                payload["rule"] = {
                    "added": False,
                    "message": f"rule not added: verdict is {result.verdict.value}",
                }
            else:
                lock = lock_for(component_name)
                if not lock.acquire(timeout=LOCK_WAIT_S):
                    raise _ApiError(
                        409, "conflict", f"component {component_name!r} is busy"
                    )
                try:
                    fresh = load_or_404(component_name)
                    rule = make_rule(po, result, clock, fresh.module_path)
                    final = append_rule(fresh, rule, root)
                    file_name = (
                        f"{fresh.name}_wd.pmm" if final.wd else f"{fresh.name}.pmm"
                    )
                    payload["rule"] = {
                        "added": True,
                        "theory_name": final.theory_name,
                        "file": file_name,
                    }
                finally:
                    lock.release()
        else:
            payload["rule"] = None
        return payload

    @app.post("/api/components/{name}/pipeline")
    async def pipeline_endpoint(name: str, request: Request):
        body = await body_json(request)
        params = _params_from_json(body.get("params"))
        params = replace(
            params, timeout_ms=min(params.timeout_ms, SERVER_TIMEOUT_CAP_MS)
        )
        emit_rules = bool(body.get("emit_rules", False))
        lock = lock_for(name)
        if not lock.acquire(timeout=LOCK_WAIT_S):
            raise _ApiError(409, "conflict", f"component {name!r} is busy")
        try:
            c = load_or_404(name)

            def work(mono):
                return run_pipeline(c, params, emit_rules, clock, mono)

            report = await run_cancellable(request, work)
            save_component(c, root)
        finally:
            lock.release()
        groups = {}
        for label, g in (("common", report.common), ("wd", report.wd)):
            groups[label] = {
                "total": g.total,
                "f1": g.f1,
                "f123": g.f123,
                "beval": g.beval,
                "gain": g.gain_percent,
            }
        return {
            "component": report.component,
            "groups": groups,
            "details": [
                {
                    "name": d.name,
                    "group": d.group,
                    "outcome": d.outcome,
                    "note": d.note,
                }
                for d in report.details
            ],
            "table": render_report(report),
        }

    return app
