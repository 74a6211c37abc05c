"""Canonical printer for AST nodes.

render is the inverse of parse_predicate up to structural equality:
parse_predicate(render(e)) == e for every tree the parser can produce.
Parenthesization is precedence-driven, with one deliberate extra: operands
of comparison/membership operators are parenthesized whenever their head is
a set/relation operator or an interval, which is the form rule files use
(e.g. `BYTE = (1..8 --> {0,1})`).
"""

from __future__ import annotations

from .ast import (
    App, BinOp, Bool, Builtin, Expr, Ident, Int, Quantifier, SetExt, UnaryOp,
)
from .parser import COMPARISON_OPS, INFIX, NOT_BP, UNARY_MINUS_BP

# Operand context for comparison operators; sits above the set/relation (60)
# and interval (70) tiers so those render parenthesized.
_CMP_OPERAND_CTX = 75

_TIGHT_OPS = frozenset({"..", "|->"})

_ATOM = 999


def _prec(e: Expr) -> int:
    if isinstance(e, Int):
        return _ATOM if e.value >= 0 else UNARY_MINUS_BP
    if isinstance(e, UnaryOp):
        # not(...) prints call-style but still binds at NOT_BP: as an App
        # target or comparison operand it needs the extra parens.
        return UNARY_MINUS_BP if e.op == "-" else NOT_BP
    if isinstance(e, BinOp):
        return INFIX[e.op][0]
    return _ATOM


def render(e: Expr) -> str:
    return _render(e, 0)


def render_operand(e: Expr, ctx: int) -> str:
    """Render e as an operand of an operator context; used by rule emission."""
    return _render(e, ctx)


def _render(e: Expr, ctx: int) -> str:
    text = _render_raw(e)
    if _prec(e) < ctx:
        return f"({text})"
    return text


def _render_raw(e: Expr) -> str:
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, Bool):
        return "TRUE" if e.value else "FALSE"
    if isinstance(e, Ident):
        return e.name
    if isinstance(e, SetExt):
        return "{" + ",".join(_render(x, 0) for x in e.elements) + "}"
    if isinstance(e, Builtin):
        return f"{e.name}({_render(e.arg, 0)})"
    if isinstance(e, App):
        return f"{_render(e.func, 110)}({_render(e.arg, 0)})"
    if isinstance(e, UnaryOp):
        if e.op == "not":
            return f"not({_render(e.operand, 0)})"
        return f"-{_render(e.operand, UNARY_MINUS_BP + 1)}"
    if isinstance(e, Quantifier):
        dom = _render(e.domain, _CMP_OPERAND_CTX)
        if e.kind == "!":
            body = _render(e.body, INFIX["=>"][0])
            return f"!{e.var}.({e.var} : {dom} => {body})"
        body = _render(e.body, INFIX["&"][0] + 1)
        return f"#{e.var}.({e.var} : {dom} & {body})"
    if isinstance(e, BinOp):
        bp, assoc = INFIX[e.op]
        if e.op in COMPARISON_OPS:
            lctx = rctx = _CMP_OPERAND_CTX
        elif assoc == "left":
            lctx, rctx = bp, bp + 1
        else:
            lctx, rctx = bp + 1, bp
        left = _render(e.left, lctx)
        right = _render(e.right, rctx)
        if e.op in _TIGHT_OPS:
            return f"{left}{e.op}{right}"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an Expr: {e!r}")
