"""Ground values: integers, booleans, ordered pairs, finite sets.

Booleans get their own wrapper type because Python identifies bool with int
(1 == True), which would silently merge {0,1} with {FALSE,TRUE} inside
frozensets. Functions, relations, and sequences are frozensets of Pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .ast import BinOp, Bool, Expr, Int, SetExt


@dataclass(frozen=True)
class BBool:
    value: bool


B_TRUE = BBool(True)
B_FALSE = BBool(False)


@dataclass(frozen=True)
class Pair:
    left: "Value"
    right: "Value"


Value = Union[int, BBool, Pair, frozenset]


def value_key(v: Value):
    """Total order on values; used for deterministic enumeration and printing."""
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, BBool):
        return (1, 1 if v.value else 0)
    if isinstance(v, Pair):
        return (2, value_key(v.left), value_key(v.right))
    if isinstance(v, frozenset):
        return (3, len(v), tuple(sorted(value_key(x) for x in v)))
    raise TypeError(f"not a value: {v!r}")


def sorted_values(s: frozenset) -> list[Value]:
    return sorted(s, key=value_key)


def is_pair_set(s: frozenset) -> bool:
    return all(isinstance(x, Pair) for x in s)


def is_function(s: frozenset) -> bool:
    """Pair set with no two pairs sharing a left component."""
    if not is_pair_set(s):
        return False
    lefts = [p.left for p in s]
    return len(lefts) == len(frozenset(lefts))


def value_to_expr(v: Value) -> Expr:
    """Lift a value back into AST form (used for counterexample substitution)."""
    if isinstance(v, int):
        return Int(v)
    if isinstance(v, BBool):
        return Bool(v.value)
    if isinstance(v, Pair):
        return BinOp("|->", value_to_expr(v.left), value_to_expr(v.right))
    if isinstance(v, frozenset):
        return SetExt(tuple(value_to_expr(x) for x in sorted_values(v)))
    raise TypeError(f"not a value: {v!r}")


def format_value(v: Value) -> str:
    from .render import render

    return render(value_to_expr(v))
