"""AST node types for the supported ASCII B-notation fragment.

Every node is a frozen dataclass, so structural equality and hashing come
for free. Sequence extensions never appear as nodes: the parser desugars
``[e1,...,en]`` into the equivalent maplet set, which keeps equality and
evaluation from ever having to treat the two surface forms differently.
"""

from __future__ import annotations

from dataclasses import dataclass


class Expr:
    """Base class for all expression/predicate nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Int(Expr):
    value: int


@dataclass(frozen=True)
class Bool(Expr):
    value: bool


@dataclass(frozen=True)
class Ident(Expr):
    name: str


@dataclass(frozen=True)
class UnaryOp(Expr):
    op: str  # "-" | "not"
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class SetExt(Expr):
    """Set extension {e1,...,en}; the empty set is SetExt(())."""

    elements: tuple[Expr, ...]


@dataclass(frozen=True)
class Builtin(Expr):
    """Built-in unary operator written call-style: card, dom, ran, size, POW."""

    name: str
    arg: Expr


@dataclass(frozen=True)
class App(Expr):
    """Function application f(x) where f denotes a set of pairs."""

    func: Expr
    arg: Expr


@dataclass(frozen=True)
class Quantifier(Expr):
    """!x.(x : domain => body) or #x.(x : domain & body).

    kind is "!" or "#". The membership constraint on the bound variable is
    split off at parse time so evaluation can enumerate the domain directly.
    """

    kind: str
    var: str
    domain: Expr
    body: Expr


BUILTIN_NAMES = ("card", "dom", "ran", "size", "POW")

TRUE = Bool(True)
FALSE = Bool(False)


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, UnaryOp):
        return (e.operand,)
    if isinstance(e, BinOp):
        return (e.left, e.right)
    if isinstance(e, SetExt):
        return e.elements
    if isinstance(e, (Builtin,)):
        return (e.arg,)
    if isinstance(e, App):
        return (e.func, e.arg)
    if isinstance(e, Quantifier):
        return (e.domain, e.body)
    return ()


def iter_subexprs(e: Expr):
    """Yield e and all its descendants, pre-order."""
    yield e
    for c in children(e):
        yield from iter_subexprs(c)


def free_idents(e: Expr, bound: frozenset[str] = frozenset()) -> set[str]:
    """Names of identifiers occurring free in e."""
    if isinstance(e, Ident):
        return set() if e.name in bound else {e.name}
    if isinstance(e, Quantifier):
        inner = bound | {e.var}
        return free_idents(e.domain, bound) | free_idents(e.body, inner)
    out: set[str] = set()
    for c in children(e):
        out |= free_idents(c, bound)
    return out


def substitute(e: Expr, bindings: dict[str, Expr]) -> Expr:
    """Replace free occurrences of the given identifiers, respecting shadowing."""
    if not bindings:
        return e
    if isinstance(e, Ident):
        return bindings.get(e.name, e)
    if isinstance(e, UnaryOp):
        return UnaryOp(e.op, substitute(e.operand, bindings))
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, bindings), substitute(e.right, bindings))
    if isinstance(e, SetExt):
        return SetExt(tuple(substitute(x, bindings) for x in e.elements))
    if isinstance(e, Builtin):
        return Builtin(e.name, substitute(e.arg, bindings))
    if isinstance(e, App):
        return App(substitute(e.func, bindings), substitute(e.arg, bindings))
    if isinstance(e, Quantifier):
        inner = {k: v for k, v in bindings.items() if k != e.var}
        return Quantifier(e.kind, e.var, substitute(e.domain, bindings),
                          substitute(e.body, inner))
    return e


def conjuncts(e: Expr) -> list[Expr]:
    """Flatten the left spine of a conjunction: a & b & c -> [a, b, c]."""
    if isinstance(e, BinOp) and e.op == "&":
        return conjuncts(e.left) + [e.right]
    return [e]


def conjoin(parts: list[Expr]) -> Expr:
    """Left-associated conjunction of parts; requires at least one."""
    out = parts[0]
    for p in parts[1:]:
        out = BinOp("&", out, p)
    return out


class DefinitionError(Exception):
    """Duplicate name or cyclic definition in a definition table."""


class DefinitionTable:
    """Ordered map from identifier to parameterless macro body."""

    def __init__(self) -> None:
        self._defs: dict[str, Expr] = {}

    def add(self, name: str, body: Expr) -> None:
        if name in self._defs:
            raise DefinitionError(f"duplicate definition of {name!r}")
        self._defs[name] = body

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def __getitem__(self, name: str) -> Expr:
        return self._defs[name]

    def __len__(self) -> int:
        return len(self._defs)

    def __iter__(self):
        return iter(self._defs)

    def items(self):
        return self._defs.items()

    def names(self):
        return list(self._defs)

    def check_acyclic(self) -> None:
        """Depth-first cycle check over definition references."""
        VISITING, DONE = 1, 2
        state: dict[str, int] = {}

        def visit(name: str, trail: list[str]) -> None:
            mark = state.get(name)
            if mark == DONE:
                return
            if mark == VISITING:
                cycle = " -> ".join(trail + [name])
                raise DefinitionError(f"cyclic definition: {cycle}")
            state[name] = VISITING
            for ref in sorted(free_idents(self._defs[name])):
                if ref in self._defs:
                    visit(ref, trail + [name])
            state[name] = DONE

        for name in self._defs:
            visit(name, [])


EMPTY_DEFINITIONS = DefinitionTable()
