"""Lexer and parser for the ASCII B-notation fragment.

The grammar and precedence table are documented in docs/grammar.md. Parsing
is precedence-climbing over a hand-rolled maximal-munch lexer, so every
error carries the line/column of the offending token.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    BinOp, Bool, Builtin, BUILTIN_NAMES, App, conjoin, conjuncts,
    DefinitionError, DefinitionTable, Expr, Ident, Int, Quantifier, SetExt,
    UnaryOp,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# Binding powers, higher = tighter. Assoc is "left" or "right".
INFIX: dict[str, tuple[int, str]] = {
    "<=>": (10, "left"),
    "=>": (20, "right"),
    "or": (30, "left"),
    "&": (40, "left"),
    "=": (50, "left"), "/=": (50, "left"),
    "<": (50, "left"), "<=": (50, "left"), ">": (50, "left"), ">=": (50, "left"),
    ":": (50, "left"), "/:": (50, "left"), "<:": (50, "left"),
    "\\/": (60, "left"), "/\\": (60, "left"),
    "<->": (60, "left"), "-->": (60, "left"), "+->": (60, "left"), "|->": (60, "left"),
    "..": (70, "left"),
    "+": (80, "left"), "-": (80, "left"),
    "*": (90, "left"), "/": (90, "left"), "mod": (90, "left"),
    "**": (100, "right"),
}

COMPARISON_OPS = frozenset({"=", "/=", "<", "<=", ">", ">=", ":", "/:", "<:"})

NOT_BP = 45        # between comparisons and &
UNARY_MINUS_BP = 95  # between * and **
APP_BP = 110       # postfix f(x), tightest

# Maximal munch: longer symbols first.
_SYMBOLS = [
    "<=>", "-->", "+->", "<->", "|->",
    "=>", "<=", ">=", "/=", "/:", "<:", "\\/", "/\\", "..", "**", "==",
    "=", "<", ">", "+", "-", "*", "/", ":", "&",
    ",", "(", ")", "{", "}", "[", "]", ".", "!", "#",
]

_WORD_OPS = frozenset({"not", "or", "mod"})


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "ident" | "bool" | "builtin" | "op" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str, first_line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    line, col = first_line, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("int", text[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            word = text[start:i]
            if word in ("TRUE", "FALSE"):
                kind = "bool"
            elif word in BUILTIN_NAMES:
                kind = "builtin"
            elif word in _WORD_OPS:
                kind = "op"
            else:
                kind = "ident"
            tokens.append(Token(kind, word, line, col))
            col += i - start
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("op", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.next()
        raise self.error(f"expected {text!r}", tok)

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        shown = tok.text if tok.kind != "eof" else "end of input"
        return ParseError(f"{message}, found {shown!r}", tok.line, tok.col)

    def parse_expr(self, min_bp: int = 0) -> Expr:
        left = self.parse_prefix()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "(":
                if APP_BP < min_bp:
                    break
                self.next()
                arg = self.parse_expr(0)
                self.expect(")")
                left = App(left, arg)
                continue
            if tok.kind != "op" or tok.text not in INFIX:
                break
            bp, assoc = INFIX[tok.text]
            if bp < min_bp:
                break
            self.next()
            right = self.parse_expr(bp + 1 if assoc == "left" else bp)
            left = BinOp(tok.text, left, right)
        return left

    def parse_prefix(self) -> Expr:
        tok = self.next()
        if tok.kind == "int":
            return Int(int(tok.text))
        if tok.kind == "bool":
            return Bool(tok.text == "TRUE")
        if tok.kind == "ident":
            return Ident(tok.text)
        if tok.kind == "builtin":
            self.expect("(")
            arg = self.parse_expr(0)
            self.expect(")")
            return Builtin(tok.text, arg)
        if tok.kind == "op":
            if tok.text == "(":
                inner = self.parse_expr(0)
                self.expect(")")
                return inner
            if tok.text == "-":
                operand = self.parse_expr(UNARY_MINUS_BP + 1)
                if isinstance(operand, Int):
                    return Int(-operand.value)
                return UnaryOp("-", operand)
            if tok.text == "not":
                return UnaryOp("not", self.parse_expr(NOT_BP + 1))
            if tok.text == "{":
                return SetExt(tuple(self.parse_elements("}")))
            if tok.text == "[":
                elements = self.parse_elements("]")
                maplets = tuple(BinOp("|->", Int(i), e)
                                for i, e in enumerate(elements, start=1))
                return SetExt(maplets)
            if tok.text in ("!", "#"):
                return self.parse_quantifier(tok)
        raise self.error("expected an expression", tok)

    def parse_elements(self, closing: str) -> list[Expr]:
        elements: list[Expr] = []
        if self.peek().kind == "op" and self.peek().text == closing:
            self.next()
            return elements
        while True:
            elements.append(self.parse_expr(0))
            tok = self.peek()
            if tok.kind == "op" and tok.text == ",":
                self.next()
                continue
            self.expect(closing)
            return elements

    def parse_quantifier(self, tok: Token) -> Expr:
        var_tok = self.peek()
        if var_tok.kind != "ident":
            raise self.error("expected bound identifier after quantifier", var_tok)
        self.next()
        self.expect(".")
        self.expect("(")
        body = self.parse_expr(0)
        self.expect(")")
        kind = tok.text
        if kind == "!":
            if not (isinstance(body, BinOp) and body.op == "=>"):
                raise ParseError(
                    f"universal quantifier body must have the form "
                    f"{var_tok.text} : D => P", tok.line, tok.col)
            constraint, inner = body.left, body.right
        else:
            parts = conjuncts(body)
            if len(parts) < 2:
                raise ParseError(
                    f"existential quantifier body must have the form "
                    f"{var_tok.text} : D & P", tok.line, tok.col)
            constraint, inner = parts[0], conjoin(parts[1:])
        if not (isinstance(constraint, BinOp) and constraint.op == ":"
                and constraint.left == Ident(var_tok.text)):
            raise ParseError(
                f"quantifier must open with a membership constraint on "
                f"{var_tok.text!r}", tok.line, tok.col)
        return Quantifier(kind, var_tok.text, constraint.right, inner)


def parse_predicate(text: str) -> Expr:
    """Parse a complete predicate/expression; rejects trailing input."""
    parser = _Parser(tokenize(text))
    expr = parser.parse_expr(0)
    tok = parser.peek()
    if tok.kind != "eof":
        raise parser.error("unexpected trailing input", tok)
    return expr


def parse_definitions(text: str) -> DefinitionTable:
    """Parse `NAME == <expression>` lines into an acyclic definition table."""
    table = DefinitionTable()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        parser = _Parser(tokenize(raw, first_line=lineno))
        name_tok = parser.peek()
        if name_tok.kind != "ident":
            raise parser.error("expected definition name", name_tok)
        parser.next()
        eq = parser.peek()
        if not (eq.kind == "op" and eq.text == "=="):
            raise parser.error("expected '==' after definition name", eq)
        parser.next()
        body = parser.parse_expr(0)
        tok = parser.peek()
        if tok.kind != "eof":
            raise parser.error("unexpected trailing input", tok)
        try:
            table.add(name_tok.text, body)
        except DefinitionError as exc:
            raise ParseError(str(exc), lineno, 1) from exc
    table.check_acyclic()
    return table
