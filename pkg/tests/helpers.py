"""Shared test generators: hypothesis strategies for arbitrary ASTs and a
seeded random builder for closed predicates in the oracle fragment."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from bevalkit.ast import (
    App, BinOp, Bool, Builtin, BUILTIN_NAMES, Expr, Ident, Int, Quantifier,
    SetExt, UnaryOp, free_idents,
)
from bevalkit.evaluator import EvalParams
from bevalkit.parser import INFIX
from bevalkit.store import Group, ProofObligation, Status

RESERVED = frozenset({"TRUE", "FALSE", "not", "or", "mod"}) | set(BUILTIN_NAMES)

# Wide integer window so generated arithmetic never trips the bounds check;
# the oracle uses the same window.
ORACLE_BOUND = 2 ** 31
ORACLE_PARAMS = EvalParams(minint=-ORACLE_BOUND, maxint=ORACLE_BOUND)

ident_names = st.from_regex(
    r"[A-Za-z_][A-Za-z0-9_]{0,5}", fullmatch=True,
).filter(lambda s: s not in RESERVED)

_leaves = st.one_of(
    st.builds(Int, st.integers(-9999, 9999)),
    st.builds(Bool, st.booleans()),
    st.builds(Ident, ident_names),
)


def _compound(children):
    return st.one_of(
        st.builds(lambda x: UnaryOp("not", x), children),
        # the parser folds unary minus on literals, so Int operands are
        # excluded (Int(-5) is the canonical form of that tree)
        st.builds(lambda x: UnaryOp("-", x),
                  children.filter(lambda c: not isinstance(c, Int))),
        st.builds(lambda op, a, b: BinOp(op, a, b),
                  st.sampled_from(sorted(INFIX)), children, children),
        st.builds(lambda xs: SetExt(tuple(xs)), st.lists(children, max_size=3)),
        st.builds(lambda n, a: Builtin(n, a),
                  st.sampled_from(BUILTIN_NAMES), children),
        st.builds(App, children, children),
        st.builds(lambda k, v, d, b: Quantifier(k, v, d, b),
                  st.sampled_from(("!", "#")), ident_names, children, children),
    )


ast_exprs = st.recursive(_leaves, _compound, max_leaves=25)

_CMP = ("=", "/=", "<", "<=", ">", ">=")


class PredGen:
    """Random closed predicates whose quantifier search space stays within
    a fixed budget and whose arithmetic stays within ORACLE_BOUND."""

    def __init__(self, rng: random.Random, max_space: int = 1024):
        self.rng = rng
        self.max_space = max_space

    def predicate(self, depth: int = 3) -> Expr:
        p = self._pred(depth, (), self.max_space)
        assert not free_idents(p)
        return p

    def _pred(self, depth: int, vars: tuple[str, ...], budget: int) -> Expr:
        rng = self.rng
        if depth <= 0:
            return self._atom(vars)
        roll = rng.random()
        if roll < 0.40:
            return self._atom(vars)
        if roll < 0.50:
            return UnaryOp("not", self._pred(depth - 1, vars, budget))
        if roll < 0.80 or budget < 2:
            op = rng.choice(("&", "or", "=>", "<=>"))
            return BinOp(op, self._pred(depth - 1, vars, budget),
                         self._pred(depth - 1, vars, budget))
        width = rng.randint(2, min(8, budget))
        lo = rng.randint(-12, 8)
        if vars and rng.random() < 0.1:
            var = rng.choice(vars)  # deliberate shadowing
        else:
            var = f"x{len(vars)}"
        if rng.random() < 0.25:
            values = rng.sample(range(-12, 13), width)
            domain: Expr = SetExt(tuple(Int(v) for v in values))
        else:
            domain = BinOp("..", Int(lo), Int(lo + width - 1))
        body = self._pred(depth - 1, vars + (var,), budget // width)
        return Quantifier(rng.choice(("!", "#")), var, domain, body)

    def _atom(self, vars: tuple[str, ...]) -> Expr:
        rng = self.rng
        roll = rng.random()
        if roll < 0.35:
            return BinOp(rng.choice(_CMP), self.int_expr(2, vars),
                         self.int_expr(2, vars))
        if roll < 0.50:
            op = rng.choice((":", "/:"))
            return BinOp(op, self.int_expr(1, vars), self.int_set(1, vars))
        if roll < 0.60:
            return BinOp("<:", self.int_set(1, vars), self.int_set(1, vars))
        if roll < 0.68:
            op = rng.choice(("=", "/="))
            return BinOp(op, self.int_set(1, vars), self.int_set(1, vars))
        if roll < 0.78:
            subject = self.int_set(1, vars) if rng.random() < 0.6 \
                else self.pair_set(1, vars)
            return BinOp(rng.choice(_CMP), Builtin("card", subject),
                         self.int_expr(1, vars))
        if roll < 0.84:
            maplet = BinOp("|->", self.int_expr(0, vars), self.int_expr(0, vars))
            return BinOp(rng.choice((":", "/:")), maplet, self.pair_set(1, vars))
        if roll < 0.90:
            return BinOp(":", self.pair_set(1, vars), self._space(vars))
        if roll < 0.95:
            proj = rng.choice(("dom", "ran"))
            return BinOp(":", self.int_expr(1, vars),
                         Builtin(proj, self.pair_set(1, vars)))
        if roll < 0.98:
            return BinOp(rng.choice(_CMP),
                         Builtin("card", Builtin("POW", self.int_set(0, vars))),
                         self.int_expr(1, vars))
        return Bool(rng.random() < 0.5)

    def int_expr(self, depth: int, vars: tuple[str, ...]) -> Expr:
        rng = self.rng
        if depth <= 0:
            if vars and rng.random() < 0.5:
                return Ident(rng.choice(vars))
            return Int(rng.randint(-12, 12))
        roll = rng.random()
        if roll < 0.30:
            return self.int_expr(0, vars)
        if roll < 0.60:
            op = rng.choice(("+", "-", "*"))
            return BinOp(op, self.int_expr(depth - 1, vars),
                         self.int_expr(depth - 1, vars))
        if roll < 0.70:
            operand = self.int_expr(depth - 1, vars)
            if isinstance(operand, Int):
                return Int(-operand.value)  # parser folds literal negation
            return UnaryOp("-", operand)
        if roll < 0.80:
            divisor = rng.choice([d for d in range(-9, 10) if d != 0])
            return BinOp("/", self.int_expr(depth - 1, vars), Int(divisor))
        if roll < 0.88:
            return BinOp("**", self.int_expr(0, vars),
                         Int(rng.randint(0, 3)))
        if roll < 0.96:
            return Builtin("card", self.int_set(depth - 1, vars))
        f, key = self._literal_function()
        return App(f, Int(key))

    def int_set(self, depth: int, vars: tuple[str, ...]) -> Expr:
        rng = self.rng
        roll = rng.random()
        if depth <= 0 or roll < 0.35:
            n = rng.randint(0, 5)
            values = rng.sample(range(-12, 13), n)
            return SetExt(tuple(Int(v) for v in values))
        if roll < 0.60:
            lo = rng.randint(-12, 8)
            return BinOp("..", Int(lo), Int(lo + rng.randint(0, 8)))
        if roll < 0.85:
            op = rng.choice(("\\/", "/\\"))
            return BinOp(op, self.int_set(depth - 1, vars),
                         self.int_set(depth - 1, vars))
        proj = rng.choice(("dom", "ran"))
        return Builtin(proj, self.pair_set(depth - 1, vars))

    def pair_set(self, depth: int, vars: tuple[str, ...]) -> Expr:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.7:
            n = rng.randint(1, 4)
            maplets = tuple(
                BinOp("|->", Int(rng.randint(-4, 4)), Int(rng.randint(-4, 4)))
                for _ in range(n))
            return SetExt(maplets)
        op = rng.choice(("\\/", "/\\"))
        return BinOp(op, self.pair_set(depth - 1, vars),
                     self.pair_set(depth - 1, vars))

    def _space(self, vars: tuple[str, ...]) -> Expr:
        rng = self.rng
        src_lo = rng.randint(0, 3)
        src = BinOp("..", Int(src_lo), Int(src_lo + rng.randint(0, 2)))
        tgt_lo = rng.randint(0, 2)
        tgt = BinOp("..", Int(tgt_lo), Int(tgt_lo + rng.randint(0, 1)))
        return BinOp(rng.choice(("-->", "+->", "<->")), src, tgt)

    def _literal_function(self) -> tuple[Expr, int]:
        rng = self.rng
        m = rng.randint(1, 3)
        maplets = tuple(
            BinOp("|->", Int(i), Int(rng.randint(-9, 9)))
            for i in range(1, m + 1))
        return SetExt(maplets), rng.randint(1, m)


def random_po(rng: random.Random, name: str = "po",
              group: Group = Group.COMMON) -> ProofObligation:
    """Small ground PO for prover corpora: a few hypotheses, one of which
    may be an equality over a fresh identifier used in the goal."""
    gen = PredGen(rng, max_space=64)
    hyps: list[Expr] = [gen.predicate(2) for _ in range(rng.randint(0, 2))]
    goal = gen.predicate(2)
    if rng.random() < 0.5:
        alias = Ident(f"K{rng.randint(0, 3)}")
        value = gen.int_expr(1, ())
        hyps.append(BinOp("=", alias, value))
        if rng.random() < 0.5:
            goal = BinOp(rng.choice(_CMP), alias, gen.int_expr(1, ()))
    rng.shuffle(hyps)
    return ProofObligation(name=name, group=group, hypotheses=tuple(hyps),
                           goal=goal, status=Status.UNPROVED)
