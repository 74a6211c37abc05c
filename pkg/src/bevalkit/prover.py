"""Escalating-force prover with rule application.

Three cumulative tiers: force 1 is normalization plus hypothesis lookup,
force 2 adds bounded rewriting with hypothesis equalities, force 3 adds
application of stored proof rules. The tiers are deliberately weak on
arithmetic over sets (no cardinality or set evaluation happens here), so
goals like card(BYTE) = 256 stay open until a rule or the evaluator closes
them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .ast import (
    App,
    BinOp,
    Bool,
    Builtin,
    Expr,
    Ident,
    Int,
    Quantifier,
    SetExt,
    UnaryOp,
    substitute,
)
from .render import render

RULE_ATTEMPT_BUDGET = 100

_COMMUTATIVE = frozenset({"&", "or", "+", "*", "="})

_TRUE = Bool(True)
_FALSE = Bool(False)


@dataclass(frozen=True)
class Force:
    level: int

    def __post_init__(self) -> None:
        if self.level not in (1, 2, 3):
            raise ValueError("force level must be 1, 2, or 3")


FORCE_1 = Force(1)
FORCE_2 = Force(2)
FORCE_3 = Force(3)


@dataclass(frozen=True)
class ProofOutcome:
    proved: bool
    force: Optional[int] = None
    rule_name: Optional[str] = None
    trace: tuple[str, ...] = ()


class MissingRuleError(Exception):
    def __init__(self, rule_name: str):
        super().__init__(f"user pass references unknown rule {rule_name}")
        self.rule_name = rule_name


def _key(e: Expr) -> str:
    return render(e)


def _fold_arith(op: str, a: int, b: int) -> Optional[int]:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            return None
        q = abs(a) // abs(b)
        return q if (a >= 0) == (b >= 0) else -q
    if op == "mod":
        if a < 0 or b <= 0:
            return None
        return a % b
    if op == "**":
        if b < 0:
            return None
        if abs(a) > 1 and b * abs(a).bit_length() > 32:
            return None
        return a ** b
    return None


def _fold_cmp(op: str, a: int, b: int) -> Optional[bool]:
    return {
        "=": a == b, "/=": a != b,
        "<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b,
    }.get(op)


def normalize(e: Expr) -> Expr:
    """Fold ground arithmetic, orient commutative operands under a fixed
    total order, drop double negation. Idempotent."""
    if isinstance(e, (Int, Bool, Ident)):
        return e
    if isinstance(e, UnaryOp):
        inner = normalize(e.operand)
        if e.op == "not":
            if isinstance(inner, UnaryOp) and inner.op == "not":
                return inner.operand
            if isinstance(inner, Bool):
                return Bool(not inner.value)
            return UnaryOp("not", inner)
        if e.op == "-" and isinstance(inner, Int):
            return Int(-inner.value)
        return UnaryOp(e.op, inner)
    if isinstance(e, BinOp):
        left = normalize(e.left)
        right = normalize(e.right)
        if isinstance(left, Int) and isinstance(right, Int):
            folded = _fold_arith(e.op, left.value, right.value)
            if folded is not None:
                return Int(folded)
            cmp_folded = _fold_cmp(e.op, left.value, right.value)
            if cmp_folded is not None:
                return Bool(cmp_folded)
        if isinstance(left, Bool) and isinstance(right, Bool):
            folded_bool = {
                "&": left.value and right.value,
                "or": left.value or right.value,
                "=>": (not left.value) or right.value,
                "<=>": left.value == right.value,
            }.get(e.op)
            if folded_bool is not None:
                return Bool(folded_bool)
        if e.op in _COMMUTATIVE and _key(right) < _key(left):
            left, right = right, left
        if e.op == "=" and left == right:
            return _TRUE
        return BinOp(e.op, left, right)
    if isinstance(e, SetExt):
        return SetExt(tuple(normalize(x) for x in e.elements))
    if isinstance(e, Builtin):
        return Builtin(e.name, normalize(e.arg))
    if isinstance(e, App):
        return App(normalize(e.func), normalize(e.arg))
    if isinstance(e, Quantifier):
        return Quantifier(e.kind, e.var, normalize(e.domain), normalize(e.body))
    raise TypeError(f"not an expression: {e!r}")


def _replace(e: Expr, src: Expr, dst: Expr) -> Expr:
    """Replace every occurrence of the subterm src with dst. Does not
    descend past a quantifier that rebinds an identifier src mentions."""
    if e == src:
        return dst
    if isinstance(e, (Int, Bool, Ident)):
        return e
    if isinstance(e, UnaryOp):
        return UnaryOp(e.op, _replace(e.operand, src, dst))
    if isinstance(e, BinOp):
        return BinOp(e.op, _replace(e.left, src, dst), _replace(e.right, src, dst))
    if isinstance(e, SetExt):
        return SetExt(tuple(_replace(x, src, dst) for x in e.elements))
    if isinstance(e, Builtin):
        return Builtin(e.name, _replace(e.arg, src, dst))
    if isinstance(e, App):
        return App(_replace(e.func, src, dst), _replace(e.arg, src, dst))
    if isinstance(e, Quantifier):
        if isinstance(src, Ident) and src.name == e.var:
            return e
        return Quantifier(
            e.kind, e.var, _replace(e.domain, src, dst), _replace(e.body, src, dst)
        )
    raise TypeError(f"not an expression: {e!r}")


def _match(pat: Expr, term: Expr, binding: dict, shadow: frozenset) -> bool:
    """Structural match; identifiers in the pattern are variables unless
    they are bound inside the pattern itself."""
    if isinstance(pat, Ident) and pat.name not in shadow:
        seen = binding.get(pat.name)
        if seen is None:
            binding[pat.name] = term
            return True
        return seen == term
    if type(pat) is not type(term):
        return False
    if isinstance(pat, (Int, Bool)):
        return pat == term
    if isinstance(pat, Ident):
        return isinstance(term, Ident) and term.name == pat.name
    if isinstance(pat, UnaryOp):
        return pat.op == term.op and _match(pat.operand, term.operand, binding, shadow)
    if isinstance(pat, BinOp):
        return (
            pat.op == term.op
            and _match(pat.left, term.left, binding, shadow)
            and _match(pat.right, term.right, binding, shadow)
        )
    if isinstance(pat, SetExt):
        return len(pat.elements) == len(term.elements) and all(
            _match(p, t, binding, shadow)
            for p, t in zip(pat.elements, term.elements)
        )
    if isinstance(pat, Builtin):
        return pat.name == term.name and _match(pat.arg, term.arg, binding, shadow)
    if isinstance(pat, App):
        return _match(pat.func, term.func, binding, shadow) and _match(
            pat.arg, term.arg, binding, shadow
        )
    if isinstance(pat, Quantifier):
        return (
            pat.kind == term.kind
            and pat.var == term.var
            and _match(pat.domain, term.domain, binding, shadow | {pat.var})
            and _match(pat.body, term.body, binding, shadow | {pat.var})
        )
    raise TypeError(f"not an expression: {pat!r}")


def _f1_holds(ngoal: Expr, nhyps: Sequence[Expr]) -> bool:
    return ngoal == _TRUE or any(ngoal == h for h in nhyps)


def _try_rule(rule, ngoal: Expr, nhyps: Sequence[Expr]) -> bool:
    binding: dict = {}
    if not _match(normalize(rule.conclusion), ngoal, binding, frozenset()):
        return False
    subst = {name: expr for name, expr in binding.items()}
    for guard in rule.guards:
        inst = normalize(substitute(normalize(guard), subst))
        if not _f1_holds(inst, nhyps):
            return False
    return True


def prove(po, force: Force, rules: Sequence = ()) -> ProofOutcome:
    """Attempt a proof obligation at the given force. Cumulative: higher
    forces run everything the lower ones run."""
    level = force.level if isinstance(force, Force) else int(force)
    if level not in (1, 2, 3):
        raise ValueError("force level must be 1, 2, or 3")
    nhyps = [normalize(h) for h in po.hypotheses]
    ngoal = normalize(po.goal)
    trace: list[str] = []

    if _f1_holds(ngoal, nhyps):
        trace.append("force 1: goal closed by normalization/hypothesis lookup")
        return ProofOutcome(True, 1, None, tuple(trace))
    if level == 1:
        return ProofOutcome(False, None, None, tuple(trace))

    # Force 2: rewrite the goal with hypothesis equalities, both directions,
    # each equality used at most twice, at most two passes.
    eqs = [(h.left, h.right) for h in nhyps if isinstance(h, BinOp) and h.op == "="]
    uses = [0] * len(eqs)
    goal2 = ngoal
    for _ in range(2):
        changed = False
        for i, (a, b) in enumerate(eqs):
            for src, dst in ((a, b), (b, a)):
                if uses[i] >= 2:
                    break
                rewritten = _replace(goal2, src, dst)
                if rewritten != goal2:
                    uses[i] += 1
                    changed = True
                    goal2 = normalize(rewritten)
                    trace.append(f"force 2: rewrote with {render(a)} = {render(b)}")
                    if _f1_holds(goal2, nhyps):
                        trace.append("force 2: goal closed after rewriting")
                        return ProofOutcome(True, 2, None, tuple(trace))
                    # keep the progress: the reverse direction would undo it
                    break
        if not changed:
            break
    if level == 2:
        return ProofOutcome(False, None, None, tuple(trace))

    # Force 3: stored-rule application against the original normalized goal.
    budget = RULE_ATTEMPT_BUDGET
    for rule in rules:
        if budget <= 0:
            trace.append("force 3: attempt budget exhausted")
            break
        budget -= 1
        if _try_rule(rule, ngoal, nhyps):
            trace.append(f"force 3: rule {rule.theory_name} applied")
            return ProofOutcome(True, 3, rule.theory_name, tuple(trace))
    return ProofOutcome(False, None, None, tuple(trace))


def apply_user_pass(po, user_pass, rules: Sequence) -> ProofOutcome:
    """Replay a stored User Pass: entries whose selector equals the PO name
    trigger a single-rule force-3 application of the named rule."""
    by_name = {r.theory_name: r for r in rules}
    nhyps = [normalize(h) for h in po.hypotheses]
    ngoal = normalize(po.goal)
    for selector, rule_name in user_pass.entries:
        if selector != po.name:
            continue
        rule = by_name.get(rule_name)
        if rule is None:
            raise MissingRuleError(rule_name)
        if _try_rule(rule, ngoal, nhyps):
            return ProofOutcome(
                True, 3, rule_name, (f"user pass: rule {rule_name} applied",)
            )
    return ProofOutcome(False, None, None, ())
