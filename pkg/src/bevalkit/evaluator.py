"""Three-valued evaluation of predicates over finite integer ranges.

Every predicate gets one of three verdicts: TRUE, FALSE, or UNKNOWN with a
reason (timeout, unbounded-domain, unsupported-construct, unknown-identifier).
Integer quantification is restricted to the active minint..maxint window; a
quantifier whose domain had to be clipped can still produce a definite verdict
when a witness or counterexample lies inside the window, and reports
unbounded-domain otherwise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Callable, Iterable, Optional

from .ast import (
    App,
    BinOp,
    Bool,
    Builtin,
    DefinitionTable,
    EMPTY_DEFINITIONS,
    Expr,
    Ident,
    Int,
    Quantifier,
    SetExt,
    UnaryOp,
    conjuncts,
)
from .values import (
    B_FALSE,
    B_TRUE,
    BBool,
    Pair,
    Value,
    is_function,
    is_pair_set,
    sorted_values,
    value_key,
)

ENUMERATION_CAP = 2 ** 20

CLPFD_MIN = -(2 ** 28)
CLPFD_MAX = 2 ** 28 - 1

REASON_TIMEOUT = "timeout"
REASON_UNBOUNDED = "unbounded-domain"
REASON_UNSUPPORTED = "unsupported-construct"
REASON_UNKNOWN_IDENT = "unknown-identifier"


@dataclass(frozen=True)
class EvalParams:
    """Evaluation parameters; mirrors the prover's ``-p`` flag vocabulary."""

    minint: int = -65536
    maxint: int = 65536
    timeout_ms: int = 10000
    init: bool = False
    kodkod: bool = False
    smt: bool = False
    clpfd: bool = False

    def __post_init__(self) -> None:
        if self.minint >= self.maxint:
            raise ValueError("minint must be strictly below maxint")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")

    def bounds(self) -> tuple[int, int]:
        """Active integer window; CLPFD narrows it to the solver's own range."""
        lo, hi = self.minint, self.maxint
        if self.clpfd:
            lo, hi = max(lo, CLPFD_MIN), min(hi, CLPFD_MAX)
        return lo, hi

    def to_flag_string(self) -> str:
        parts = [
            f"-p MAXINT {self.maxint}",
            f"-p MININT {self.minint}",
            f"-p TIME_OUT {self.timeout_ms}",
        ]
        if self.init:
            parts.append("-p init")
        if self.kodkod:
            parts.append("-p KODKOD TRUE")
        if self.smt:
            parts.append("-p SMT TRUE")
        if self.clpfd:
            parts.append("-p CLPFD TRUE")
        return " ".join(parts)

    @classmethod
    def from_flag_string(cls, text: str) -> "EvalParams":
        fields: dict = {}
        toks = text.split()
        i = 0
        while i < len(toks):
            if toks[i] != "-p":
                raise ValueError(f"expected -p, got {toks[i]!r}")
            if i + 1 >= len(toks):
                raise ValueError("dangling -p")
            name = toks[i + 1]
            i += 2
            if name == "init":
                fields["init"] = True
                continue
            if i >= len(toks):
                raise ValueError(f"missing value for -p {name}")
            val = toks[i]
            i += 1
            if name == "MININT":
                fields["minint"] = int(val)
            elif name == "MAXINT":
                fields["maxint"] = int(val)
            elif name == "TIME_OUT":
                fields["timeout_ms"] = int(val)
            elif name in ("KODKOD", "SMT", "CLPFD"):
                if val not in ("TRUE", "FALSE"):
                    raise ValueError(f"-p {name} takes TRUE or FALSE, got {val!r}")
                fields[name.lower()] = val == "TRUE"
            else:
                raise ValueError(f"unknown parameter {name!r}")
        return cls(**fields)


class Verdict(Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class EvalResult:
    verdict: Verdict
    reason: Optional[str] = None
    elapsed_ms: int = 0
    counterexample: Optional[dict] = None

    def __post_init__(self) -> None:
        if (self.reason is not None) != (self.verdict is Verdict.UNKNOWN):
            raise ValueError("reason is present exactly for UNKNOWN verdicts")
        if self.counterexample is not None and self.verdict is not Verdict.FALSE:
            raise ValueError("counterexamples accompany FALSE verdicts only")


class EvalError(Exception):
    """Evaluation failed; ``reason`` says which UNKNOWN class it maps to."""

    reason = REASON_UNSUPPORTED


class UnknownIdentifierError(EvalError):
    reason = REASON_UNKNOWN_IDENT


class UnsupportedConstructError(EvalError):
    reason = REASON_UNSUPPORTED


class WellDefinednessError(EvalError):
    """Applications outside the domain, division by zero, and kin."""

    reason = REASON_UNSUPPORTED


class OutOfBoundsError(EvalError):
    """An integer value fell outside the active minint..maxint window."""

    reason = REASON_UNBOUNDED


class EvalTimeout(EvalError):
    reason = REASON_TIMEOUT


def _reason_error(reason: str, message: str) -> EvalError:
    cls = {
        REASON_TIMEOUT: EvalTimeout,
        REASON_UNBOUNDED: OutOfBoundsError,
        REASON_UNSUPPORTED: UnsupportedConstructError,
        REASON_UNKNOWN_IDENT: UnknownIdentifierError,
    }[reason]
    return cls(message)


def expand(e: Expr, defs: DefinitionTable) -> Expr:
    """Substitute definitions everywhere, respecting quantifier shadowing."""

    def go(e: Expr, shadow: frozenset) -> Expr:
        if isinstance(e, Ident):
            if e.name not in shadow and e.name in defs:
                return go(defs[e.name], shadow)
            return e
        if isinstance(e, (Int, Bool)):
            return e
        if isinstance(e, UnaryOp):
            return UnaryOp(e.op, go(e.operand, shadow))
        if isinstance(e, BinOp):
            return BinOp(e.op, go(e.left, shadow), go(e.right, shadow))
        if isinstance(e, SetExt):
            return SetExt(tuple(go(x, shadow) for x in e.elements))
        if isinstance(e, Builtin):
            return Builtin(e.name, go(e.arg, shadow))
        if isinstance(e, App):
            return App(go(e.func, shadow), go(e.arg, shadow))
        if isinstance(e, Quantifier):
            inner = shadow | {e.var}
            return Quantifier(e.kind, e.var, go(e.domain, shadow), go(e.body, inner))
        raise TypeError(f"not an expression: {e!r}")

    return go(e, frozenset())


_COMPARISONS = {"=", "/=", "<", "<=", ">", ">="}
_MIRROR = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "/=": "/="}

_T, _F, _U = "T", "F", "U"


class _Evaluator:
    def __init__(self, params: EvalParams, monotonic: Callable[[], float]):
        self.params = params
        self.lo, self.hi = params.bounds()
        self.monotonic = monotonic
        self.deadline: Optional[float] = None
        self._tick = 0

    # -- bookkeeping ------------------------------------------------------

    def _check_deadline(self) -> None:
        if self.deadline is not None and self.monotonic() >= self.deadline:
            raise EvalTimeout("evaluation timed out")

    def _step(self) -> None:
        self._tick += 1
        if self._tick & 0xFF == 0:
            self._check_deadline()

    def _int_value(self, n: int) -> int:
        if not (self.lo <= n <= self.hi):
            raise OutOfBoundsError(f"{n} outside {self.lo}..{self.hi}")
        return n

    def _cap(self, count: int, what: str) -> None:
        if count > ENUMERATION_CAP:
            raise UnsupportedConstructError(
                f"{what} has {count} elements, above the enumeration cap"
            )

    # -- expressions ------------------------------------------------------

    def expr(self, e: Expr, env: dict) -> Value:
        self._step()
        if isinstance(e, Int):
            return self._int_value(e.value)
        if isinstance(e, Bool):
            return B_TRUE if e.value else B_FALSE
        if isinstance(e, Ident):
            if e.name in env:
                return env[e.name]
            raise UnknownIdentifierError(f"unknown identifier {e.name}")
        if isinstance(e, UnaryOp):
            return self._unary(e, env)
        if isinstance(e, BinOp):
            return self._binop(e, env)
        if isinstance(e, SetExt):
            return frozenset(self.expr(x, env) for x in e.elements)
        if isinstance(e, Builtin):
            return self._builtin(e, env)
        if isinstance(e, App):
            return self._apply(e, env)
        if isinstance(e, Quantifier):
            verdict, reason, _ = self.pred(e, env)
            if verdict == _U:
                raise _reason_error(reason, "quantifier left undecided")
            return B_TRUE if verdict == _T else B_FALSE
        raise TypeError(f"not an expression: {e!r}")

    def _unary(self, e: UnaryOp, env: dict) -> Value:
        v = self.expr(e.operand, env)
        if e.op == "-":
            if not isinstance(v, int):
                raise WellDefinednessError("unary minus needs an integer")
            return self._int_value(-v)
        if e.op == "not":
            if not isinstance(v, BBool):
                raise WellDefinednessError("not needs a boolean")
            return B_FALSE if v.value else B_TRUE
        raise UnsupportedConstructError(f"unary {e.op}")

    def _need_int(self, v: Value, op: str) -> int:
        if not isinstance(v, int):
            raise WellDefinednessError(f"{op} needs integer operands")
        return v

    def _need_set(self, v: Value, op: str) -> frozenset:
        if not isinstance(v, frozenset):
            raise WellDefinednessError(f"{op} needs set operands")
        return v

    def _binop(self, e: BinOp, env: dict) -> Value:
        op = e.op
        if op in ("&", "or", "=>", "<=>", ":", "/:"):
            verdict, reason, _ = self.pred(e, env)
            if verdict == _U:
                raise _reason_error(reason, f"{op} left undecided")
            return B_TRUE if verdict == _T else B_FALSE
        if op in _COMPARISONS:
            left = self.expr(e.left, env)
            right = self.expr(e.right, env)
            if op == "=":
                return B_TRUE if left == right else B_FALSE
            if op == "/=":
                return B_FALSE if left == right else B_TRUE
            a = self._need_int(left, op)
            b = self._need_int(right, op)
            held = {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
            return B_TRUE if held else B_FALSE
        if op == "<:":
            a = self._need_set(self.expr(e.left, env), op)
            b = self._need_set(self.expr(e.right, env), op)
            return B_TRUE if a <= b else B_FALSE
        if op == "|->":
            return Pair(self.expr(e.left, env), self.expr(e.right, env))
        if op == "..":
            a = self._need_int(self.expr(e.left, env), "..")
            b = self._need_int(self.expr(e.right, env), "..")
            if b < a:
                return frozenset()
            self._cap(b - a + 1, "interval")
            return frozenset(range(a, b + 1))
        if op in ("-->", "+->", "<->"):
            return self._space(op, e, env)
        left = self.expr(e.left, env)
        if op == "+":
            a = self._need_int(left, op)
            b = self._need_int(self.expr(e.right, env), op)
            return self._int_value(a + b)
        if op == "-":
            if isinstance(left, frozenset):
                return left - self._need_set(self.expr(e.right, env), op)
            a = self._need_int(left, op)
            b = self._need_int(self.expr(e.right, env), op)
            return self._int_value(a - b)
        if op == "*":
            if isinstance(left, frozenset):
                right = self._need_set(self.expr(e.right, env), op)
                self._cap(len(left) * len(right), "cartesian product")
                return frozenset(
                    Pair(a, b) for a in left for b in right
                )
            a = self._need_int(left, op)
            b = self._need_int(self.expr(e.right, env), op)
            return self._int_value(a * b)
        if op == "/":
            a = self._need_int(left, op)
            b = self._need_int(self.expr(e.right, env), op)
            if b == 0:
                raise WellDefinednessError("division by zero")
            q = abs(a) // abs(b)
            return self._int_value(q if (a >= 0) == (b >= 0) else -q)
        if op == "mod":
            a = self._need_int(left, op)
            b = self._need_int(self.expr(e.right, env), op)
            if b <= 0:
                raise WellDefinednessError("mod needs a positive divisor")
            if a < 0:
                raise WellDefinednessError("mod needs a non-negative dividend")
            return self._int_value(a % b)
        if op == "**":
            a = self._need_int(left, op)
            b = self._need_int(self.expr(e.right, env), op)
            if b < 0:
                raise WellDefinednessError("negative exponent")
            if abs(a) > 1:
                # Magnitude pre-check so 2**100000 fails fast instead of
                # allocating a bignum: |a**b| >= 2**(b*(bits(a)-1)).
                window_bits = max(abs(self.lo), abs(self.hi)).bit_length()
                if b * (abs(a).bit_length() - 1) > window_bits + 1:
                    raise OutOfBoundsError("power exceeds the integer window")
            return self._int_value(a ** b)
        if op == "\\/":
            return self._need_set(left, op) | self._need_set(self.expr(e.right, env), op)
        if op == "/\\":
            return self._need_set(left, op) & self._need_set(self.expr(e.right, env), op)
        raise UnsupportedConstructError(f"operator {op}")

    def _space(self, op: str, e: BinOp, env: dict) -> frozenset:
        src = self._need_set(self.expr(e.left, env), op)
        tgt = self._need_set(self.expr(e.right, env), op)
        total = self._space_size(op, len(src), len(tgt))
        self._cap(total, "function space")
        s = sorted_values(src)
        t = sorted_values(tgt)
        out = []
        if op == "-->":
            for choice in product(t, repeat=len(s)):
                self._step()
                out.append(frozenset(Pair(a, b) for a, b in zip(s, choice)))
        elif op == "+->":
            slots = [None] + t
            for choice in product(slots, repeat=len(s)):
                self._step()
                out.append(
                    frozenset(
                        Pair(a, b) for a, b in zip(s, choice) if b is not None
                    )
                )
        else:
            pairs = [Pair(a, b) for a in s for b in t]
            for mask in product((False, True), repeat=len(pairs)):
                self._step()
                out.append(
                    frozenset(p for p, keep in zip(pairs, mask) if keep)
                )
        return frozenset(out)

    @staticmethod
    def _space_size(op: str, ns: int, nt: int) -> int:
        if op == "-->":
            return nt ** ns
        if op == "+->":
            return (nt + 1) ** ns
        return 2 ** (ns * nt)

    def _builtin(self, e: Builtin, env: dict) -> Value:
        if e.name == "card":
            n = self._symbolic_count(e.arg, env)
            if n is None:
                n = len(self._need_set(self.expr(e.arg, env), "card"))
            return self._int_value(n)
        if e.name == "POW":
            base = self._need_set(self.expr(e.arg, env), "POW")
            self._cap(2 ** len(base), "power set")
            items = sorted_values(base)
            subsets = []
            for mask in product((False, True), repeat=len(items)):
                self._step()
                subsets.append(
                    frozenset(x for x, keep in zip(items, mask) if keep)
                )
            return frozenset(subsets)
        v = self.expr(e.arg, env)
        if e.name == "size":
            s = self._need_set(v, "size")
            if not is_function(s):
                raise WellDefinednessError("size needs a sequence")
            return self._int_value(len(s))
        if e.name in ("dom", "ran"):
            s = self._need_set(v, e.name)
            if not is_pair_set(s):
                raise WellDefinednessError(f"{e.name} needs a set of pairs")
            if e.name == "dom":
                return frozenset(p.left for p in s)
            return frozenset(p.right for p in s)
        raise UnsupportedConstructError(f"builtin {e.name}")

    def _symbolic_count(self, e: Expr, env: dict) -> Optional[int]:
        """Cardinality without materialization, when the shape allows it."""
        if isinstance(e, BinOp):
            if e.op in ("-->", "+->", "<->"):
                ns = self._symbolic_count(e.left, env)
                nt = self._symbolic_count(e.right, env)
                if ns is None or nt is None:
                    return None
                return self._space_size(e.op, ns, nt)
            if e.op == "*":
                ns = self._symbolic_count(e.left, env)
                nt = self._symbolic_count(e.right, env)
                if ns is None or nt is None:
                    return None
                return ns * nt
            if e.op == "..":
                try:
                    a = self.expr(e.left, env)
                    b = self.expr(e.right, env)
                except EvalTimeout:
                    raise
                except EvalError:
                    return None
                if not (isinstance(a, int) and isinstance(b, int)):
                    return None
                return max(0, b - a + 1)
            return None
        if isinstance(e, Builtin) and e.name == "POW":
            inner = self._symbolic_count(e.arg, env)
            if inner is None:
                return None
            return 2 ** inner
        if isinstance(e, SetExt):
            try:
                return len(frozenset(self.expr(x, env) for x in e.elements))
            except EvalTimeout:
                raise
            except EvalError:
                return None
        return None

    def _apply(self, e: App, env: dict) -> Value:
        f = self._need_set(self.expr(e.func, env), "application")
        x = self.expr(e.arg, env)
        if not is_pair_set(f):
            raise WellDefinednessError("application needs a set of pairs")
        images = [p.right for p in f if p.left == x]
        if not images:
            raise WellDefinednessError("application outside the domain")
        if len(frozenset(images)) > 1:
            raise WellDefinednessError("application of a non-function")
        return images[0]

    # -- membership without materialization --------------------------------

    def _membership(self, member: Expr, coll: Expr, env: dict) -> bool:
        if isinstance(coll, BinOp) and coll.op in ("-->", "+->", "<->"):
            v = self.expr(member, env)
            if not isinstance(v, frozenset) or not is_pair_set(v):
                return False
            src = self._need_set(self.expr(coll.left, env), coll.op)
            tgt = self._need_set(self.expr(coll.right, env), coll.op)
            dom = frozenset(p.left for p in v)
            ran = frozenset(p.right for p in v)
            if not (dom <= src and ran <= tgt):
                return False
            if coll.op == "<->":
                return True
            if not is_function(v):
                return False
            if coll.op == "-->":
                return dom == src
            return True
        if isinstance(coll, Builtin) and coll.name == "POW":
            v = self.expr(member, env)
            if not isinstance(v, frozenset):
                return False
            base = self._need_set(self.expr(coll.arg, env), "POW")
            return v <= base
        v = self.expr(member, env)
        s = self._need_set(self.expr(coll, env), ":")
        return v in s

    # -- predicates ---------------------------------------------------------

    def pred(self, e: Expr, env: dict) -> tuple[str, Optional[str], Optional[dict]]:
        """Returns (verdict, reason-if-U, counterexample-if-F)."""
        self._step()
        if isinstance(e, Bool):
            return (_T, None, None) if e.value else (_F, None, None)
        if isinstance(e, UnaryOp) and e.op == "not":
            v, reason, _ = self.pred(e.operand, env)
            if v == _U:
                return _U, reason, None
            return (_F, None, None) if v == _T else (_T, None, None)
        if isinstance(e, Quantifier):
            return self._quantifier(e, env)
        if isinstance(e, BinOp) and e.op in ("&", "or", "=>", "<=>"):
            return self._connective(e, env)
        return self._atom(e, env)

    def _atom(self, e: Expr, env: dict) -> tuple[str, Optional[str], Optional[dict]]:
        try:
            if isinstance(e, BinOp) and e.op in (":", "/:"):
                inside = self._membership(e.left, e.right, env)
                hold = inside if e.op == ":" else not inside
                return (_T if hold else _F, None, None)
            v = self.expr(e, env)
        except EvalTimeout:
            raise
        except EvalError as err:
            return _U, err.reason, None
        if isinstance(v, BBool):
            return (_T, None, None) if v.value else (_F, None, None)
        return _U, REASON_UNSUPPORTED, None

    def _connective(self, e: BinOp, env: dict):
        lv, lr, lc = self.pred(e.left, env)
        if e.op == "&":
            if lv == _F:
                return _F, None, lc
            rv, rr, rc = self.pred(e.right, env)
            if rv == _F:
                return _F, None, rc
            if lv == _U or rv == _U:
                return _U, lr if lv == _U else rr, None
            return _T, None, None
        if e.op == "or":
            if lv == _T:
                return _T, None, None
            rv, rr, rc = self.pred(e.right, env)
            if rv == _T:
                return _T, None, None
            if lv == _U or rv == _U:
                return _U, lr if lv == _U else rr, None
            return _F, None, _merge_ce(lc, rc)
        if e.op == "=>":
            if lv == _F:
                return _T, None, None
            rv, rr, rc = self.pred(e.right, env)
            if lv == _T:
                return rv, rr, rc
            # antecedent unknown
            if rv == _T:
                return _T, None, None
            return _U, lr, None
        # <=>
        rv, rr, rc = self.pred(e.right, env)
        if lv == _U or rv == _U:
            return _U, lr if lv == _U else rr, None
        return (_T, None, None) if lv == rv else (_F, None, None)

    def _quantifier(self, e: Quantifier, env: dict):
        clipped = False
        iterator: Iterable[Value]
        if (
            isinstance(e.domain, BinOp)
            and e.domain.op == ".."
            and isinstance(e.domain.left, Int)
            and isinstance(e.domain.right, Int)
        ):
            # Literal intervals clip to the active window instead of failing
            # out of bounds; this is what keeps !x.(x : 0..10000000 => ...)
            # answerable at all.
            a, b = e.domain.left.value, e.domain.right.value
            lo, hi = max(a, self.lo), min(b, self.hi)
            clipped = hi >= lo and (a < self.lo or b > self.hi)
            lo, hi = self._smt_window(e, env, lo, hi)
            rng = range(lo, hi + 1)
            iterator = reversed(rng) if self.params.kodkod else rng
        else:
            try:
                dv = self._need_set(self.expr(e.domain, env), "quantifier domain")
            except EvalTimeout:
                raise
            except EvalError as err:
                return _U, err.reason, None
            items = sorted_values(dv)
            iterator = reversed(items) if self.params.kodkod else items

        universal = e.kind == "!"
        pending: Optional[str] = None
        missing = e.var not in env
        saved = env.get(e.var)
        try:
            for v in iterator:
                self._check_deadline()
                env[e.var] = v
                bv, br, bc = self.pred(e.body, env)
                if universal and bv == _F:
                    ce = dict(bc) if bc else {}
                    ce[e.var] = v
                    return _F, None, ce
                if not universal and bv == _T:
                    return _T, None, None
                if bv == _U and pending is None:
                    pending = br
        finally:
            if missing:
                env.pop(e.var, None)
            else:
                env[e.var] = saved
        if pending is not None:
            return _U, pending, None
        if clipped:
            return _U, REASON_UNBOUNDED, None
        return (_T, None, None) if universal else (_F, None, None)

    def _smt_window(self, e: Quantifier, env: dict, lo: int, hi: int) -> tuple[int, int]:
        """With SMT on, shrink a literal interval to the subrange where the
        body could still decide the quantifier. Only single comparisons of the
        bound variable against a ground integer are recognized; the shape is
        restrictive enough that skipped points provably cannot matter."""
        if not self.params.smt or lo > hi:
            return lo, hi
        body = e.body
        if not (isinstance(body, BinOp) and body.op in _COMPARISONS):
            return lo, hi
        if isinstance(body.left, Ident) and body.left.name == e.var:
            op, other = body.op, body.right
        elif isinstance(body.right, Ident) and body.right.name == e.var:
            op, other = _MIRROR[body.op], body.left
        else:
            return lo, hi
        if e.var in _free_idents(other):
            return lo, hi
        try:
            c = self.expr(other, env)
        except EvalTimeout:
            raise
        except EvalError:
            return lo, hi
        if not isinstance(c, int):
            return lo, hi
        if e.kind == "!":
            # keep only points where the body can be false
            windows = {
                "<": (c, hi),
                "<=": (c + 1, hi),
                ">": (lo, c),
                ">=": (lo, c - 1),
                "/=": (max(lo, c), min(hi, c)),
            }
        else:
            # keep only points where the body can be true
            windows = {
                "<": (lo, min(hi, c - 1)),
                "<=": (lo, min(hi, c)),
                ">": (max(lo, c + 1), hi),
                ">=": (max(lo, c), hi),
                "=": (max(lo, c), min(hi, c)),
            }
        if op not in windows:
            return lo, hi
        nlo, nhi = windows[op]
        nlo, nhi = max(lo, nlo), min(hi, nhi)
        if nlo > nhi:
            return lo, lo - 1
        return nlo, nhi


def _free_idents(e: Expr) -> frozenset:
    from .ast import free_idents

    return free_idents(e)


def _merge_ce(a: Optional[dict], b: Optional[dict]) -> Optional[dict]:
    if not a:
        return dict(b) if b else None
    if not b:
        return dict(a)
    for k in a.keys() & b.keys():
        if value_key(a[k]) != value_key(b[k]):
            return None
    return {**a, **b}


def _equation_candidates(p: Expr) -> list[tuple[str, Expr]]:
    """Equational constraints on identifiers, read off implication antecedents."""
    out: list[tuple[str, Expr]] = []
    e = p
    while isinstance(e, BinOp) and e.op == "=>":
        for c in conjuncts(e.left):
            if isinstance(c, BinOp) and c.op == "=":
                if isinstance(c.left, Ident):
                    out.append((c.left.name, c.right))
                elif isinstance(c.right, Ident):
                    out.append((c.right.name, c.left))
        e = e.right
    return out


def _bind_free(ev: _Evaluator, p: Expr) -> dict:
    """Resolve equational hypotheses to a valuation, first binding wins.
    Runs to a fixpoint so chains like A = B + 1, B = 2 resolve."""
    env: dict = {}
    pending = _equation_candidates(p)
    progress = True
    while progress and pending:
        progress = False
        rest = []
        for name, rhs in pending:
            if name in env:
                continue
            try:
                env[name] = ev.expr(rhs, env)
                progress = True
            except EvalTimeout:
                raise
            except UnknownIdentifierError:
                rest.append((name, rhs))
            except EvalError:
                pass
        pending = rest
    return env


def eval_expression(
    e: Expr,
    params: EvalParams = EvalParams(),
    defs: DefinitionTable = EMPTY_DEFINITIONS,
    monotonic: Callable[[], float] = time.monotonic,
) -> Value:
    """Evaluate a closed expression to a value. Raises EvalError subclasses
    (UnknownIdentifierError, WellDefinednessError, ...) when it cannot."""
    if params.init:
        e = expand(e, defs)
    ev = _Evaluator(params, monotonic)
    ev.deadline = monotonic() + params.timeout_ms / 1000.0
    return ev.expr(e, {})


def eval_predicate(
    p: Expr,
    params: EvalParams = EvalParams(),
    defs: DefinitionTable = EMPTY_DEFINITIONS,
    monotonic: Callable[[], float] = time.monotonic,
) -> EvalResult:
    """Three-valued evaluation; never raises for evaluation reasons."""
    start = monotonic()
    if params.init:
        p = expand(p, defs)
    ev = _Evaluator(params, monotonic)
    ev.deadline = start + params.timeout_ms / 1000.0
    try:
        env = _bind_free(ev, p)
        bound = dict(env)
        verdict, reason, ce = ev.pred(p, env)
    except EvalTimeout:
        verdict, reason, ce = _U, REASON_TIMEOUT, None
        bound = {}
    elapsed = int((monotonic() - start) * 1000)
    if verdict == _T:
        return EvalResult(Verdict.TRUE, None, elapsed, None)
    if verdict == _F:
        full = dict(bound)
        full.update(ce or {})
        return EvalResult(Verdict.FALSE, None, elapsed, full or None)
    return EvalResult(Verdict.UNKNOWN, reason, elapsed, None)


def check_po(
    po,
    params: EvalParams = EvalParams(),
    defs: DefinitionTable = EMPTY_DEFINITIONS,
    monotonic: Callable[[], float] = time.monotonic,
) -> EvalResult:
    """Evaluate a proof obligation: hypotheses imply goal. ``po`` needs
    ``hypotheses`` (sequence of predicates) and ``goal`` attributes."""
    hyps = list(po.hypotheses)
    p = po.goal
    if hyps:
        h = hyps[0]
        for extra in hyps[1:]:
            h = BinOp("&", h, extra)
        p = BinOp("=>", h, p)
    return eval_predicate(p, params, defs, monotonic)
