"""Evaluator semantics: params, arithmetic, sets, three-valued verdicts,
bounds, timeout, and agreement with the brute-force oracle."""

import random
import time

import pytest
from hypothesis import given, settings, strategies as st

from bevalkit.ast import BinOp, Ident, Int, substitute
from bevalkit.evaluator import (
    EvalParams, EvalResult, EvalTimeout, OutOfBoundsError,
    UnknownIdentifierError, Verdict, WellDefinednessError, check_po,
    eval_expression, eval_predicate,
)
from bevalkit.parser import parse_definitions, parse_predicate
from bevalkit.render import render
from bevalkit.store import Group, ProofObligation
from bevalkit.values import B_TRUE, Pair, value_to_expr

from helpers import ORACLE_BOUND, ORACLE_PARAMS, PredGen, random_po
from oracle import OracleSkip, oracle_pred


def verdict_of(text: str, params: EvalParams = EvalParams(), defs=None):
    p = parse_predicate(text)
    if defs is not None:
        return eval_predicate(p, params, defs)
    return eval_predicate(p, params)


class TestEvalParams:
    def test_defaults(self):
        p = EvalParams()
        assert (p.minint, p.maxint, p.timeout_ms) == (-65536, 65536, 10000)
        assert not (p.init or p.kodkod or p.smt or p.clpfd)

    def test_validation(self):
        with pytest.raises(ValueError):
            EvalParams(minint=5, maxint=5)
        with pytest.raises(ValueError):
            EvalParams(timeout_ms=0)

    def test_default_flag_string(self):
        assert EvalParams().to_flag_string() == (
            "-p MAXINT 65536 -p MININT -65536 -p TIME_OUT 10000")

    def test_full_flag_string(self):
        p = EvalParams(init=True, kodkod=True, smt=True, clpfd=True)
        assert p.to_flag_string() == (
            "-p MAXINT 65536 -p MININT -65536 -p TIME_OUT 10000"
            " -p init -p KODKOD TRUE -p SMT TRUE -p CLPFD TRUE")

    def test_from_flag_string(self):
        p = EvalParams.from_flag_string(
            "-p MAXINT 1024 -p MININT -4 -p SMT TRUE -p KODKOD FALSE")
        assert (p.maxint, p.minint, p.smt, p.kodkod) == (1024, -4, True, False)

    def test_flag_string_errors(self):
        for bad in ("MAXINT 5", "-p", "-p MAXINT", "-p SMT yes", "-p FOO 1"):
            with pytest.raises(ValueError):
                EvalParams.from_flag_string(bad)

    @given(
        st.integers(-10 ** 6, -1), st.integers(0, 10 ** 6),
        st.integers(1, 10 ** 5),
        st.booleans(), st.booleans(), st.booleans(), st.booleans(),
    )
    def test_flag_string_round_trip(self, lo, hi, t, i, k, s, c):
        p = EvalParams(lo, hi, t, i, k, s, c)
        assert EvalParams.from_flag_string(p.to_flag_string()) == p

    def test_clpfd_narrows_bounds(self):
        wide = EvalParams(minint=-(2 ** 30), maxint=2 ** 30, clpfd=True)
        assert wide.bounds() == (-(2 ** 28), 2 ** 28 - 1)
        narrow = EvalParams(clpfd=True)
        assert narrow.bounds() == (-65536, 65536)


class TestEvalResult:
    def test_reason_only_for_unknown(self):
        with pytest.raises(ValueError):
            EvalResult(Verdict.TRUE, reason="timeout")
        with pytest.raises(ValueError):
            EvalResult(Verdict.UNKNOWN)

    def test_counterexample_only_for_false(self):
        with pytest.raises(ValueError):
            EvalResult(Verdict.TRUE, counterexample={"x": 1})


ARITH_CASES = [
    ("7 / 2 = 3", Verdict.TRUE),
    ("-7 / 2 = -3", Verdict.TRUE),  # truncation toward zero
    ("7 / -2 = -3", Verdict.TRUE),
    ("7 mod 2 = 1", Verdict.TRUE),
    ("2 ** 10 = 1024", Verdict.TRUE),
    ("2 ** 0 = 1", Verdict.TRUE),
    ("(-2) ** 3 = -8", Verdict.TRUE),
    ("5 - 9 = -4", Verdict.TRUE),
    ("3 * -4 = -12", Verdict.TRUE),
    ("1 = 2", Verdict.FALSE),
]


@pytest.mark.parametrize("text,verdict", ARITH_CASES)
def test_arithmetic(text, verdict):
    assert verdict_of(text).verdict is verdict


class TestWellDefinedness:
    def test_division_by_zero(self):
        r = verdict_of("1 / 0 = 1")
        assert r.verdict is Verdict.UNKNOWN
        assert r.reason == "unsupported-construct"

    def test_mod_requires_nonnegative_dividend(self):
        r = verdict_of("-7 mod 2 = 1")
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unsupported-construct")

    def test_mod_requires_positive_divisor(self):
        r = verdict_of("7 mod 0 = 1")
        assert r.verdict is Verdict.UNKNOWN

    def test_negative_exponent(self):
        r = verdict_of("2 ** -1 = 0")
        assert r.verdict is Verdict.UNKNOWN

    def test_application_outside_domain(self):
        r = verdict_of("{1 |-> 5}(2) = 5")
        assert r.verdict is Verdict.UNKNOWN

    def test_eval_expression_raises(self):
        with pytest.raises(WellDefinednessError):
            eval_expression(parse_predicate("1 / 0"))
        with pytest.raises(UnknownIdentifierError):
            eval_expression(parse_predicate("mystery + 1"))


SET_CASES = [
    ("card({4, 7, 9}) = 3", Verdict.TRUE),
    ("card({}) = 0", Verdict.TRUE),
    ("card(1..8 --> {0,1}) = 256", Verdict.TRUE),
    ("card(1..16 --> {0,1}) = 65536", Verdict.TRUE),  # symbolic, no expansion
    ("card(1..3 +-> {0,1}) = 27", Verdict.TRUE),
    ("card(1..2 <-> 1..2) = 16", Verdict.TRUE),
    ("card(POW({1,2,3})) = 8", Verdict.TRUE),
    ("{1,2} <: {1,2,3}", Verdict.TRUE),
    ("{1,4} <: {1,2,3}", Verdict.FALSE),
    ("(1..3) /\\ (2..5) = {2,3}", Verdict.TRUE),
    ("(1..2) \\/ {5} = {1,2,5}", Verdict.TRUE),
    ("5..2 = {}", Verdict.TRUE),
    ("dom({1 |-> 7, 2 |-> 8}) = {1,2}", Verdict.TRUE),
    ("ran({1 |-> 7, 2 |-> 8}) = {7,8}", Verdict.TRUE),
    ("size([6, 6, 9]) = 3", Verdict.TRUE),
    ("[7, 8](2) = 8", Verdict.TRUE),
    ("{1 |-> 0, 2 |-> 1} : (1..2 --> {0,1})", Verdict.TRUE),
    ("{1 |-> 0} : (1..2 --> {0,1})", Verdict.FALSE),
    ("{1 |-> 0} : (1..2 +-> {0,1})", Verdict.TRUE),
    ("{1 |-> 0, 1 |-> 1} : (1..2 +-> {0,1})", Verdict.FALSE),
    ("{1 |-> 0, 1 |-> 1} : (1..2 <-> {0,1})", Verdict.TRUE),
    ("{} : (1..2 <-> {0,1})", Verdict.TRUE),
    ("{1,2} : POW(1..4)", Verdict.TRUE),
    ("{0,5} : POW(1..4)", Verdict.FALSE),
]


@pytest.mark.parametrize("text,verdict", SET_CASES)
def test_sets_and_relations(text, verdict):
    assert verdict_of(text).verdict is verdict


class TestThreeValued:
    def test_unknown_identifier(self):
        r = verdict_of("ghost = 1")
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unknown-identifier")

    def test_kleene_conjunction_short_circuits(self):
        assert verdict_of("1 = 2 & 1 / 0 = 1").verdict is Verdict.FALSE
        assert verdict_of("1 / 0 = 1 & 1 = 2").verdict is Verdict.FALSE

    def test_kleene_disjunction(self):
        assert verdict_of("1 = 1 or 1 / 0 = 1").verdict is Verdict.TRUE
        assert verdict_of("1 / 0 = 1 or 1 = 1").verdict is Verdict.TRUE
        r = verdict_of("1 / 0 = 1 or 1 = 2")
        assert r.verdict is Verdict.UNKNOWN

    def test_kleene_implication(self):
        assert verdict_of("1 / 0 = 1 => 1 = 1").verdict is Verdict.TRUE
        assert verdict_of("1 = 2 => 1 / 0 = 1").verdict is Verdict.TRUE
        assert verdict_of("1 = 1 => 1 / 0 = 1").verdict is Verdict.UNKNOWN

    def test_unknown_equivalence(self):
        assert verdict_of("1 / 0 = 1 <=> 1 = 1").verdict is Verdict.UNKNOWN

    def test_not_preserves_unknown(self):
        r = verdict_of("not(ghost = 1)")
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unknown-identifier")


class TestCounterexamples:
    def test_universal_violation_binds_the_variable(self):
        r = verdict_of("!x.(x : 1..10 => x < 5)")
        assert r.verdict is Verdict.FALSE
        assert "x" in r.counterexample
        assert r.counterexample["x"] >= 5

    def test_true_has_no_counterexample(self):
        r = verdict_of("!x.(x : 1..10 => x < 11)")
        assert r.verdict is Verdict.TRUE
        assert r.counterexample is None

    def test_free_identifier_binding_recorded(self):
        r = verdict_of("n = 4 => n * n = 17")
        assert r.verdict is Verdict.FALSE
        assert r.counterexample == {"n": 4}

    def test_goal_side_equations_do_not_bind(self):
        # solving for n here would break antecedent strengthening:
        # TRUE(n = 4 & n * n = 16) must not flip FALSE when n = 5 arrives
        r = verdict_of("n = 4 & n * n = 17")
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unknown-identifier")

    def test_counterexample_substitution_yields_false(self):
        rng = random.Random(7)
        gen = PredGen(rng)
        checked = 0
        while checked < 60:
            p = gen.predicate()
            r = eval_predicate(p, ORACLE_PARAMS)
            if r.verdict is not Verdict.FALSE or not r.counterexample:
                continue
            checked += 1
            bindings = {
                name: value_to_expr(v) for name, v in r.counterexample.items()
            }
            ground = substitute(p, bindings)
            again = eval_predicate(ground, ORACLE_PARAMS)
            assert again.verdict is Verdict.FALSE, render(p)


class TestBoundsAndDomains:
    def test_literal_out_of_window(self):
        r = verdict_of("70000 = 70000")
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unbounded-domain")

    def test_arithmetic_escaping_window(self):
        r = verdict_of("65536 + 1 > 0")
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unbounded-domain")

    def test_clipped_universal_stays_unknown_when_inconclusive(self):
        r = verdict_of("!x.(x : -100000..100000 => x + x = 2 * x)",
                       EvalParams(minint=-64, maxint=64))
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unbounded-domain")

    def test_clipped_universal_still_reports_inner_counterexample(self):
        r = verdict_of("!x.(x : -100000..100000 => x < 3)",
                       EvalParams(minint=-64, maxint=64))
        assert r.verdict is Verdict.FALSE
        assert r.counterexample["x"] >= 3

    def test_clipped_existential_still_finds_inner_witness(self):
        r = verdict_of("#x.(x : -100000..100000 & x = 3)",
                       EvalParams(minint=-64, maxint=64))
        assert r.verdict is Verdict.TRUE

    def test_unclipped_interval_is_definite(self):
        r = verdict_of("!x.(x : -100..100 => x + x = 2 * x)")
        assert r.verdict is Verdict.TRUE

    def test_enumeration_cap_refuses_materialization(self):
        r = verdict_of("(1..21 --> {0,1}) = (1..21 --> {0,1})")
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unsupported-construct")

    def test_symbolic_card_survives_the_cap(self):
        assert verdict_of("card(1..21 --> {0,1}) = 2097152",
                          EvalParams(maxint=2 ** 22)).verdict is Verdict.TRUE


class TestTimeout:
    ADVERSARIAL = "!x.(x : 1..1024 => !y.(y : 1..1024 => x * y + x + y >= 0))"

    def test_timeout_reason_and_budget(self):
        params = EvalParams(minint=-(2 ** 21), maxint=2 ** 21, timeout_ms=200)
        start = time.monotonic()
        r = verdict_of(self.ADVERSARIAL, params)
        wall_ms = (time.monotonic() - start) * 1000
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "timeout")
        assert wall_ms <= 200 + 500

    def test_monotonic_injection(self):
        # a clock frozen past the deadline times out immediately
        ticks = iter([0.0, 10 ** 9])

        def mono():
            try:
                return next(ticks)
            except StopIteration:
                return 10 ** 9

        r = eval_predicate(parse_predicate(self.ADVERSARIAL),
                           EvalParams(minint=-(2 ** 21), maxint=2 ** 21),
                           monotonic=mono)
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "timeout")


class TestInitExpansion:
    DEFS = parse_definitions("BYTE == 1..8 --> {0,1}")

    def test_with_init_definitions_expand(self):
        r = verdict_of("[0,0,0,0,0,0,0,0] : BYTE",
                       EvalParams(init=True), self.DEFS)
        assert r.verdict is Verdict.TRUE

    def test_without_init_definition_is_an_unknown_identifier(self):
        r = verdict_of("[0,0,0,0,0,0,0,0] : BYTE", EvalParams(), self.DEFS)
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unknown-identifier")

    def test_expansion_is_transitive(self):
        defs = parse_definitions("N == 8\nBYTE == 1..N --> {0,1}")
        r = verdict_of("card(BYTE) = 256", EvalParams(init=True), defs)
        assert r.verdict is Verdict.TRUE


class TestFlags:
    def test_kodkod_reverses_enumeration_but_not_verdicts(self):
        for text in ("#x.(x : 1..10 & x > 8)", "!x.(x : 1..10 => x < 9)"):
            plain = verdict_of(text)
            kk = verdict_of(text, EvalParams(kodkod=True))
            assert plain.verdict is kk.verdict

    def test_smt_prunes_guarded_quantifier(self):
        text = "!x.(x : 1..10000 => (x > 9998 => x = 9999))"
        plain = verdict_of(text)
        smt = verdict_of(text, EvalParams(smt=True))
        assert plain.verdict is smt.verdict is Verdict.FALSE

    def test_clpfd_clip_moves_verdict_to_unknown_only(self):
        wide = EvalParams(minint=-(2 ** 30), maxint=2 ** 30)
        narrow = EvalParams(minint=-(2 ** 30), maxint=2 ** 30, clpfd=True)
        text = "!x.(x : 268435450..268435460 => x > 0)"
        assert verdict_of(text, wide).verdict is Verdict.TRUE
        r = verdict_of(text, narrow)
        assert (r.verdict, r.reason) == (Verdict.UNKNOWN, "unbounded-domain")

    def test_flag_neutrality_on_random_corpus(self):
        rng = random.Random(99)
        gen = PredGen(rng)
        combos = [
            ORACLE_PARAMS,
            EvalParams(minint=-ORACLE_BOUND, maxint=ORACLE_BOUND, kodkod=True),
            EvalParams(minint=-ORACLE_BOUND, maxint=ORACLE_BOUND, smt=True),
            EvalParams(minint=-ORACLE_BOUND, maxint=ORACLE_BOUND, clpfd=True),
            EvalParams(minint=-ORACLE_BOUND, maxint=ORACLE_BOUND,
                       kodkod=True, smt=True, clpfd=True),
        ]
        for _ in range(80):
            p = gen.predicate()
            verdicts = {c: eval_predicate(p, c).verdict for c in combos}
            definite = {v for v in verdicts.values() if v is not Verdict.UNKNOWN}
            assert len(definite) <= 1, render(p)


class TestCheckPo:
    def test_hypotheses_imply_goal(self):
        po = ProofObligation(
            name="p", group=Group.COMMON,
            hypotheses=(parse_predicate("n = 4"),),
            goal=parse_predicate("n * n = 16"))
        assert check_po(po).verdict is Verdict.TRUE

    def test_no_hypotheses(self):
        po = ProofObligation(
            name="p", group=Group.COMMON, hypotheses=(),
            goal=parse_predicate("1 < 2"))
        assert check_po(po).verdict is Verdict.TRUE

    def test_antecedent_strengthening_never_flips_to_false(self):
        rng = random.Random(11)
        gen = PredGen(rng, max_space=128)
        strengthened = 0
        while strengthened < 60:
            po = random_po(rng, "p")
            base = check_po(po, ORACLE_PARAMS)
            if base.verdict is not Verdict.TRUE:
                continue
            strengthened += 1
            extra = tuple(po.hypotheses) + (gen.predicate(2),)
            harder = ProofObligation(
                name="p", group=Group.COMMON, hypotheses=extra, goal=po.goal)
            again = check_po(harder, ORACLE_PARAMS)
            assert again.verdict in (Verdict.TRUE, Verdict.UNKNOWN)


def test_oracle_agreement_500():
    rng = random.Random(20260821)
    gen = PredGen(rng)
    counted = 0
    while counted < 500:
        p = gen.predicate()
        try:
            expect = oracle_pred(p, bound=ORACLE_BOUND)
        except OracleSkip:
            continue
        counted += 1
        got = eval_predicate(p, ORACLE_PARAMS)
        want = Verdict.TRUE if expect else Verdict.FALSE
        assert got.verdict is want, render(p)


def test_elapsed_ms_is_reported():
    r = verdict_of("card(1..8 --> {0,1}) = 256")
    assert r.elapsed_ms >= 0
