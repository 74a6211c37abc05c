"""bevalkit: parse, evaluate, prove, and persist classical-B predicates."""

from .ast import (
    App,
    BinOp,
    Bool,
    Builtin,
    DefinitionError,
    DefinitionTable,
    Expr,
    Ident,
    Int,
    Quantifier,
    SetExt,
    UnaryOp,
)
from .evaluator import (
    EvalParams,
    EvalResult,
    EvalTimeout,
    Verdict,
    check_po,
    eval_expression,
    eval_predicate,
    expand,
)
from .parser import ParseError, parse_definitions, parse_predicate
from .pipeline import (
    GroupCounts,
    PipelineReport,
    gain,
    render_report,
    report_csv,
    run_pipeline,
)
from .prover import (
    FORCE_1,
    FORCE_2,
    FORCE_3,
    Force,
    MissingRuleError,
    ProofOutcome,
    apply_user_pass,
    normalize,
    prove,
)
from .render import render
from .rules import (
    Rule,
    RuleError,
    UserPass,
    append_rule,
    append_user_pass_entry,
    fixed_clock,
    make_rule,
    parse_pmm,
    parse_user_pass,
    render_rule,
    render_user_pass,
    system_clock,
)
from .store import (
    Component,
    Group,
    InterchangeError,
    ProofObligation,
    Status,
    import_component,
    list_pos,
    load_component,
    render_component,
    reset_status,
    save_component,
    set_status,
)

__all__ = [name for name in dir() if not name.startswith("_")]
