"""Compile quantified constraint problems into guard-tree bases.

A problem with ordered, quantified, finite-domain variables is compiled into
a base: one guard set per existential variable, where each guard pairs a
value with the (shared, DAG-stored) tree of earlier-move sequences under
which that value still leads to a win.  The compiled base answers game
queries — which moves preserve a winning strategy, whether an alternative
move would have — by tree walks, in time polynomial in the base size.
"""

from .base import (
    BOTTOM,
    TOP,
    Guard,
    GuardedBase,
    NodeStore,
    QcspBase,
    check_compatibility,
    check_optimality,
    deserialize_base,
    guard_consistent,
    guard_lookup,
    guard_set,
    interpret_base,
    interpret_guard_set,
    interpret_tree,
    serialize_base,
)
from .compiler import (
    CompileOptions,
    CompileResult,
    CompileState,
    CompileStats,
    combine_exists,
    combine_forall,
    compile_from,
    compile_problem,
    merge_guard_sets,
    reach_fixpoint,
    search,
)
from .errors import (
    ArityMismatchError,
    BinderMismatchError,
    BudgetExceededError,
    DuplicateVariableError,
    EmptyDomainError,
    ExprSyntaxError,
    GameOverError,
    IncompleteAssignmentError,
    MalformedBaseError,
    MixedBinderError,
    NotExistentialError,
    NotOptimalError,
    ProblemValidationError,
    QcspError,
    SameValueError,
    ShapeMismatchError,
    UnknownVariableError,
)
from .model import (
    ExprConstraint,
    Problem,
    Quantifier,
    TableConstraint,
    Variable,
    dump_problem,
    evaluate,
    evaluate_values,
    load_problem,
    problem_from_json,
    problem_to_json,
    validate_problem,
)
from .query import (
    GamePrefix,
    allowed_moves,
    answer_next_move_choice,
    certificate_from_strategy,
    extract_strategy,
    verify_certificate,
)
from .strategy import (
    LEAF,
    StrategyTree,
    decide_winning,
    decide_winning_from,
    enumerate_winning_strategies,
    is_winning_strategy,
    make_node,
    oracle_calls,
)

__version__ = "0.1.0"

__all__ = [
    "BOTTOM",
    "TOP",
    "LEAF",
    "ArityMismatchError",
    "BinderMismatchError",
    "BudgetExceededError",
    "CompileOptions",
    "CompileResult",
    "CompileState",
    "CompileStats",
    "DuplicateVariableError",
    "EmptyDomainError",
    "ExprConstraint",
    "ExprSyntaxError",
    "GameOverError",
    "GamePrefix",
    "Guard",
    "GuardedBase",
    "IncompleteAssignmentError",
    "MalformedBaseError",
    "MixedBinderError",
    "NodeStore",
    "NotExistentialError",
    "NotOptimalError",
    "Problem",
    "ProblemValidationError",
    "QcspBase",
    "QcspError",
    "Quantifier",
    "SameValueError",
    "ShapeMismatchError",
    "StrategyTree",
    "TableConstraint",
    "UnknownVariableError",
    "Variable",
    "allowed_moves",
    "answer_next_move_choice",
    "certificate_from_strategy",
    "check_compatibility",
    "check_optimality",
    "combine_exists",
    "combine_forall",
    "compile_from",
    "compile_problem",
    "decide_winning",
    "decide_winning_from",
    "deserialize_base",
    "dump_problem",
    "enumerate_winning_strategies",
    "evaluate",
    "evaluate_values",
    "extract_strategy",
    "guard_consistent",
    "guard_lookup",
    "guard_set",
    "interpret_base",
    "interpret_guard_set",
    "interpret_tree",
    "is_winning_strategy",
    "load_problem",
    "make_node",
    "merge_guard_sets",
    "oracle_calls",
    "problem_from_json",
    "problem_to_json",
    "reach_fixpoint",
    "search",
    "serialize_base",
    "validate_problem",
    "verify_certificate",
]
