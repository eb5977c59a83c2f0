"""Quantified constraint problems over finite integer domains.

A problem is an ordered list of quantified variables (the binder; list
position is the rank) plus a conjunction of constraints.  Constraints come in
two forms: extensional tables over a scope of variables, and arithmetic
comparisons (``x = y*z + t``) which are input sugar — validation expands each
comparison into an equivalent table over its scope, so everything downstream
sees tables only.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, Sequence, Union

from .errors import (
    ArityMismatchError,
    DuplicateVariableError,
    EmptyDomainError,
    ExprSyntaxError,
    IncompleteAssignmentError,
    UnknownVariableError,
)


class Quantifier(Enum):
    EXISTS = "exists"
    FORALL = "forall"


@dataclass(frozen=True)
class Variable:
    """One binder entry.  Rank is the 1-based position in the problem."""

    name: str
    quantifier: Quantifier
    domain: tuple[int, ...]

    @property
    def is_existential(self) -> bool:
        return self.quantifier is Quantifier.EXISTS


@dataclass(frozen=True)
class TableConstraint:
    """Extensional constraint: the scope tuple must be one of ``tuples``."""

    scope: tuple[str, ...]
    tuples: frozenset[tuple[int, ...]]


@dataclass(frozen=True)
class ExprConstraint:
    """Comparison of two arithmetic terms, e.g. ``x = y*z + t``."""

    text: str


Constraint = Union[TableConstraint, ExprConstraint]

Assignment = Mapping[str, int]


@dataclass(frozen=True)
class Problem:
    """A binder (rank-ordered quantified variables) plus constraints."""

    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]

    @property
    def size(self) -> int:
        return len(self.variables)

    def variable_at(self, rank: int) -> Variable:
        """The rank-``rank`` variable (1-based)."""
        return self.variables[rank - 1]

    def rank_of(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i + 1
        raise UnknownVariableError(f"no variable named {name!r}")

    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def scenarios(self) -> Iterator[tuple[int, ...]]:
        """Every complete value sequence, in lexicographic domain order."""
        return itertools.product(*(v.domain for v in self.variables))

    def assignment_for(self, values: Sequence[int]) -> dict[str, int]:
        """Bindings for the first ``len(values)`` ranks."""
        return {v.name: val for v, val in zip(self.variables, values)}


# --- arithmetic comparison parsing -----------------------------------------

_COMPARATORS = ("<=", ">=", "!=", "=", "<", ">")

_OPS = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text[i : i + 2] in ("<=", ">=", "!="):
            tokens.append(text[i : i + 2])
            i += 2
            continue
        if ch in "=<>+-*()":
            tokens.append(ch)
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r} at position {i} in {text!r}")
    return tokens


class _ExprParser:
    """Recursive descent for ``term cmp term``; ``*`` binds tighter than ``+``/``-``."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> str:
        tok = self._peek()
        if tok is None:
            raise ExprSyntaxError(f"unexpected end of expression in {self.text!r}")
        self.pos += 1
        return tok

    def parse_comparison(self):
        left = self._sum()
        op = self._peek()
        if op not in _COMPARATORS:
            raise ExprSyntaxError(f"expected a comparator in {self.text!r}")
        self._take()
        right = self._sum()
        if self._peek() is not None:
            raise ExprSyntaxError(f"trailing tokens after comparison in {self.text!r}")
        return (op, left, right)

    def _sum(self):
        node = self._product()
        while self._peek() in ("+", "-"):
            op = self._take()
            node = (op, node, self._product())
        return node

    def _product(self):
        node = self._atom()
        while self._peek() == "*":
            self._take()
            node = ("*", node, self._atom())
        return node

    def _atom(self):
        tok = self._take()
        if tok == "(":
            node = self._sum()
            if self._take() != ")":
                raise ExprSyntaxError(f"unbalanced parenthesis in {self.text!r}")
            return node
        if tok.isdigit():
            return ("num", int(tok))
        if tok[0].isalpha() or tok[0] == "_":
            return ("var", tok)
        raise ExprSyntaxError(f"unexpected token {tok!r} in {self.text!r}")


def _expr_vars(node, acc: set[str]) -> set[str]:
    kind = node[0]
    if kind == "var":
        acc.add(node[1])
    elif kind == "num":
        pass
    else:
        _expr_vars(node[1], acc)
        _expr_vars(node[2], acc)
    return acc


def _expr_eval(node, bindings: Mapping[str, int]) -> int:
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "var":
        return bindings[node[1]]
    a = _expr_eval(node[1], bindings)
    b = _expr_eval(node[2], bindings)
    if kind == "+":
        return a + b
    if kind == "-":
        return a - b
    return a * b


def parse_comparison(text: str):
    """Parse an arithmetic comparison; raises ExprSyntaxError on bad input."""
    return _ExprParser(text).parse_comparison()


def _eval_comparison(ast, bindings: Mapping[str, int]) -> bool:
    op, left, right = ast
    return _OPS[op](_expr_eval(left, bindings), _expr_eval(right, bindings))


def expr_scope(p: Problem, c: ExprConstraint) -> tuple[str, ...]:
    """Variables mentioned by ``c``, in binder order."""
    mentioned = _expr_vars(parse_comparison(c.text), set())
    declared = p.names()
    for name in mentioned:
        if name not in declared:
            raise UnknownVariableError(
                f"constraint {c.text!r} mentions undeclared variable {name!r}"
            )
    return tuple(name for name in declared if name in mentioned)


def expand_expr(p: Problem, c: ExprConstraint) -> TableConstraint:
    """Ground ``c`` into an equivalent table over its scope (domain product)."""
    scope = expr_scope(p, c)
    ast = parse_comparison(c.text)
    domains = [p.variable_at(p.rank_of(name)).domain for name in scope]
    rows = frozenset(
        combo
        for combo in itertools.product(*domains)
        if _eval_comparison(ast, dict(zip(scope, combo)))
    )
    return TableConstraint(scope=scope, tuples=rows)


# --- validation --------------------------------------------------------------


def validate_problem(p: Problem) -> Problem:
    """Check every structural invariant and return the internal form.

    Arithmetic comparisons are expanded into equivalent tables, so the
    returned problem carries table constraints only.  Raises a subclass of
    ProblemValidationError naming the offending entity.
    """
    seen: set[str] = set()
    for v in p.variables:
        if v.name in seen:
            raise DuplicateVariableError(f"variable {v.name!r} declared twice")
        seen.add(v.name)
        if not v.domain:
            raise EmptyDomainError(f"variable {v.name!r} has an empty domain")
        if list(v.domain) != sorted(set(v.domain)):
            raise EmptyDomainError(
                f"domain of {v.name!r} must be ascending with no duplicates"
            )

    constraints: list[Constraint] = []
    for c in p.constraints:
        if isinstance(c, TableConstraint):
            for name in c.scope:
                if name not in seen:
                    raise UnknownVariableError(
                        f"constraint scope mentions undeclared variable {name!r}"
                    )
            arity = len(c.scope)
            for row in c.tuples:
                if len(row) != arity:
                    raise ArityMismatchError(
                        f"tuple {row} has arity {len(row)}, scope {c.scope} needs {arity}"
                    )
                for name, value in zip(c.scope, row):
                    domain = p.variable_at(p.rank_of(name)).domain
                    if value not in domain:
                        raise ArityMismatchError(
                            f"tuple {row} puts {value} outside the domain of {name!r}"
                        )
            constraints.append(c)
        else:
            constraints.append(expand_expr(p, c))
    return Problem(variables=p.variables, constraints=tuple(constraints))


# --- evaluation --------------------------------------------------------------


def evaluate(p: Problem, assignment: Assignment) -> bool:
    """True iff every constraint holds under a complete assignment."""
    missing = [v.name for v in p.variables if v.name not in assignment]
    if missing:
        raise IncompleteAssignmentError(f"unbound variables: {', '.join(missing)}")
    for c in p.constraints:
        if isinstance(c, TableConstraint):
            if tuple(assignment[name] for name in c.scope) not in c.tuples:
                return False
        else:
            if not _eval_comparison(parse_comparison(c.text), assignment):
                return False
    return True


def evaluate_values(p: Problem, values: Sequence[int]) -> bool:
    """``evaluate`` over a full scenario given positionally."""
    return evaluate(p, p.assignment_for(values))


# --- JSON wire format --------------------------------------------------------


def problem_from_json(doc: dict) -> Problem:
    """Build a problem from the wire format; list order is the binder order."""
    variables = []
    for entry in doc["variables"]:
        variables.append(
            Variable(
                name=str(entry["name"]),
                quantifier=Quantifier(entry["quantifier"]),
                domain=tuple(int(x) for x in entry["domain"]),
            )
        )
    constraints: list[Constraint] = []
    for entry in doc.get("constraints", []):
        kind = entry["type"]
        if kind == "expr":
            constraints.append(ExprConstraint(text=str(entry["text"])))
        elif kind == "table":
            constraints.append(
                TableConstraint(
                    scope=tuple(str(s) for s in entry["scope"]),
                    tuples=frozenset(tuple(int(x) for x in row) for row in entry["tuples"]),
                )
            )
        else:
            raise ExprSyntaxError(f"unknown constraint type {kind!r}")
    return Problem(variables=tuple(variables), constraints=tuple(constraints))


def problem_to_json(p: Problem) -> dict:
    doc: dict = {
        "variables": [
            {"name": v.name, "quantifier": v.quantifier.value, "domain": list(v.domain)}
            for v in p.variables
        ],
        "constraints": [],
    }
    for c in p.constraints:
        if isinstance(c, TableConstraint):
            doc["constraints"].append(
                {
                    "type": "table",
                    "scope": list(c.scope),
                    "tuples": sorted(list(row) for row in c.tuples),
                }
            )
        else:
            doc["constraints"].append({"type": "expr", "text": c.text})
    return doc


def load_problem(text: str) -> Problem:
    return problem_from_json(json.loads(text))


def dump_problem(p: Problem) -> str:
    return json.dumps(problem_to_json(p), indent=2, sort_keys=False)
