"""Game trees and the brute-force winning-strategy oracle.

A strategy for a problem with n variables is a tree of depth n: the node at
depth k stands for the rank-(k+1) variable, an existential node commits to a
single value edge, a universal node branches over its whole domain, and every
root-to-leaf path spells a scenario.  The strategy wins when all of its
scenarios satisfy the constraints.

The deciders here follow the recursive semantics literally (for-all requires
every value to succeed, exists requires at least one) and serve as ground
truth for the compiler and the query engine.  They are meant for desk-scale
problems; enumeration takes an optional node budget and fails loudly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import BudgetExceededError, ShapeMismatchError
from .model import Problem, Quantifier, evaluate_values

# Oracle-call instrumentation: bumped by every decision/enumeration entry
# point so callers can assert that query paths never fall back to search.
_oracle_calls = 0


def oracle_calls() -> int:
    """Total decide/enumerate invocations since import."""
    return _oracle_calls


def _bump() -> None:
    global _oracle_calls
    _oracle_calls += 1


@dataclass(frozen=True)
class StrategyTree:
    """Value-labeled edges to subtrees, sorted by value; no edges = leaf."""

    branches: tuple[tuple[int, "StrategyTree"], ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.branches

    def child(self, value: int) -> "StrategyTree | None":
        for val, sub in self.branches:
            if val == value:
                return sub
        return None

    def node_count(self) -> int:
        return 1 + sum(sub.node_count() for _, sub in self.branches)

    def scenarios(self) -> Iterator[tuple[int, ...]]:
        if self.is_leaf:
            yield ()
            return
        for val, sub in self.branches:
            for rest in sub.scenarios():
                yield (val,) + rest


LEAF = StrategyTree()


def make_node(branches: Sequence[tuple[int, StrategyTree]]) -> StrategyTree:
    return StrategyTree(tuple(sorted(branches)))


# --- decision ----------------------------------------------------------------


@lru_cache(maxsize=262144)
def _wins(p: Problem, prefix: tuple[int, ...]) -> bool:
    k = len(prefix)
    if k == p.size:
        return evaluate_values(p, prefix)
    v = p.variables[k]
    if v.quantifier is Quantifier.EXISTS:
        return any(_wins(p, prefix + (val,)) for val in v.domain)
    return all(_wins(p, prefix + (val,)) for val in v.domain)


def decide_winning(p: Problem) -> bool:
    """True iff the problem admits a winning strategy."""
    _bump()
    return _wins(p, ())


def decide_winning_from(p: Problem, prefix: Sequence[int]) -> bool:
    """Decide the suffix problem once the first ``len(prefix)`` ranks are fixed."""
    _bump()
    return _wins(p, tuple(prefix))


def clear_oracle_cache() -> None:
    _wins.cache_clear()


# --- enumeration -------------------------------------------------------------


def enumerate_winning_strategies(
    p: Problem,
    limit: int | None = None,
    node_budget: int | None = None,
) -> list[StrategyTree]:
    """All winning strategies (or the first ``limit``), deterministically.

    Order is lexicographic by existential choices, values ascending.  When
    ``node_budget`` is given, more than that many constructed tree nodes
    raises BudgetExceededError.
    """
    _bump()
    built = 0

    def make(branches: tuple[tuple[int, StrategyTree], ...]) -> StrategyTree:
        nonlocal built
        built += 1
        if node_budget is not None and built > node_budget:
            raise BudgetExceededError(f"strategy enumeration exceeded {node_budget} nodes")
        return StrategyTree(branches)

    def gen(k: int, prefix: tuple[int, ...]) -> Iterator[StrategyTree]:
        if k == p.size:
            if evaluate_values(p, prefix):
                yield LEAF
            return
        v = p.variables[k]
        if v.quantifier is Quantifier.EXISTS:
            for val in v.domain:
                for sub in gen(k + 1, prefix + (val,)):
                    yield make(((val, sub),))
        else:
            per_value = [list(gen(k + 1, prefix + (val,))) for val in v.domain]
            if any(not subs for subs in per_value):
                return
            for combo in itertools.product(*per_value):
                yield make(tuple(zip(v.domain, combo)))

    out = gen(0, ())
    if limit is not None:
        out = itertools.islice(out, limit)
    return list(out)


# --- checking ----------------------------------------------------------------


def check_strategy_shape(p: Problem, s: StrategyTree) -> None:
    """Raise ShapeMismatchError unless ``s`` is a well-formed strategy for ``p``."""

    def walk(node: StrategyTree, k: int) -> None:
        if k == p.size:
            if not node.is_leaf:
                raise ShapeMismatchError(f"tree deeper than the {p.size}-variable binder")
            return
        if node.is_leaf:
            raise ShapeMismatchError(f"leaf at depth {k}, expected depth {p.size}")
        v = p.variables[k]
        values = [val for val, _ in node.branches]
        if len(set(values)) != len(values):
            raise ShapeMismatchError(f"duplicate edge labels at {v.name!r}")
        if any(val not in v.domain for val in values):
            raise ShapeMismatchError(f"edge label outside the domain of {v.name!r}")
        if v.quantifier is Quantifier.EXISTS:
            if len(values) != 1:
                raise ShapeMismatchError(
                    f"existential {v.name!r} must have exactly one child, got {len(values)}"
                )
        else:
            if tuple(sorted(values)) != v.domain:
                raise ShapeMismatchError(
                    f"universal {v.name!r} must branch over its whole domain"
                )
        for _, sub in node.branches:
            walk(sub, k + 1)

    walk(s, 0)


def is_winning_strategy(p: Problem, s: StrategyTree) -> bool:
    """True iff every scenario of the (shape-checked) strategy satisfies ``p``."""
    check_strategy_shape(p, s)
    return all(evaluate_values(p, scenario) for scenario in s.scenarios())
