"""Game-time queries over a compiled base.

Everything here is a tree walk over the frozen base: which values keep a
winning strategy alive after a prefix of moves, whether a different value at
the last existential move would still win, and extracting one concrete
winning strategy.  No operation ever falls back to the brute-force decider,
which is the whole point of compiling first.

Certificates reuse the base formalism: a base whose guards embed exactly one
value choice per existential decision point is self-supporting evidence that
the problem is winnable, checkable by enumerating only the scenarios of the
embedded strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .base import GuardedBase, NodeStore, QcspBase, guard_lookup, guard_set
from .errors import (
    BinderMismatchError,
    GameOverError,
    NotOptimalError,
    SameValueError,
)
from .model import Problem, Quantifier, evaluate_values
from .strategy import LEAF, StrategyTree, check_strategy_shape, make_node


@dataclass(frozen=True)
class GamePrefix:
    """The first k moves of a play, against a fixed base."""

    base: GuardedBase
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) > len(self.base.binder):
            raise GameOverError("prefix longer than the binder")
        for v, value in zip(self.base.binder, self.values):
            if value not in v.domain:
                raise GameOverError(f"{value} outside the domain of {v.name!r}")

    @property
    def next_rank(self) -> int:
        return len(self.values) + 1

    @property
    def is_complete(self) -> bool:
        return len(self.values) == len(self.base.binder)


def _values(prefix) -> tuple[int, ...]:
    if isinstance(prefix, GamePrefix):
        return prefix.values
    return tuple(prefix)


def allowed_moves(b: GuardedBase, prefix: GamePrefix | Sequence[int]) -> set[int]:
    """Values playable next: the guarded ones at an existential rank, the
    whole domain at a universal rank.

    On an optimal base the guarded values are exactly those preserving a
    winning strategy.  A prefix that has walked off every guard tree yields
    the empty set rather than an error.
    """
    values = _values(prefix)
    if len(values) >= len(b.binder):
        raise GameOverError("the prefix already binds every variable")
    v = b.binder[len(values)]
    if v.quantifier is Quantifier.EXISTS:
        return guard_lookup(b, len(values) + 1, values)
    return set(v.domain)


def answer_next_move_choice(
    b: GuardedBase, prefix: GamePrefix | Sequence[int], alternative: int
) -> bool:
    """Would a different value at the last (existential) move still win?

    True iff the alternative is among the allowed moves one step earlier.
    On an optimal base this equals the suffix decision problem's answer.
    """
    values = _values(prefix)
    if not values:
        raise GameOverError("the prefix must contain at least one move")
    if alternative == values[-1]:
        raise SameValueError(f"{alternative} is the value that was played")
    return alternative in allowed_moves(b, values[:-1])


def extract_strategy(b: QcspBase, tie_break: str = "min") -> StrategyTree:
    """One winning strategy of the base's interpretation, by guard walk.

    Picks the smallest allowed value at each existential node (largest with
    ``tie_break="max"``) and branches over the whole domain at universal
    nodes.  A dead end means the base is not optimal.
    """
    if not isinstance(b, GuardedBase):
        raise NotOptimalError("only a guarded base embeds strategies to follow")
    pick = min if tie_break == "min" else max

    def walk(k: int, values: tuple[int, ...]) -> StrategyTree:
        if k == len(b.binder):
            return LEAF
        v = b.binder[k]
        if v.quantifier is Quantifier.EXISTS:
            allowed = guard_lookup(b, k + 1, values)
            if not allowed:
                raise NotOptimalError(
                    f"guard walk dead-ended at {v.name!r} after {values}"
                )
            value = pick(allowed)
            return make_node([(value, walk(k + 1, values + (value,)))])
        return make_node(
            [(value, walk(k + 1, values + (value,))) for value in v.domain]
        )

    return walk(0, ())


# --- certificates ------------------------------------------------------------


def certificate_from_strategy(p: Problem, s: StrategyTree) -> GuardedBase:
    """Embed one strategy into a base with exactly its choices as guards."""
    check_strategy_shape(p, s)
    n = p.size
    chosen: list[dict[int, set[tuple[int, ...]]]] = [dict() for _ in range(n)]

    def collect(node: StrategyTree, k: int, values: tuple[int, ...]) -> None:
        if k == n:
            return
        v = p.variables[k]
        for value, sub in node.branches:
            if v.quantifier is Quantifier.EXISTS:
                chosen[k].setdefault(value, set()).add(values)
            collect(sub, k + 1, values + (value,))

    collect(s, 0, ())
    store = NodeStore()
    guard_sets = []
    for k, v in enumerate(p.variables):
        if v.quantifier is not Quantifier.EXISTS:
            continue
        level_names = [p.variables[j].name for j in range(k)]
        guard_sets.append(
            guard_set(
                (value, store.tree_from_branches(prefixes, level_names))
                for value, prefixes in sorted(chosen[k].items())
            )
        )
    return GuardedBase(binder=p.variables, guard_sets=tuple(guard_sets), store=store)


def verify_certificate(c: QcspBase, p: Problem) -> bool:
    """Shape-check the certificate, then check every embedded scenario.

    Shape: exactly one guarded choice at every reachable existential decision
    point and no branch anywhere that such a walk cannot reach.  Content:
    every scenario the walk induces satisfies the problem.  The walk visits
    one scenario per combination of universal values, the co-NP check at
    desk scale.
    """
    if not isinstance(c, GuardedBase):
        return False
    if tuple(c.binder) != tuple(p.variables):
        raise BinderMismatchError("certificate and problem binders differ")
    n = p.size
    decision_points = [0] * n
    scenarios: list[tuple[int, ...]] = []

    def walk(k: int, values: tuple[int, ...]) -> bool:
        if k == n:
            scenarios.append(values)
            return True
        v = p.variables[k]
        if v.quantifier is Quantifier.EXISTS:
            decision_points[k] += 1
            choices = guard_lookup(c, k + 1, values)
            if len(choices) != 1:
                return False
            return walk(k + 1, values + (choices.pop(),))
        return all(walk(k + 1, values + (value,)) for value in v.domain)

    if not walk(0, ()):
        return False

    memo: dict = {}
    for position in c.existential_positions():
        guards = c.guard_set_at(position)
        total = sum(c.store.branch_count(g.tree, memo) for g in guards)
        if total != decision_points[position - 1]:
            return False

    return all(evaluate_values(p, scenario) for scenario in scenarios)
