"""Shared fixtures: the running example, hand-built bases, random problems."""

from __future__ import annotations

import itertools
import random

import pytest

from qcsp import (
    ExprConstraint,
    GuardedBase,
    NodeStore,
    Problem,
    Quantifier,
    TableConstraint,
    Variable,
    guard_set,
    validate_problem,
)

D012 = (0, 1, 2)


def var(name: str, quantifier: Quantifier, domain=D012) -> Variable:
    return Variable(name=name, quantifier=quantifier, domain=tuple(domain))


def make_problem(binder: str, constraint: str, domain=D012) -> Problem:
    """``binder`` like "Ex Ey Az Et" with one comparison constraint."""
    variables = []
    for chunk in binder.split():
        q = Quantifier.EXISTS if chunk[0] == "E" else Quantifier.FORALL
        variables.append(var(chunk[1:], q, domain))
    return Problem(
        variables=tuple(variables), constraints=(ExprConstraint(text=constraint),)
    )


@pytest.fixture(scope="session")
def pstar() -> Problem:
    """The running example: exists x, y; for all z; exists t; x = y*z + t."""
    return make_problem("Ex Ey Az Et", "x = y*z + t")


@pytest.fixture(scope="session")
def pstar_validated(pstar) -> Problem:
    return validate_problem(pstar)


@pytest.fixture(scope="session")
def forall2() -> Problem:
    """The all-universal-prefix variant: for all x, y; exists z, t."""
    return make_problem("Ax Ay Ez Et", "x = y*z + t")


def build_base(binder, guard_branches) -> GuardedBase:
    """Assemble a base from {name: [(value, branch set)]} descriptions."""
    store = NodeStore()
    names = [v.name for v in binder]
    guard_sets = []
    for position, v in enumerate(binder, start=1):
        if v.quantifier is not Quantifier.EXISTS:
            continue
        level_names = names[: position - 1]
        pairs = []
        for value, branches in guard_branches[v.name]:
            pairs.append((value, store.tree_from_branches(branches, level_names)))
        guard_sets.append(guard_set(pairs))
    return GuardedBase(binder=tuple(binder), guard_sets=tuple(guard_sets), store=store)


FULL = [(0,), (1,), (2,)]


@pytest.fixture(scope="session")
def wide_base(pstar) -> GuardedBase:
    """The hand-built compatible (not optimal) base for the running example."""
    return build_base(
        pstar.variables,
        {
            "x": [(0, [()]), (1, [()]), (2, [()])],
            "y": [(0, FULL), (1, FULL), (2, FULL)],
            "t": [
                (
                    0,
                    [
                        (0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 0),
                        (0, 2, 0), (1, 1, 1), (2, 1, 2), (2, 2, 1),
                    ],
                ),
                (
                    1,
                    [
                        (1, 0, 0), (1, 0, 1), (1, 0, 2),
                        (1, 1, 0), (1, 2, 0), (2, 1, 1),
                    ],
                ),
                (
                    2,
                    [(2, 0, 0), (2, 0, 1), (2, 0, 2), (2, 1, 0), (2, 2, 0)],
                ),
            ],
        },
    )


@pytest.fixture(scope="session")
def tight_base(pstar) -> GuardedBase:
    """The hand-built optimal base for the running example."""
    return build_base(
        pstar.variables,
        {
            "x": [(0, [()]), (1, [()]), (2, [()])],
            "y": [(0, FULL), (1, [(2,)])],
            "t": [
                (0, [(0, 0, 0), (0, 0, 1), (0, 0, 2), (2, 1, 2)]),
                (1, [(1, 0, 0), (1, 0, 1), (1, 0, 2), (2, 1, 1)]),
                (2, [(2, 0, 0), (2, 0, 1), (2, 0, 2), (2, 1, 0)]),
            ],
        },
    )


# --- random problem family ----------------------------------------------------


def random_problem(rng: random.Random) -> Problem:
    """A small problem: up to 4 variables, domains up to 3, 1-3 random tables."""
    n = rng.randint(1, 4)
    variables = []
    for i in range(n):
        size = rng.randint(1, 3)
        domain = tuple(sorted(rng.sample(range(4), size)))
        q = Quantifier.EXISTS if rng.random() < 0.5 else Quantifier.FORALL
        variables.append(Variable(name=f"v{i + 1}", quantifier=q, domain=domain))
    constraints = []
    for _ in range(rng.randint(1, 3)):
        width = rng.randint(1, n)
        picks = sorted(rng.sample(range(n), width))
        scope = tuple(variables[i].name for i in picks)
        rows = [
            combo
            for combo in itertools.product(*(variables[i].domain for i in picks))
            if rng.random() < 0.65
        ]
        constraints.append(TableConstraint(scope=scope, tuples=frozenset(rows)))
    return Problem(variables=tuple(variables), constraints=tuple(constraints))


def random_family(seed: int, count: int) -> list[Problem]:
    rng = random.Random(seed)
    return [random_problem(rng) for _ in range(count)]
