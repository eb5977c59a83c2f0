"""Game-time queries: allowed moves, what-ifs, extraction, certificates."""

from __future__ import annotations

import itertools

import pytest

from qcsp import (
    BOTTOM,
    BinderMismatchError,
    GameOverError,
    GamePrefix,
    NotOptimalError,
    SameValueError,
    StrategyTree,
    allowed_moves,
    answer_next_move_choice,
    certificate_from_strategy,
    compile_problem,
    decide_winning_from,
    enumerate_winning_strategies,
    extract_strategy,
    guard_consistent,
    is_winning_strategy,
    make_node,
    oracle_calls,
    validate_problem,
    verify_certificate,
)
from qcsp.base import GuardedBase
from conftest import make_problem, random_family


def test_allowed_moves_on_the_optimal_base(tight_base):
    assert allowed_moves(tight_base, ()) == {0, 1, 2}
    assert allowed_moves(tight_base, (2,)) == {0, 1}
    assert allowed_moves(tight_base, (2, 1)) == {0, 1, 2}  # universal turn
    assert allowed_moves(tight_base, (2, 1, 2)) == {0}


def test_allowed_moves_complete_prefix_is_game_over(tight_base):
    with pytest.raises(GameOverError):
        allowed_moves(tight_base, (0, 0, 0, 0))


def test_allowed_moves_accepts_game_prefix(tight_base):
    prefix = GamePrefix(base=tight_base, values=(2,))
    assert allowed_moves(tight_base, prefix) == {0, 1}


def test_game_prefix_validates_values(tight_base):
    with pytest.raises(GameOverError):
        GamePrefix(base=tight_base, values=(9,))


def test_next_move_choice(tight_base):
    assert answer_next_move_choice(tight_base, (2, 1), 0) is True
    assert answer_next_move_choice(tight_base, (2, 1), 2) is False
    with pytest.raises(SameValueError):
        answer_next_move_choice(tight_base, (2, 1), 1)


def test_next_move_choice_matches_oracle(tight_base, pstar_validated):
    # The alternative value wins iff the suffix problem with it fixed does.
    for alt in (0, 2):
        expected = decide_winning_from(pstar_validated, (2, alt))
        assert answer_next_move_choice(tight_base, (2, 1), alt) is expected


def test_extract_min_is_the_all_zero_strategy(tight_base, pstar):
    s = extract_strategy(tight_base, tie_break="min")
    assert is_winning_strategy(pstar, s)
    scenarios = sorted(s.scenarios())
    assert scenarios == [(0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 2, 0)]


def test_extract_max_plays_two_one(tight_base, pstar):
    s = extract_strategy(tight_base, tie_break="max")
    assert is_winning_strategy(pstar, s)
    assert sorted(s.scenarios()) == [(2, 1, 0, 2), (2, 1, 1, 1), (2, 1, 2, 0)]


def test_extract_from_bottom_fails(pstar):
    with pytest.raises(NotOptimalError):
        extract_strategy(BOTTOM)


def test_extract_dead_ends_on_a_non_optimal_foreign_base(pstar):
    # A base guarding a value with no continuation anywhere below.
    from conftest import build_base

    broken = build_base(
        pstar.variables,
        {
            "x": [(1, [()])],
            "y": [(0, [(0,)])],
            "t": [(0, [(0, 0, 0)])],  # unreachable from x=1
        },
    )
    with pytest.raises(NotOptimalError):
        extract_strategy(broken)


def test_queries_never_call_the_oracle(tight_base):
    before = oracle_calls()
    allowed_moves(tight_base, (2,))
    answer_next_move_choice(tight_base, (2, 1), 0)
    extract_strategy(tight_base)
    assert oracle_calls() == before


def test_allowed_moves_against_oracle_on_random_family():
    for p in random_family(seed=55, count=50):
        validated = validate_problem(p)
        base = compile_problem(validated).base
        if not isinstance(base, GuardedBase):
            continue
        n = len(base.binder)

        def explore(prefix: tuple[int, ...]) -> None:
            if len(prefix) == n:
                return
            v = base.binder[len(prefix)]
            before = oracle_calls()
            moves = allowed_moves(base, prefix)
            assert oracle_calls() == before, "query path must stay walk-only"
            expected = {
                value
                for value in v.domain
                if decide_winning_from(validated, prefix + (value,))
            }
            assert moves == expected, (p, prefix, v.name)
            if v.is_existential:
                for value in moves:
                    explore(prefix + (value,))
            else:
                for value in v.domain:
                    explore(prefix + (value,))

        explore(())


def test_guard_consistency_filter(tight_base):
    assert guard_consistent(tight_base, (2, 1)) is True
    assert guard_consistent(tight_base, (2, 2)) is False
    assert guard_consistent(tight_base, (2, 1, 0)) is True  # universal component


# --- certificates ---------------------------------------------------------------


def test_certificate_of_each_winning_strategy_verifies(pstar):
    strategies = enumerate_winning_strategies(pstar)
    assert len(strategies) == 4
    for s in strategies:
        cert = certificate_from_strategy(pstar, s)
        assert verify_certificate(cert, pstar) is True


def mutate_leaf(tree: StrategyTree, path: tuple[int, ...], new_value: int) -> StrategyTree:
    """Replace the edge value at the end of ``path`` (a scenario) with ``new_value``."""
    if len(path) == 1:
        (value, sub), = tree.branches
        assert value == path[0] and sub.is_leaf
        return make_node([(new_value, sub)])
    branches = []
    for value, sub in tree.branches:
        if value == path[0]:
            branches.append((value, mutate_leaf(sub, path[1:], new_value)))
        else:
            branches.append((value, sub))
    return make_node(branches)


def test_mutated_certificates_fail(pstar):
    for s in enumerate_winning_strategies(pstar):
        for scenario in s.scenarios():
            for other in (0, 1, 2):
                if other == scenario[-1]:
                    continue
                mutated = mutate_leaf(s, scenario, other)
                assert is_winning_strategy(pstar, mutated) is False
                cert = certificate_from_strategy(pstar, mutated)
                assert verify_certificate(cert, pstar) is False


def test_two_choices_at_a_decision_point_fail_the_shape_check(pstar, tight_base):
    # The compiled base guards several x values: not a certificate.
    assert verify_certificate(tight_base, pstar) is False


def test_binder_mismatch_raises(pstar):
    other = make_problem("Ex Ey Az Et", "x = y*z + t", domain=(0, 1))
    s = enumerate_winning_strategies(pstar)[0]
    cert = certificate_from_strategy(pstar, s)
    with pytest.raises(BinderMismatchError):
        verify_certificate(cert, other)


def test_junk_branches_fail_the_shape_check(pstar):
    s = enumerate_winning_strategies(pstar)[0]
    cert = certificate_from_strategy(pstar, s)
    store = cert.store
    # Add an unreachable branch to the y guard tree: from x=1 instead of x=0.
    guards = dict((g.value, g.tree) for g in cert.guard_set_by_name("y"))
    y_tree = guards[0]
    widened = store.node("x", store.edges(y_tree) + ((1, store.LEAF),))
    new_sets = []
    for position in cert.existential_positions():
        gs = cert.guard_set_at(position)
        if cert.binder[position - 1].name == "y":
            from qcsp import guard_set

            gs = guard_set([(0, widened)])
        new_sets.append(gs)
    junky = GuardedBase(binder=cert.binder, guard_sets=tuple(new_sets), store=store)
    assert verify_certificate(junky, pstar) is False


def test_certificates_agree_with_strategy_checks_on_random_family(pstar):
    for p in random_family(seed=66, count=30):
        validated = validate_problem(p)
        for s in enumerate_winning_strategies(validated, limit=5):
            cert = certificate_from_strategy(validated, s)
            assert verify_certificate(cert, validated) is True
