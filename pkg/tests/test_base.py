"""Guard trees, interpretation, lookup, compatibility, optimality, wire format."""

from __future__ import annotations

import pytest

from qcsp import (
    BOTTOM,
    TOP,
    MalformedBaseError,
    NodeStore,
    NotExistentialError,
    Problem,
    Quantifier,
    TableConstraint,
    check_compatibility,
    check_optimality,
    decide_winning,
    deserialize_base,
    guard_lookup,
    guard_set,
    interpret_base,
    interpret_guard_set,
    interpret_tree,
    serialize_base,
    validate_problem,
)
from qcsp.base import GuardedBase, base_to_json
from conftest import FULL, build_base, make_problem, random_family, var

# Frozen from the worked interpretation of the wide base's t-guards.
WIDE_T0 = {
    (0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 0, 2), (0, 0, 1, 0),
    (0, 0, 2, 0), (0, 1, 1, 1), (0, 2, 1, 2), (0, 2, 2, 1),
}
WIDE_T_ALL = WIDE_T0 | {
    (1, 1, 0, 0), (1, 1, 0, 1), (1, 1, 0, 2), (1, 1, 1, 0),
    (1, 1, 2, 0), (1, 2, 1, 1), (2, 2, 0, 0), (2, 2, 0, 1),
    (2, 2, 0, 2), (2, 2, 1, 0), (2, 2, 2, 0),
}


def test_leaf_interpretation():
    store = NodeStore()
    assert interpret_tree(store, 0, NodeStore.LEAF) == {(0,)}


def test_single_branch_interpretation():
    store = NodeStore()
    node = store.node("x", [(7, NodeStore.LEAF)])
    assert interpret_tree(store, 5, node) == {(5, 7)}


def test_wide_base_t0_tree_has_eight_tuples(wide_base):
    guards = wide_base.guard_set_by_name("t")
    value0 = [g for g in guards if g.value == 0][0]
    assert interpret_tree(wide_base.store, 0, value0.tree) == WIDE_T0


def test_wide_base_t_guards_have_nineteen_tuples(wide_base):
    guards = wide_base.guard_set_by_name("t")
    result = interpret_guard_set(wide_base.store, guards)
    assert len(result) == 19
    assert result == WIDE_T_ALL


def test_wide_base_x_and_y_interpretations(wide_base):
    assert interpret_guard_set(
        wide_base.store, wide_base.guard_set_by_name("x")
    ) == {(0,), (1,), (2,)}
    assert interpret_guard_set(
        wide_base.store, wide_base.guard_set_by_name("y")
    ) == {(y, x) for y in (0, 1, 2) for x in (0, 1, 2)}


def test_singleton_guard_set():
    store = NodeStore()
    assert interpret_guard_set(store, guard_set([(1, NodeStore.LEAF)])) == {(1,)}


def test_interpret_base_constants():
    assert interpret_base(TOP) is True
    assert interpret_base(BOTTOM) is False


def test_interpret_base_builds_table_problem(wide_base):
    q = interpret_base(wide_base)
    assert isinstance(q, Problem)
    assert all(isinstance(c, TableConstraint) for c in q.constraints)
    by_scope = {c.scope: c.tuples for c in q.constraints}
    assert by_scope[("x",)] == {(0,), (1,), (2,)}
    assert by_scope[("y", "x")] == frozenset(
        (y, x) for y in (0, 1, 2) for x in (0, 1, 2)
    )
    assert by_scope[("t", "x", "y", "z")] == WIDE_T_ALL


def test_guard_lookup_tight_base(tight_base):
    assert guard_lookup(tight_base, 2, (2,)) == {0, 1}
    assert guard_lookup(tight_base, 2, (0,)) == {0}
    assert guard_lookup(tight_base, 4, (2, 1, 2)) == {0}


def test_guard_lookup_off_tree_is_empty(tight_base):
    assert guard_lookup(tight_base, 4, (2, 2, 0)) == set()


def test_guard_lookup_rejects_universal(tight_base):
    with pytest.raises(NotExistentialError):
        guard_lookup(tight_base, 3, (0, 0))


def test_lookup_agrees_with_materialized_interpretation(wide_base, tight_base):
    import itertools

    for b in (wide_base, tight_base):
        for position in b.existential_positions():
            rows = interpret_guard_set(b.store, b.guard_set_at(position))
            domains = [v.domain for v in b.binder[: position - 1]]
            for prefix in itertools.product(*domains):
                walked = guard_lookup(b, position, prefix)
                materialized = {row[0] for row in rows if row[1:] == prefix}
                assert walked == materialized


def test_lookup_walk_equivalence_on_random_compiled_bases():
    import itertools

    from qcsp import compile_problem

    for p in random_family(seed=88, count=40):
        base = compile_problem(validate_problem(p)).base
        if not isinstance(base, GuardedBase):
            continue
        for position in base.existential_positions():
            rows = interpret_guard_set(base.store, base.guard_set_at(position))
            domains = [v.domain for v in base.binder[: position - 1]]
            for prefix in itertools.product(*domains):
                assert guard_lookup(base, position, prefix) == {
                    row[0] for row in rows if row[1:] == prefix
                }


def test_guard_tuple_arity_matches_rank(wide_base):
    for position in wide_base.existential_positions():
        rows = interpret_guard_set(wide_base.store, wide_base.guard_set_at(position))
        assert all(len(row) == position for row in rows)


def test_hash_consing_shares_structure():
    store = NodeStore()
    a = store.node("x", [(0, NodeStore.LEAF), (1, NodeStore.LEAF)])
    b = store.node("x", [(1, NodeStore.LEAF), (0, NodeStore.LEAF)])
    c = store.node("x", [(0, NodeStore.LEAF)])
    d = store.node("y", [(0, NodeStore.LEAF)])
    assert a == b
    assert a != c
    assert c != d  # same shape, different variable label


# --- compatibility ------------------------------------------------------------


def test_wide_base_is_compatible(wide_base, pstar):
    assert check_compatibility(wide_base, pstar) is True


def test_removing_a_root_guard_breaks_compatibility(pstar, wide_base):
    smaller = build_base(
        pstar.variables,
        {
            "x": [(0, [()]), (1, [()])],  # the (2, leaf) guard is discarded
            "y": [(0, FULL), (1, FULL), (2, FULL)],
            "t": [
                (0, sorted(row[1:] for row in WIDE_T0)),
                (1, [(1, 0, 0), (1, 0, 1), (1, 0, 2), (1, 1, 0), (1, 2, 0), (2, 1, 1)]),
                (2, [(2, 0, 0), (2, 0, 1), (2, 0, 2), (2, 1, 0), (2, 2, 0)]),
            ],
        },
    )
    assert check_compatibility(smaller, pstar) is False


def test_top_compatibility():
    tautology = make_problem("Ax Ay", "x + y = y + x")
    contingent = make_problem("Ax Ay", "x = y")
    assert check_compatibility(TOP, tautology) is True
    assert check_compatibility(TOP, contingent) is False


def test_bottom_compatibility():
    assert check_compatibility(BOTTOM, make_problem("Ex", "x = 5")) is True
    assert check_compatibility(BOTTOM, make_problem("Ex", "x = 1")) is False


def test_self_compatibility(wide_base, tight_base):
    for b in (wide_base, tight_base):
        q = interpret_base(b)
        assert check_compatibility(b, q) is True


def test_compatibility_methods_agree(wide_base, tight_base, pstar):
    for b in (wide_base, tight_base):
        assert check_compatibility(b, pstar, method="enumerate") is True
    flipped = make_problem("Ex Ey Az Et", "x != y*z + t")
    for method in ("decision", "enumerate"):
        assert check_compatibility(tight_base, flipped, method=method) is False


def test_compatible_bases_share_strategy_sets(wide_base, tight_base):
    # Both are compatible with the same problem, hence with each other's
    # interpretation, even though their guard sets differ.
    assert check_compatibility(tight_base, interpret_base(wide_base)) is True
    assert check_compatibility(wide_base, interpret_base(tight_base)) is True


# --- optimality ---------------------------------------------------------------


def test_tight_base_is_optimal(tight_base):
    assert check_optimality(tight_base) is True


def test_wide_base_is_not_optimal(wide_base):
    # Its y-guards admit y-values with no winning continuation.
    assert check_optimality(wide_base) is False


def test_rank_one_guards_of_winnable_values_are_optimal():
    # A single-existential base's interpretation IS its guard table, so guard
    # membership and winnability coincide by construction at rank 1.
    p = validate_problem(make_problem("Ex", "x != 1"))
    b = build_base(p.variables, {"x": [(0, [()]), (2, [()])]})
    assert check_optimality(b) is True


def test_constants_are_vacuously_optimal():
    assert check_optimality(TOP) is True
    assert check_optimality(BOTTOM) is True


# --- serialization ------------------------------------------------------------


def test_constant_serialization():
    assert serialize_base(TOP) == b'{"kind":"top"}'
    assert serialize_base(BOTTOM) == b'{"kind":"bottom"}'
    assert deserialize_base(b'{"kind":"top"}') is TOP
    assert deserialize_base(b'{"kind":"bottom"}') is BOTTOM


def test_round_trip_preserves_interpretation(wide_base, tight_base):
    for b in (wide_base, tight_base):
        data = serialize_base(b)
        again = deserialize_base(data)
        assert isinstance(again, GuardedBase)
        assert serialize_base(again) == data
        for position in b.existential_positions():
            assert interpret_guard_set(
                again.store, again.guard_set_at(position)
            ) == interpret_guard_set(b.store, b.guard_set_at(position))


def test_round_trip_preserves_sharing(tight_base):
    again = deserialize_base(serialize_base(tight_base))
    assert again.node_count() == tight_base.node_count()


def test_children_precede_parents(tight_base):
    doc = base_to_json(tight_base)
    seen = set()
    for node in doc["nodes"]:
        for child in node.get("edges", {}).values():
            assert child in seen
        seen.add(node["id"])


def test_wrong_depth_tree_is_malformed(tight_base):
    doc = base_to_json(tight_base)
    # Point a y-guard (needs depth 1) at the leaf (depth 0).
    leaf_id = [n["id"] for n in doc["nodes"] if n.get("leaf")][0]
    doc["guards"]["y"][0]["tree"] = leaf_id
    with pytest.raises(MalformedBaseError):
        deserialize_base(__import__("json").dumps(doc))


def test_guards_must_cover_exactly_the_existentials(tight_base):
    import json

    doc = base_to_json(tight_base)
    extra = dict(doc)
    extra["guards"] = dict(doc["guards"], z=[{"value": 0, "tree": 0}])
    with pytest.raises(MalformedBaseError):
        deserialize_base(json.dumps(extra))
    missing = dict(doc)
    missing["guards"] = {k: v for k, v in doc["guards"].items() if k != "t"}
    with pytest.raises(MalformedBaseError):
        deserialize_base(json.dumps(missing))


def test_forward_reference_is_malformed():
    import json

    doc = {
        "kind": "pair",
        "binder": [{"name": "x", "quantifier": "exists", "domain": [0]}],
        "nodes": [{"id": 0, "var": "x", "edges": {"0": 1}}, {"id": 1, "leaf": True}],
        "guards": {"x": [{"value": 0, "tree": 0}]},
    }
    with pytest.raises(MalformedBaseError):
        deserialize_base(json.dumps(doc))


def test_golden_file_round_trip(pstar):
    """The committed compiled-base bytes survive a parse/re-serialize cycle."""
    from pathlib import Path

    from qcsp import compile_problem

    golden = Path(__file__).parent / "data" / "pstar.base.json"
    data = golden.read_bytes().rstrip(b"\n")
    assert serialize_base(deserialize_base(data)) == data
    assert serialize_base(compile_problem(pstar).base) == data


def test_compatibility_against_compiled_random_family():
    """Hand-off check: the decision method equals literal enumeration."""
    from qcsp import BudgetExceededError, compile_problem

    checked = 0
    for p in random_family(seed=321, count=40):
        validated = validate_problem(p)
        base = compile_problem(validated).base
        if base is BOTTOM:
            continue
        fast = check_compatibility(base, validated, method="decision")
        try:
            slow = check_compatibility(
                base, validated, method="enumerate", node_budget=200000
            )
        except BudgetExceededError:
            continue  # enumeration blows up exactly where the fast path matters
        assert fast == slow
        checked += 1
    assert checked >= 10
