"""Compile the running example and look inside the resulting base.

The compiled base keeps, for every existential variable, a guard per value:
the value paired with a tree of earlier-move sequences under which playing
it still leads to a certain win.  Equal subtrees are stored once, so the
guard forest is a DAG.
"""

from pathlib import Path

from qcsp import (
    ExprConstraint,
    Problem,
    Quantifier,
    Variable,
    check_compatibility,
    check_optimality,
    compile_problem,
    interpret_guard_set,
    interpret_tree,
    serialize_base,
    validate_problem,
)

D = (0, 1, 2)
problem = Problem(
    variables=(
        Variable("x", Quantifier.EXISTS, D),
        Variable("y", Quantifier.EXISTS, D),
        Variable("z", Quantifier.FORALL, D),
        Variable("t", Quantifier.EXISTS, D),
    ),
    constraints=(ExprConstraint("x = y*z + t"),),
)

result = compile_problem(problem)
base = result.base
print("winning:", result.winning)
print("stats:", result.stats.as_dict())

for position in base.existential_positions():
    variable = base.binder[position - 1]
    guards = base.guard_set_at(position)
    print(f"\nguards for {variable.name} (rank {position}):")
    for guard in guards:
        rows = sorted(interpret_tree(base.store, guard.value, guard.tree))
        print(f"  value {guard.value}: {rows}")
    union = interpret_guard_set(base.store, guards)
    print(f"  interpretation has {len(union)} tuples of arity {position}")

unshared = 0
def count_unshared(nid, store):
    return 1 + sum(count_unshared(child, store) for _, child in store.edges(nid))
for gs in base.guard_sets:
    for g in gs:
        unshared += count_unshared(g.tree, base.store)
print(f"\nDAG nodes: {base.node_count()} (the same trees copied out would need {unshared})")

validated = validate_problem(problem)
print("compatible with the source problem:", check_compatibility(base, validated))
print("optimal:", check_optimality(base))

out = Path("/tmp/running-example.base.json")
out.write_bytes(serialize_base(base) + b"\n")
print("\nserialized base written to", out)
