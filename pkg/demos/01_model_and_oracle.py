"""Build a quantified problem, evaluate scenarios, and count winning strategies.

The running example throughout these demos is the four-variable game

    exists x  exists y  for-all z  exists t :  x = y*z + t

over domains {0, 1, 2}.  The existential player picks x and y, the adversary
picks any z, and the existential player answers with t.
"""

from qcsp import (
    ExprConstraint,
    Problem,
    Quantifier,
    Variable,
    decide_winning,
    enumerate_winning_strategies,
    evaluate,
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

validated = validate_problem(problem)
print("constraint expanded to a table with",
      len(validated.constraints[0].tuples), "rows")

print("\nscenario x=0 y=0 z=2 t=0 satisfies the constraint:",
      evaluate(problem, {"x": 0, "y": 0, "z": 2, "t": 0}))
print("scenario x=0 y=1 z=1 t=0 satisfies the constraint:",
      evaluate(problem, {"x": 0, "y": 1, "z": 1, "t": 0}))

print("\nthe game is winnable for the existential player:", decide_winning(validated))

strategies = enumerate_winning_strategies(validated)
print("number of winning strategies:", len(strategies))
print("their scenario sets:")
for s in strategies:
    print("  ", sorted(s.scenarios()))

flipped = validate_problem(
    Problem(
        variables=(
            Variable("x", Quantifier.FORALL, D),
            Variable("y", Quantifier.FORALL, D),
            Variable("z", Quantifier.EXISTS, D),
            Variable("t", Quantifier.EXISTS, D),
        ),
        constraints=(ExprConstraint("x = y*z + t"),),
    )
)
print("\nwith x and y universal and z, t existential, the count grows to:",
      len(enumerate_winning_strategies(flipped)))
