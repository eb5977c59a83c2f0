"""Use the compiled base as a game companion.

Story: the existential player memorized one winning strategy (open with x=2,
then y=1, then answer t = 2 - z).  They play x=2, and then for some outside
reason y=1 is unavailable.  Recomputing from scratch would cost a full
search; the compiled base answers instantly which alternatives still win.
"""

from qcsp import (
    ExprConstraint,
    Problem,
    Quantifier,
    Variable,
    allowed_moves,
    answer_next_move_choice,
    compile_problem,
    extract_strategy,
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
base = compile_problem(problem).base

print("opening moves that keep a win available:", sorted(allowed_moves(base, ())))
print("after x=2, winning y values:", sorted(allowed_moves(base, (2,))))

print("\nplayed x=2 y=1; would y=0 also have won?",
      answer_next_move_choice(base, (2, 1), 0))
print("played x=2 y=1; would y=2 also have won?",
      answer_next_move_choice(base, (2, 1), 2))

print("\nafter x=2 y=1, the adversary may pick any z:",
      sorted(allowed_moves(base, (2, 1))))
for z in D:
    print(f"  if z={z}, winning t values:", sorted(allowed_moves(base, (2, 1, z))))

print("\none full strategy, smallest values first:")
smallest = extract_strategy(base, tie_break="min")
print("  scenarios:", sorted(smallest.scenarios()))
print("one full strategy, largest values first:")
largest = extract_strategy(base, tie_break="max")
print("  scenarios:", sorted(largest.scenarios()))
