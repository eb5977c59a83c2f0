"""Certificates: checkable evidence that a problem is winnable.

A solver's yes/no answer is hard to trust on its own.  Embedding one winning
strategy into a base - exactly one guarded value per existential decision
point - yields a certificate that anyone can verify by replaying only the
scenarios of that strategy against the constraints.
"""

from qcsp import (
    ExprConstraint,
    Problem,
    Quantifier,
    Variable,
    certificate_from_strategy,
    enumerate_winning_strategies,
    make_node,
    serialize_base,
    validate_problem,
    verify_certificate,
    LEAF,
)

D = (0, 1, 2)
problem = validate_problem(
    Problem(
        variables=(
            Variable("x", Quantifier.EXISTS, D),
            Variable("y", Quantifier.EXISTS, D),
            Variable("z", Quantifier.FORALL, D),
            Variable("t", Quantifier.EXISTS, D),
        ),
        constraints=(ExprConstraint("x = y*z + t"),),
    )
)

strategy = enumerate_winning_strategies(problem)[0]
print("strategy scenarios:", sorted(strategy.scenarios()))

certificate = certificate_from_strategy(problem, strategy)
print("certificate verifies:", verify_certificate(certificate, problem))
print("certificate bytes:", len(serialize_base(certificate)))

# Corrupt one leaf: answer t=1 instead of t=0 when z=2.
z_node = make_node(
    [
        (0, make_node([(0, LEAF)])),
        (1, make_node([(0, LEAF)])),
        (2, make_node([(1, LEAF)])),
    ]
)
corrupted = make_node([(0, make_node([(0, z_node)]))])
bad_certificate = certificate_from_strategy(problem, corrupted)
print("corrupted certificate verifies:", verify_certificate(bad_certificate, problem))
