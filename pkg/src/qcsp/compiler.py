"""Search-embedded compilation of a problem into an optimal guarded base.

The search walks the binder outermost-first, branching on domain values in
ascending order.  A subtree that admits no winning strategy collapses to
BOTTOM (immediately, under a universal head; dropped from the value list,
under an existential head).  Surviving child bases are merged: an
existential head contributes its own guard set of surviving values, and each
deeper guard set is rebuilt by distributing the child trees under a new root
node labeled with the head variable.  New nodes are interned in the shared
store, so equal subtrees are physically shared across sibling branches.

Propagation inside the search is a fixpoint check: a ground check (every
fully-assigned constraint must hold) always runs, and an optional table
filtering pass ("gac") additionally fails when some future variable loses
its whole live domain.  Filtering is local to each call; nothing persists
across backtracking, and the compiled base does not depend on the level.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .base import BOTTOM, TOP, GuardedBase, NodeStore, QcspBase, guard_set
from .errors import BudgetExceededError, MixedBinderError
from .model import (
    Problem,
    Quantifier,
    TableConstraint,
    Variable,
    expr_scope,
    parse_comparison,
    validate_problem,
)
from .model import _eval_comparison  # comparison AST evaluation

ValBaseList = list  # of (value, base) pairs, values ascending


@dataclass
class CompileOptions:
    propagation: str = "ground"  # "ground" | "gac"
    node_budget: int | None = None


@dataclass
class CompileStats:
    recursive_calls: int = 0
    propagation_failures: int = 0
    store_nodes: int = 0

    def as_dict(self) -> dict:
        return {
            "recursive_calls": self.recursive_calls,
            "propagation_failures": self.propagation_failures,
            "store_nodes": self.store_nodes,
        }


@dataclass
class CompileState:
    """Search position: decided ranks, the remaining binder, shared plumbing."""

    problem: Problem
    position: int  # ranks 1..position are assigned
    assignment: dict[str, int]
    store: NodeStore
    options: CompileOptions
    stats: CompileStats

    @property
    def remaining(self) -> tuple[Variable, ...]:
        return self.problem.variables[self.position :]

    def bind(self, variable: Variable, value: int) -> "CompileState":
        bound = dict(self.assignment)
        bound[variable.name] = value
        return replace(self, position=self.position + 1, assignment=bound)


@dataclass
class CompileResult:
    base: QcspBase
    stats: CompileStats

    @property
    def winning(self) -> bool:
        return self.base is not BOTTOM


def _ground_holds(c, bindings: dict[str, int]) -> bool:
    if isinstance(c, TableConstraint):
        return tuple(bindings[name] for name in c.scope) in c.tuples
    return _eval_comparison(parse_comparison(c.text), bindings)


def reach_fixpoint(state: CompileState) -> bool:
    """False (failure) iff propagation detects a dead end.

    Always: some constraint with a fully-assigned scope does not hold.
    With ``propagation="gac"``: additionally, filtering the table constraints
    against the live domains of unassigned variables empties one of them.
    """
    bindings = state.assignment
    for c in state.problem.constraints:
        scope = c.scope if isinstance(c, TableConstraint) else expr_scope(state.problem, c)
        if all(name in bindings for name in scope):
            if not _ground_holds(c, bindings):
                return False

    if state.options.propagation != "gac":
        return True

    live: dict[str, set[int]] = {
        v.name: set(v.domain) for v in state.remaining if v.name not in bindings
    }
    tables = [c for c in state.problem.constraints if isinstance(c, TableConstraint)]
    changed = True
    while changed:
        changed = False
        for c in tables:
            free = [name for name in c.scope if name not in bindings]
            if not free:
                continue
            support: dict[str, set[int]] = {name: set() for name in free}
            for row in c.tuples:
                ok = True
                for name, value in zip(c.scope, row):
                    if name in bindings:
                        if bindings[name] != value:
                            ok = False
                            break
                    elif value not in live[name]:
                        ok = False
                        break
                if ok:
                    for name, value in zip(c.scope, row):
                        if name in support:
                            support[name].add(value)
            for name in free:
                narrowed = live[name] & support[name]
                if narrowed != live[name]:
                    live[name] = narrowed
                    changed = True
                if not narrowed:
                    return False
    return True


# --- combination operators -----------------------------------------------------


def merge_guard_sets(
    head: Variable, entries: ValBaseList, store: NodeStore
) -> list[tuple]:
    """Distribute child guard sets under new roots labeled with ``head``.

    For each existential variable of the (common) tail binder and each value
    guarded by at least one child, the merged guard tree branches on the
    head values whose child base guards that value, reusing the child trees
    as subtrees.  Interning makes reused subtrees physically shared.
    """
    bases = [child for _, child in entries]
    for child in bases:
        if not isinstance(child, GuardedBase):
            raise MixedBinderError("only guarded bases can be merged")
        if child.store is not store:
            raise MixedBinderError("children must live in the shared node store")
    tail = bases[0].binder
    for child in bases[1:]:
        if child.binder != tail:
            raise MixedBinderError("children disagree on the tail binder")

    merged: list[tuple] = []
    for k in range(len(bases[0].guard_sets)):
        by_child = [
            (val, {g.value: g.tree for g in child.guard_sets[k]})
            for val, child in entries
        ]
        values = sorted({w for _, guards in by_child for w in guards})
        out = []
        for w in values:
            edges = [(val, guards[w]) for val, guards in by_child if w in guards]
            out.append((w, store.node(head.name, edges)))
        merged.append(guard_set(out))
    return merged


def combine_exists(
    head: Variable,
    tail: tuple[Variable, ...],
    entries: ValBaseList,
    store: NodeStore,
) -> GuardedBase:
    """Merge the surviving child bases of an existential head variable."""
    constants = all(child is TOP for _, child in entries)
    if not constants:
        assert all(isinstance(child, GuardedBase) for _, child in entries), (
            "TOP children cannot coexist with guarded children"
        )
    head_guards = guard_set((val, NodeStore.LEAF) for val, _ in entries)
    if constants:
        # Reachable only when the tail holds no existential variable.
        assert all(v.quantifier is Quantifier.FORALL for v in tail)
        return GuardedBase(binder=(head,) + tail, guard_sets=(head_guards,), store=store)
    rest = merge_guard_sets(head, entries, store)
    return GuardedBase(
        binder=(head,) + tail, guard_sets=(head_guards, *rest), store=store
    )


def combine_forall(
    head: Variable,
    tail: tuple[Variable, ...],
    entries: ValBaseList,
    store: NodeStore,
) -> QcspBase:
    """Merge the child bases of a universal head; no guard set for the head."""
    assert len(entries) == len(head.domain), "universal heads keep every value"
    if all(child is TOP for _, child in entries):
        return TOP
    return GuardedBase(
        binder=(head,) + tail,
        guard_sets=tuple(merge_guard_sets(head, entries, store)),
        store=store,
    )


# --- the search ------------------------------------------------------------------


def search(state: CompileState) -> QcspBase:
    """Compile the remaining binder under the current assignment."""
    state.stats.recursive_calls += 1
    budget = state.options.node_budget
    if budget is not None and state.stats.recursive_calls > budget:
        raise BudgetExceededError(f"compilation exceeded {budget} search nodes")
    if not reach_fixpoint(state):
        state.stats.propagation_failures += 1
        return BOTTOM
    remaining = state.remaining
    if not remaining:
        return TOP
    head, tail = remaining[0], remaining[1:]
    entries: ValBaseList = []
    for value in head.domain:
        child = search(state.bind(head, value))
        if child is BOTTOM:
            if head.quantifier is Quantifier.FORALL:
                return BOTTOM
            continue  # a losing value never becomes a guard
        entries.append((value, child))
    if not entries:
        return BOTTOM
    if head.quantifier is Quantifier.EXISTS:
        return combine_exists(head, tail, entries, state.store)
    return combine_forall(head, tail, entries, state.store)


def compile_from(
    problem: Problem,
    values: Sequence[int],
    options: CompileOptions | None = None,
    store: NodeStore | None = None,
    stats: CompileStats | None = None,
) -> QcspBase:
    """Compile the binder suffix left after fixing the first ranks to ``values``."""
    opts = options or CompileOptions()
    state = CompileState(
        problem=problem,
        position=len(values),
        assignment=problem.assignment_for(values),
        store=store if store is not None else NodeStore(),
        options=opts,
        stats=stats if stats is not None else CompileStats(),
    )
    return search(state)


def compile_problem(
    problem: Problem, options: CompileOptions | None = None
) -> CompileResult:
    """Validate and compile a whole problem.

    The result is BOTTOM exactly when the problem admits no winning
    strategy; otherwise it is a guarded base (or TOP for purely universal
    tautologies) that is compatible with the problem and optimal.
    """
    validated = validate_problem(problem)
    stats = CompileStats()
    store = NodeStore()
    base = compile_from(validated, (), options, store, stats)
    if isinstance(base, GuardedBase):
        stats.store_nodes = base.node_count()
    return CompileResult(base=base, stats=stats)
