"""The compilation target: guarded bases over hash-consed guard trees.

A base is TOP, BOTTOM, or a binder paired with one guard set per existential
variable.  A guard is a (value, tree) pair; the tree records, level by level
from rank 1, the sequences of earlier moves under which the value is
playable, so the tree guarding the rank-e variable has paths of exactly e-1
edges.  Trees live in a per-base node store that interns structurally equal
nodes, which turns the forest into a DAG and is where combination sharing
comes from.

The interpretation maps a guard tree to the tuple set of its branches (value
first, then the path), a guard set to the union over its guards, and a base
to a problem over the same binder with one table constraint per existential
variable.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .errors import MalformedBaseError, NotExistentialError
from .model import (
    Problem,
    Quantifier,
    TableConstraint,
    Variable,
    evaluate_values,
)
from .strategy import decide_winning_from, enumerate_winning_strategies

TupleSet = frozenset  # tuples of uniform arity


class _Top:
    kind = "top"

    def __repr__(self) -> str:  # pragma: no cover - repr only
        return "TOP"


class _Bottom:
    kind = "bottom"

    def __repr__(self) -> str:  # pragma: no cover - repr only
        return "BOTTOM"


TOP = _Top()
BOTTOM = _Bottom()


class Guard(NamedTuple):
    value: int
    tree: int  # node id in the owning base's store


GuardSet = tuple  # of Guard, ascending by value


class NodeStore:
    """Hash-consed guard-tree nodes; equal structure means equal node id."""

    LEAF = 0

    def __init__(self) -> None:
        # id 0 is the leaf; internal nodes are (var name, ((value, child), ...))
        self._records: list[tuple[str, tuple[tuple[int, int], ...]] | None] = [None]
        self._index: dict[tuple[str, tuple[tuple[int, int], ...]], int] = {}

    def __len__(self) -> int:
        return len(self._records)

    def node(self, var: str, edges: Iterable[tuple[int, int]]) -> int:
        items = tuple(sorted(edges))
        if not items:
            raise MalformedBaseError(f"node for {var!r} needs at least one edge")
        values = [val for val, _ in items]
        if len(set(values)) != len(values):
            raise MalformedBaseError(f"duplicate edge labels {values} at {var!r}")
        for _, child in items:
            if not 0 <= child < len(self._records):
                raise MalformedBaseError(f"edge to unknown node {child}")
        key = (var, items)
        found = self._index.get(key)
        if found is not None:
            return found
        nid = len(self._records)
        self._records.append(key)
        self._index[key] = nid
        return nid

    def is_leaf(self, nid: int) -> bool:
        return self._records[nid] is None

    def var(self, nid: int) -> str:
        record = self._records[nid]
        if record is None:
            raise MalformedBaseError("the leaf has no variable label")
        return record[0]

    def edges(self, nid: int) -> tuple[tuple[int, int], ...]:
        record = self._records[nid]
        return () if record is None else record[1]

    def child(self, nid: int, value: int) -> int | None:
        record = self._records[nid]
        if record is None:
            return None
        for val, sub in record[1]:
            if val == value:
                return sub
        return None

    def branches(self, nid: int) -> Iterator[tuple[int, ...]]:
        """Every root-to-leaf edge-label sequence, lexicographically."""
        if self.is_leaf(nid):
            yield ()
            return
        for val, sub in self.edges(nid):
            for rest in self.branches(sub):
                yield (val,) + rest

    def branch_count(self, nid: int, _memo: dict | None = None) -> int:
        memo = _memo if _memo is not None else {}
        if nid in memo:
            return memo[nid]
        if self.is_leaf(nid):
            memo[nid] = 1
            return 1
        total = sum(self.branch_count(sub, memo) for _, sub in self.edges(nid))
        memo[nid] = total
        return total

    def depth(self, nid: int, _memo: dict | None = None) -> int:
        """Uniform path length below ``nid``; raises if paths disagree."""
        memo = _memo if _memo is not None else {}
        if nid in memo:
            return memo[nid]
        if self.is_leaf(nid):
            memo[nid] = 0
            return 0
        depths = {self.depth(sub, memo) for _, sub in self.edges(nid)}
        if len(depths) != 1:
            raise MalformedBaseError(f"node {nid} has branches of unequal length")
        d = 1 + depths.pop()
        memo[nid] = d
        return d

    def tree_from_branches(
        self, branches: Iterable[tuple[int, ...]], var_names: Sequence[str]
    ) -> int:
        """Intern the trie spelling exactly the given equal-length branches."""
        rows = sorted(set(branches))
        if not rows:
            raise MalformedBaseError("a guard tree needs at least one branch")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise MalformedBaseError("branches of unequal length")
        if width != len(var_names):
            raise MalformedBaseError(
                f"branches of length {width} need {width} variable names"
            )

        def build(rows: list[tuple[int, ...]], level: int) -> int:
            if level == width:
                return self.LEAF
            edges = []
            for val, group in itertools.groupby(rows, key=lambda r: r[level]):
                edges.append((val, build(list(group), level + 1)))
            return self.node(var_names[level], edges)

        return build(rows, 0)

    def reachable(self, roots: Iterable[int]) -> set[int]:
        seen: set[int] = set()
        stack = list(roots)
        while stack:
            nid = stack.pop()
            if nid in seen:
                continue
            seen.add(nid)
            stack.extend(child for _, child in self.edges(nid))
        return seen


@dataclass(frozen=True, eq=False)
class GuardedBase:
    """Binder plus one guard set per existential variable, in rank order."""

    binder: tuple[Variable, ...]
    guard_sets: tuple[GuardSet, ...]
    store: NodeStore

    @property
    def kind(self) -> str:
        return "pair"

    def existential_positions(self) -> tuple[int, ...]:
        """1-based binder positions carrying a guard set."""
        return tuple(
            i + 1 for i, v in enumerate(self.binder) if v.quantifier is Quantifier.EXISTS
        )

    def guard_set_at(self, position: int) -> GuardSet:
        """Guard set of the existential variable at a 1-based binder position."""
        v = self.binder[position - 1]
        if v.quantifier is not Quantifier.EXISTS:
            raise NotExistentialError(f"{v.name!r} is universally quantified")
        index = sum(
            1 for u in self.binder[: position - 1] if u.quantifier is Quantifier.EXISTS
        )
        return self.guard_sets[index]

    def guard_set_by_name(self, name: str) -> GuardSet:
        for i, v in enumerate(self.binder):
            if v.name == name:
                return self.guard_set_at(i + 1)
        raise NotExistentialError(f"no variable named {name!r}")

    def guard_roots(self) -> list[int]:
        return [g.tree for gs in self.guard_sets for g in gs]

    def node_count(self) -> int:
        """Distinct store nodes reachable from the guards (DAG size)."""
        return len(self.store.reachable(self.guard_roots()))


QcspBase = Union[_Top, _Bottom, GuardedBase]


def guard_set(guards: Iterable[tuple[int, int]]) -> GuardSet:
    """Normalize (value, tree) pairs into an ascending, duplicate-free set."""
    items = tuple(Guard(*pair) for pair in sorted(guards))
    values = [g.value for g in items]
    if not items:
        raise MalformedBaseError("a guard set must not be empty")
    if len(set(values)) != len(values):
        raise MalformedBaseError(f"duplicate guard values {values}")
    return items


# --- interpretation ----------------------------------------------------------


def interpret_tree(store: NodeStore, value: int, tree: int) -> TupleSet:
    """Branches of ``tree`` prefixed with ``value``; the leaf yields {(value,)}."""
    return frozenset((value,) + branch for branch in store.branches(tree))


def interpret_guard_set(store: NodeStore, guards: GuardSet) -> TupleSet:
    out: set[tuple[int, ...]] = set()
    for g in guards:
        out.update(interpret_tree(store, g.value, g.tree))
    return frozenset(out)


def interpret_base(b: QcspBase) -> Problem | bool:
    """TOP -> True, BOTTOM -> False, otherwise the table-constraint problem."""
    if b is TOP:
        return True
    if b is BOTTOM:
        return False
    constraints = []
    for position in b.existential_positions():
        v = b.binder[position - 1]
        scope = (v.name,) + tuple(u.name for u in b.binder[: position - 1])
        rows = interpret_guard_set(b.store, b.guard_set_at(position))
        constraints.append(TableConstraint(scope=scope, tuples=rows))
    return Problem(variables=b.binder, constraints=tuple(constraints))


def guard_lookup(b: GuardedBase, position: int, prefix: Sequence[int]) -> set[int]:
    """Values guarded at a 1-based existential position, by tree walk.

    Walks each guard tree along the prefix values instead of materializing
    tuple sets; cost is one edge lookup per level per guard.
    """
    if not isinstance(b, GuardedBase):
        raise NotExistentialError("guard lookup needs a guarded base")
    if len(prefix) != position - 1:
        raise NotExistentialError(
            f"prefix of length {len(prefix)} cannot reach position {position}"
        )
    guards = b.guard_set_at(position)
    allowed: set[int] = set()
    for g in guards:
        node = g.tree
        ok = True
        for value in prefix:
            node = b.store.child(node, value)
            if node is None:
                ok = False
                break
        if ok and b.store.is_leaf(node):
            allowed.add(g.value)
    return allowed


# --- compatibility and optimality ---------------------------------------------


def _binder_signature(variables: Sequence[Variable]) -> tuple:
    return tuple((v.quantifier, v.domain) for v in variables)


def _same_winning_strategy_sets(p1: Problem, p2: Problem) -> bool:
    """Winning-strategy set equality without materializing the sets.

    Strategy sets decompose along the binder: existential levels split the
    set by first move, universal levels are Cartesian products of the
    per-value sets (equal products mean equal factors unless both sides are
    empty).  Recursing over that decomposition decides equality with one
    suffix decision per prefix instead of a full enumeration.
    """
    n = p1.size

    def eq(prefix: tuple[int, ...]) -> bool:
        k = len(prefix)
        if k == n:
            return evaluate_values(p1, prefix) == evaluate_values(p2, prefix)
        v = p1.variables[k]
        if v.quantifier is Quantifier.EXISTS:
            return all(eq(prefix + (val,)) for val in v.domain)
        w1 = decide_winning_from(p1, prefix)
        w2 = decide_winning_from(p2, prefix)
        if w1 != w2:
            return False
        if not w1:
            return True
        return all(eq(prefix + (val,)) for val in v.domain)

    return eq(())


def check_compatibility(
    b: QcspBase, p: Problem, method: str = "decision", node_budget: int | None = None
) -> bool:
    """True iff the base's interpretation has exactly the winning strategies of ``p``.

    ``method="decision"`` compares the sets through their recursive
    decomposition (polynomial in the scenario count); ``method="enumerate"``
    materializes both sets, which is faithful to the definition but explodes
    on universally-heavy binders.
    """
    if b is TOP:
        # Every strategy is winning for TOP, so p must have no losing scenario.
        return all(evaluate_values(p, scenario) for scenario in p.scenarios())
    if b is BOTTOM:
        return not decide_winning_from(p, ())
    if _binder_signature(b.binder) != _binder_signature(p.variables):
        return False
    q = interpret_base(b)
    assert isinstance(q, Problem)
    if method == "decision":
        return _same_winning_strategy_sets(q, p)
    if method == "enumerate":
        ours = set(enumerate_winning_strategies(q, node_budget=node_budget))
        theirs = set(enumerate_winning_strategies(p, node_budget=node_budget))
        return ours == theirs
    raise ValueError(f"unknown compatibility method {method!r}")


def guard_consistent(b: GuardedBase, prefix: Sequence[int]) -> bool:
    """Every existential component of the prefix is guarded at its own rank."""
    for k, value in enumerate(prefix, start=1):
        v = b.binder[k - 1]
        if v.quantifier is Quantifier.EXISTS:
            if value not in guard_lookup(b, k, prefix[: k - 1]):
                return False
    return True


def check_optimality(b: QcspBase) -> bool:
    """Guard membership must coincide with winning continuations.

    For every existential position, every value, and every prefix over all
    earlier variables whose existential components are themselves guarded:
    the value is guarded under that prefix iff the suffix of the base's
    interpretation, with prefix and value fixed, admits a winning strategy.
    TOP and BOTTOM are vacuously optimal.
    """
    if b is TOP or b is BOTTOM:
        return True
    q = interpret_base(b)
    assert isinstance(q, Problem)
    for position in b.existential_positions():
        v = b.binder[position - 1]
        earlier = [u.domain for u in b.binder[: position - 1]]
        for prefix in itertools.product(*earlier):
            if not guard_consistent(b, prefix):
                continue
            allowed = guard_lookup(b, position, prefix)
            for value in v.domain:
                if (value in allowed) != decide_winning_from(q, prefix + (value,)):
                    return False
    return True


# --- serialization -----------------------------------------------------------


def base_to_json(b: QcspBase) -> dict:
    if b is TOP:
        return {"kind": "top"}
    if b is BOTTOM:
        return {"kind": "bottom"}

    order: list[int] = []
    ids: dict[int, int] = {}

    def visit(nid: int) -> None:
        if nid in ids:
            return
        for _, child in b.store.edges(nid):
            visit(child)
        ids[nid] = len(order)
        order.append(nid)

    for gs in b.guard_sets:
        for g in gs:
            visit(g.tree)

    nodes = []
    for nid in order:
        if b.store.is_leaf(nid):
            nodes.append({"id": ids[nid], "leaf": True})
        else:
            nodes.append(
                {
                    "id": ids[nid],
                    "var": b.store.var(nid),
                    "edges": {str(val): ids[child] for val, child in b.store.edges(nid)},
                }
            )

    guards: dict[str, list] = {}
    for position in b.existential_positions():
        v = b.binder[position - 1]
        guards[v.name] = [
            {"value": g.value, "tree": ids[g.tree]} for g in b.guard_set_at(position)
        ]

    return {
        "kind": "pair",
        "binder": [
            {"name": v.name, "quantifier": v.quantifier.value, "domain": list(v.domain)}
            for v in b.binder
        ],
        "nodes": nodes,
        "guards": guards,
    }


def serialize_base(b: QcspBase) -> bytes:
    """Deterministic bytes; shared subtrees serialize once, children first."""
    return json.dumps(base_to_json(b), separators=(",", ":")).encode("utf-8")


def base_from_json(doc: dict) -> QcspBase:
    kind = doc.get("kind")
    if kind == "top":
        return TOP
    if kind == "bottom":
        return BOTTOM
    if kind != "pair":
        raise MalformedBaseError(f"unknown base kind {kind!r}")

    try:
        binder = tuple(
            Variable(
                name=str(entry["name"]),
                quantifier=Quantifier(entry["quantifier"]),
                domain=tuple(int(x) for x in entry["domain"]),
            )
            for entry in doc["binder"]
        )
        node_docs = list(doc["nodes"])
        guard_docs = dict(doc["guards"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedBaseError(f"bad base document: {exc}") from exc

    if not binder:
        raise MalformedBaseError("a guarded base needs a non-empty binder")
    names = [v.name for v in binder]
    if len(set(names)) != len(names):
        raise MalformedBaseError("binder variable names must be unique")
    rank_by_name = {v.name: i + 1 for i, v in enumerate(binder)}
    domain_by_name = {v.name: v.domain for v in binder}
    for v in binder:
        if not v.domain or list(v.domain) != sorted(set(v.domain)):
            raise MalformedBaseError(f"bad domain for {v.name!r}")

    store = NodeStore()
    by_file_id: dict[int, int] = {}
    var_of: dict[int, str | None] = {}
    for entry in node_docs:
        fid = int(entry["id"])
        if fid in by_file_id:
            raise MalformedBaseError(f"duplicate node id {fid}")
        if entry.get("leaf"):
            by_file_id[fid] = store.LEAF
            var_of[fid] = None
            continue
        var = str(entry["var"])
        if var not in rank_by_name:
            raise MalformedBaseError(f"node labeled with unknown variable {var!r}")
        rank = rank_by_name[var]
        edges = []
        for key, child_fid in entry["edges"].items():
            value = int(key)
            if value not in domain_by_name[var]:
                raise MalformedBaseError(
                    f"edge label {value} outside the domain of {var!r}"
                )
            child_fid = int(child_fid)
            if child_fid not in by_file_id:
                raise MalformedBaseError(
                    f"node {fid} references {child_fid} before its definition"
                )
            child_var = var_of[child_fid]
            if child_var is not None and rank_by_name[child_var] != rank + 1:
                raise MalformedBaseError(
                    f"child of {var!r} must be rank {rank + 1}, got {child_var!r}"
                )
            edges.append((value, by_file_id[child_fid]))
        leafish = {var_of[int(c)] is None for c in entry["edges"].values()}
        if len(leafish) > 1:
            raise MalformedBaseError(f"node {fid} mixes leaf and internal children")
        by_file_id[fid] = store.node(var, edges)
        var_of[fid] = var

    guard_sets: list[GuardSet] = []
    expected = [v.name for v in binder if v.quantifier is Quantifier.EXISTS]
    if sorted(guard_docs.keys()) != sorted(expected):
        raise MalformedBaseError(
            f"guards must cover exactly the existential variables {expected}"
        )
    for name in expected:
        rank = rank_by_name[name]
        pairs = []
        for entry in guard_docs[name]:
            value = int(entry["value"])
            if value not in domain_by_name[name]:
                raise MalformedBaseError(
                    f"guard value {value} outside the domain of {name!r}"
                )
            fid = int(entry["tree"])
            if fid not in by_file_id:
                raise MalformedBaseError(f"guard references unknown node {fid}")
            tree = by_file_id[fid]
            if store.depth(tree) != rank - 1:
                raise MalformedBaseError(
                    f"guard tree for {name!r} must have paths of length {rank - 1}"
                )
            if not store.is_leaf(tree) and rank_by_name[store.var(tree)] != 1:
                raise MalformedBaseError(
                    f"guard tree for {name!r} must be rooted at the rank-1 variable"
                )
            pairs.append((value, tree))
        guard_sets.append(guard_set(pairs))

    return GuardedBase(binder=binder, guard_sets=tuple(guard_sets), store=store)


def deserialize_base(data: bytes | str) -> QcspBase:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedBaseError(f"not valid JSON: {exc}") from exc
    return base_from_json(doc)
