"""Command-line front end.

Subcommands: compile, solve, count, query, extract, verify, check, serve.
Exit codes: 0 on success, 1 on negative decision answers (no winning
strategy, disallowed move, failed verification), 2 on errors.  Every
subcommand takes --json for machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .base import (
    BOTTOM,
    TOP,
    GuardedBase,
    check_compatibility,
    check_optimality,
    deserialize_base,
    serialize_base,
)
from .compiler import CompileOptions, compile_problem
from .errors import QcspError
from .model import Problem, load_problem, validate_problem
from .query import allowed_moves, answer_next_move_choice, extract_strategy, verify_certificate
from .strategy import StrategyTree, enumerate_winning_strategies


def _read_problem(path: str) -> Problem:
    return load_problem(Path(path).read_text(encoding="utf-8"))


def _read_base(path: str):
    return deserialize_base(Path(path).read_bytes())


def _parse_prefix(text: str, base: GuardedBase) -> tuple[int, ...]:
    """Parse "x=2,y=1": names must follow the binder from rank 1."""
    if not text:
        return ()
    values = []
    parts = text.split(",")
    for k, part in enumerate(parts):
        name, _, raw = part.partition("=")
        name = name.strip()
        if k >= len(base.binder) or base.binder[k].name != name:
            raise QcspError(
                f"prefix entry {k + 1} must bind {base.binder[k].name!r}, got {name!r}"
            )
        try:
            value = int(raw)
        except ValueError as exc:
            raise QcspError(f"prefix value for {name!r} is not an integer") from exc
        if value not in base.binder[k].domain:
            raise QcspError(f"{value} is outside the domain of {name!r}")
        values.append(value)
    return tuple(values)


def _strategy_doc(s: StrategyTree) -> dict:
    return {str(value): _strategy_doc(sub) for value, sub in s.branches}


def _strategy_lines(s: StrategyTree, names: list[str], depth: int = 0) -> list[str]:
    lines = []
    for value, sub in s.branches:
        lines.append("  " * depth + f"{names[depth]}={value}")
        lines.extend(_strategy_lines(sub, names, depth + 1))
    return lines


def _emit(args, doc: dict, human: str) -> None:
    if args.json:
        print(json.dumps(doc, sort_keys=False))
    else:
        print(human)


def cmd_compile(args) -> int:
    problem = _read_problem(args.problem)
    options = CompileOptions(propagation=args.propagation, node_budget=args.budget)
    result = compile_problem(problem, options)
    data = serialize_base(result.base)
    Path(args.out).write_bytes(data + b"\n")
    doc = {
        "out": args.out,
        "winning": result.winning,
        "stats": result.stats.as_dict(),
    }
    stats = result.stats
    _emit(
        args,
        doc,
        f"wrote {args.out}\nwinning: {'yes' if result.winning else 'no'}\n"
        f"recursive calls: {stats.recursive_calls}\n"
        f"propagation failures: {stats.propagation_failures}\n"
        f"store nodes: {stats.store_nodes}",
    )
    return 0


def cmd_solve(args) -> int:
    problem = _read_problem(args.problem)
    options = CompileOptions(propagation=args.propagation, node_budget=args.budget)
    result = compile_problem(problem, options)
    _emit(
        args,
        {"winning": result.winning},
        "WINNING" if result.winning else "NO-WINNING-STRATEGY",
    )
    return 0 if result.winning else 1


def cmd_count(args) -> int:
    problem = validate_problem(_read_problem(args.problem))
    strategies = enumerate_winning_strategies(
        problem, limit=args.limit, node_budget=args.budget
    )
    _emit(args, {"count": len(strategies)}, str(len(strategies)))
    return 0


def cmd_query(args) -> int:
    base = _read_base(args.base)
    if not isinstance(base, GuardedBase):
        raise QcspError("queries need a guarded base, not a truth constant")
    prefix = _parse_prefix(args.prefix, base)
    if args.alt is not None:
        name, _, raw = args.alt.partition("=")
        if not prefix:
            raise QcspError("--alt needs a non-empty --prefix")
        last = base.binder[len(prefix) - 1]
        if name.strip() != last.name:
            raise QcspError(f"--alt must rebind {last.name!r}, got {name.strip()!r}")
        alternative = int(raw)
        answer = answer_next_move_choice(base, prefix, alternative)
        _emit(args, {"winning": answer}, "YES" if answer else "NO")
        return 0 if answer else 1
    moves = sorted(allowed_moves(base, prefix))
    variable = base.binder[len(prefix)].name
    _emit(
        args,
        {"variable": variable, "values": moves},
        f"{variable}: {' '.join(map(str, moves)) if moves else '(none)'}",
    )
    return 0 if moves else 1


def cmd_extract(args) -> int:
    base = _read_base(args.base)
    strategy = extract_strategy(base, tie_break=args.tie_break)
    names = [v.name for v in base.binder]
    _emit(
        args,
        {"strategy": _strategy_doc(strategy)},
        "\n".join(_strategy_lines(strategy, names)),
    )
    return 0


def cmd_verify(args) -> int:
    certificate = _read_base(args.certificate)
    problem = _read_problem(args.problem)
    verdict = verify_certificate(certificate, problem)
    _emit(args, {"valid": verdict}, "VALID" if verdict else "INVALID")
    return 0 if verdict else 1


def cmd_check(args) -> int:
    base = _read_base(args.base)
    problem = _read_problem(args.problem)
    compatible = check_compatibility(base, validate_problem(problem))
    optimal = check_optimality(base)
    _emit(
        args,
        {"compatible": compatible, "optimal": optimal},
        f"compatible: {'yes' if compatible else 'no'}\n"
        f"optimal: {'yes' if optimal else 'no'}",
    )
    return 0 if compatible and optimal else 1


def cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import create_app

    port = args.port if args.port is not None else int(os.environ.get("PORT", "8000"))
    data_dir = args.data_dir or os.environ.get("DATA_DIR", "./qcsp-data")
    app = create_app(data_dir)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcsp",
        description="Compile quantified constraint problems and query the result.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, budget=True):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if budget:
            p.add_argument("--budget", type=int, default=None, help="node budget")

    p = sub.add_parser("compile", help="compile a problem into a base file")
    p.add_argument("problem")
    p.add_argument("--out", required=True, help="path of the base file to write")
    p.add_argument("--propagation", choices=["ground", "gac"], default="ground")
    common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("solve", help="decide whether a winning strategy exists")
    p.add_argument("problem")
    p.add_argument("--propagation", choices=["ground", "gac"], default="ground")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("count", help="count winning strategies by enumeration")
    p.add_argument("problem")
    p.add_argument("--limit", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("query", help="allowed moves after a prefix, or a what-if")
    p.add_argument("base")
    p.add_argument("--prefix", default="", help='moves so far, e.g. "x=2,y=1"')
    p.add_argument("--alt", default=None, help='alternative last move, e.g. "y=2"')
    common(p, budget=False)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("extract", help="extract one winning strategy from a base")
    p.add_argument("base")
    p.add_argument("--tie-break", choices=["min", "max"], default="min")
    common(p, budget=False)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="verify a certificate against a problem")
    p.add_argument("certificate")
    p.add_argument("problem")
    common(p, budget=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", help="check base compatibility and optimality")
    p.add_argument("base")
    p.add_argument("problem")
    common(p, budget=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("serve", help="run the HTTP game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--data-dir", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: no such file", file=sys.stderr)
        return 2
    except QcspError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
