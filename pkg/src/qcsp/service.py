"""HTTP/JSON service for interactive play against compiled bases.

Endpoints
  POST /problems                      store a problem, content-addressed
  GET  /problems/{id}                 fetch it back
  POST /problems/{id}/compile         compile; returns base id, stats, verdict
  GET  /bases/{id}                    fetch a compiled base record
  POST /games                         open a session against a base
  GET  /games/{id}                    session snapshot
  POST /games/{id}/move               play the human's move; engine replies
  GET  /games/{id}/winning-moves      values preserving a winning strategy
  POST /games/{id}/whatif             non-committal verdict for a value
  GET  /health                        liveness probe

Problems and bases are stored as JSON files keyed by content hash, sessions
by fresh ids.  Requests touching one session are serialized by a per-session
lock; bases are immutable shared reads.  Every error body is
``{"error": ..., "detail": ...}``.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from starlette.applications import Starlette
from starlette.middleware import Middleware
from starlette.middleware.cors import CORSMiddleware
from starlette.requests import Request
from starlette.responses import JSONResponse
from starlette.routing import Route

from .base import BOTTOM, GuardedBase, QcspBase, deserialize_base, guard_lookup, serialize_base
from .compiler import CompileOptions, compile_problem
from .errors import BudgetExceededError, ProblemValidationError, QcspError
from .model import (
    Problem,
    Quantifier,
    evaluate_values,
    problem_from_json,
    problem_to_json,
    validate_problem,
)


class ApiError(Exception):
    def __init__(self, status: int, error: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.error = error
        self.detail = detail


def _short_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


@dataclass
class Session:
    """One live play.

    status: ONGOING | WON | LOST | DRAWN_OFF_BASE.  WON/LOST follow the game
    rules (complete prefix evaluated, or an existential turn with no guarded
    value left).  DRAWN_OFF_BASE is reserved for play against foreign
    non-optimal bases, which this service never produces: its own compile
    endpoint always yields optimal bases, so walks strand only as LOST.
    """

    id: str
    base_id: str
    problem_id: str
    human_role: Quantifier
    tie_break: str
    values: list[int] = field(default_factory=list)
    status: str = "ONGOING"

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "base_id": self.base_id,
            "problem_id": self.problem_id,
            "human_role": self.human_role.value,
            "tie_break": self.tie_break,
            "values": list(self.values),
            "status": self.status,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Session":
        return cls(
            id=doc["id"],
            base_id=doc["base_id"],
            problem_id=doc["problem_id"],
            human_role=Quantifier(doc["human_role"]),
            tie_break=doc["tie_break"],
            values=list(doc["values"]),
            status=doc["status"],
        )


class GameService:
    """Stores, game rules, and persistence; the app wires HTTP onto this."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        for sub in ("problems", "bases", "sessions"):
            (self.data_dir / sub).mkdir(parents=True, exist_ok=True)
        self._problems: dict[str, Problem] = {}
        self._bases: dict[str, dict] = {}
        self._base_objects: dict[str, QcspBase] = {}
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # -- storage -----------------------------------------------------------

    def _path(self, kind: str, key: str) -> Path:
        return self.data_dir / kind / f"{key}.json"

    def add_problem(self, doc: dict) -> str:
        try:
            problem = problem_from_json(doc)
            validate_problem(problem)
        except ProblemValidationError as exc:
            raise ApiError(400, type(exc).__name__.removesuffix("Error"), str(exc))
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(400, "BadProblem", f"malformed problem document: {exc}")
        canonical = json.dumps(problem_to_json(problem), separators=(",", ":")).encode()
        pid = _short_hash(canonical)
        self._problems[pid] = problem
        self._path("problems", pid).write_bytes(canonical + b"\n")
        return pid

    def get_problem(self, pid: str) -> Problem:
        if pid not in self._problems:
            path = self._path("problems", pid)
            if not path.exists():
                raise ApiError(404, "NotFound", f"no problem {pid}")
            self._problems[pid] = problem_from_json(json.loads(path.read_text()))
        return self._problems[pid]

    def compile(self, pid: str, propagation: str, budget: int | None) -> dict:
        problem = self.get_problem(pid)
        try:
            result = compile_problem(
                problem, CompileOptions(propagation=propagation, node_budget=budget)
            )
        except BudgetExceededError as exc:
            raise ApiError(409, "BudgetExceeded", str(exc))
        data = serialize_base(result.base)
        bid = _short_hash(pid.encode() + data)
        record = {
            "base_id": bid,
            "problem_id": pid,
            "winning": result.winning,
            "stats": result.stats.as_dict(),
            "base": json.loads(data),
        }
        self._bases[bid] = record
        self._base_objects[bid] = result.base
        self._path("bases", bid).write_text(json.dumps(record, separators=(",", ":")))
        return record

    def get_base_record(self, bid: str) -> dict:
        if bid not in self._bases:
            path = self._path("bases", bid)
            if not path.exists():
                raise ApiError(404, "NotFound", f"no base {bid}")
            self._bases[bid] = json.loads(path.read_text())
        return self._bases[bid]

    def get_base(self, bid: str) -> QcspBase:
        if bid not in self._base_objects:
            record = self.get_base_record(bid)
            self._base_objects[bid] = deserialize_base(
                json.dumps(record["base"]).encode()
            )
        return self._base_objects[bid]

    def _persist(self, session: Session) -> None:
        self._path("sessions", session.id).write_text(json.dumps(session.to_doc()))

    def get_session(self, sid: str) -> Session:
        if sid not in self._sessions:
            path = self._path("sessions", sid)
            if not path.exists():
                raise ApiError(404, "NotFound", f"no game {sid}")
            self._sessions[sid] = Session.from_doc(json.loads(path.read_text()))
        return self._sessions[sid]

    def lock_for(self, sid: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(sid, threading.Lock())

    # -- game rules ----------------------------------------------------------

    def _problem_of(self, session: Session) -> Problem:
        return validate_problem(self.get_problem(session.problem_id))

    def _current_variable(self, session: Session):
        problem = self.get_problem(session.problem_id)
        if len(session.values) >= problem.size:
            return None
        return problem.variables[len(session.values)]

    def _allowed_now(self, session: Session) -> set[int]:
        variable = self._current_variable(session)
        if variable is None:
            return set()
        if variable.quantifier is Quantifier.FORALL:
            return set(variable.domain)
        base = self.get_base(session.base_id)
        if isinstance(base, GuardedBase):
            return guard_lookup(base, len(session.values) + 1, tuple(session.values))
        return set(variable.domain)  # TOP base: all-universal binder only

    def _refresh_status(self, session: Session) -> None:
        problem = self._problem_of(session)
        if len(session.values) == problem.size:
            session.status = (
                "WON" if evaluate_values(problem, session.values) else "LOST"
            )
            return
        variable = self._current_variable(session)
        if variable.quantifier is Quantifier.EXISTS and not self._allowed_now(session):
            session.status = "LOST"

    def _engine_turn(self, session: Session) -> bool:
        variable = self._current_variable(session)
        return variable is not None and variable.quantifier is not session.human_role

    def _advance_engine(self, session: Session) -> None:
        while session.status == "ONGOING" and self._engine_turn(session):
            allowed = self._allowed_now(session)
            pick = min if session.tie_break == "min" else max
            session.values.append(pick(allowed))
            self._refresh_status(session)

    def create_session(self, bid: str, human_role: str, tie_break: str) -> Session:
        record = self.get_base_record(bid)
        if not record["winning"]:
            raise ApiError(
                409, "NoWinningStrategy", "the base is BOTTOM; there is nothing to play"
            )
        if human_role not in ("exists", "forall"):
            raise ApiError(400, "BadRole", "human_role must be 'exists' or 'forall'")
        if tie_break not in ("min", "max"):
            raise ApiError(400, "BadTieBreak", "tie_break must be 'min' or 'max'")
        session = Session(
            id=uuid.uuid4().hex[:12],
            base_id=bid,
            problem_id=record["problem_id"],
            human_role=Quantifier(human_role),
            tie_break=tie_break,
        )
        self._refresh_status(session)
        self._advance_engine(session)
        self._sessions[session.id] = session
        self._persist(session)
        return session

    def play(self, session: Session, value: int) -> None:
        if session.status != "ONGOING":
            raise ApiError(409, "OutOfTurn", f"the game is over ({session.status})")
        variable = self._current_variable(session)
        if variable.quantifier is not session.human_role:
            raise ApiError(409, "OutOfTurn", f"it is the engine's turn at {variable.name!r}")
        if value not in variable.domain:
            raise ApiError(
                422, "ValueOutOfDomain", f"{value} is outside the domain of {variable.name!r}"
            )
        session.values.append(value)
        self._refresh_status(session)
        self._advance_engine(session)
        self._persist(session)

    def winning_moves(self, session: Session) -> list[int]:
        if session.status != "ONGOING":
            raise ApiError(409, "OutOfTurn", f"the game is over ({session.status})")
        return sorted(self._allowed_now(session))

    def whatif(self, session: Session, value: int) -> bool:
        if session.status != "ONGOING":
            raise ApiError(409, "OutOfTurn", f"the game is over ({session.status})")
        variable = self._current_variable(session)
        if value not in variable.domain:
            raise ApiError(
                422, "ValueOutOfDomain", f"{value} is outside the domain of {variable.name!r}"
            )
        return value in self._allowed_now(session)

    def session_view(self, session: Session) -> dict:
        problem = self.get_problem(session.problem_id)
        variable = self._current_variable(session)
        turn = None
        if session.status == "ONGOING" and variable is not None:
            turn = {
                "rank": len(session.values) + 1,
                "name": variable.name,
                "quantifier": variable.quantifier.value,
                "domain": list(variable.domain),
                "human": variable.quantifier is session.human_role,
            }
        return {
            "id": session.id,
            "base_id": session.base_id,
            "problem_id": session.problem_id,
            "human_role": session.human_role.value,
            "status": session.status,
            "prefix": [
                {"rank": k + 1, "name": problem.variables[k].name, "value": value}
                for k, value in enumerate(session.values)
            ],
            "turn": turn,
        }


# --- HTTP wiring ---------------------------------------------------------------


def create_app(data_dir: str | Path | None = None, cors_origin: str = "*") -> Starlette:
    service = GameService(data_dir or os.environ.get("DATA_DIR", "./qcsp-data"))

    async def post_problems(request: Request):
        try:
            doc = await request.json()
        except json.JSONDecodeError as exc:
            raise ApiError(400, "BadJson", f"line {exc.lineno} column {exc.colno}: {exc.msg}")
        pid = service.add_problem(doc)
        return JSONResponse({"id": pid}, status_code=201)

    async def get_problem(request: Request):
        pid = request.path_params["pid"]
        return JSONResponse(problem_to_json(service.get_problem(pid)))

    async def post_compile(request: Request):
        pid = request.path_params["pid"]
        body = {}
        if await request.body():
            body = await request.json()
        record = service.compile(
            pid,
            propagation=body.get("propagation", "ground"),
            budget=body.get("budget"),
        )
        return JSONResponse(
            {
                "base_id": record["base_id"],
                "winning": record["winning"],
                "stats": record["stats"],
            }
        )

    async def get_base(request: Request):
        bid = request.path_params["bid"]
        return JSONResponse(service.get_base_record(bid))

    async def post_games(request: Request):
        body = await request.json()
        if "base_id" not in body:
            raise ApiError(400, "BadRequest", "base_id is required")
        session = service.create_session(
            body["base_id"],
            human_role=body.get("human_role", "exists"),
            tie_break=body.get("tie_break", "min"),
        )
        return JSONResponse(service.session_view(session), status_code=201)

    async def get_game(request: Request):
        session = service.get_session(request.path_params["sid"])
        with service.lock_for(session.id):
            return JSONResponse(service.session_view(session))

    async def post_move(request: Request):
        body = await request.json()
        if "value" not in body:
            raise ApiError(400, "BadRequest", "value is required")
        session = service.get_session(request.path_params["sid"])
        with service.lock_for(session.id):
            service.play(session, int(body["value"]))
            return JSONResponse(service.session_view(session))

    async def get_winning_moves(request: Request):
        session = service.get_session(request.path_params["sid"])
        with service.lock_for(session.id):
            return JSONResponse({"values": service.winning_moves(session)})

    async def post_whatif(request: Request):
        body = await request.json()
        if "value" not in body:
            raise ApiError(400, "BadRequest", "value is required")
        session = service.get_session(request.path_params["sid"])
        with service.lock_for(session.id):
            return JSONResponse({"winning": service.whatif(session, int(body["value"]))})

    async def health(request: Request):
        return JSONResponse({"status": "ok"})

    async def api_error(request: Request, exc: ApiError):
        return JSONResponse(
            {"error": exc.error, "detail": exc.detail}, status_code=exc.status
        )

    async def qcsp_error(request: Request, exc: QcspError):
        return JSONResponse(
            {"error": type(exc).__name__.removesuffix("Error"), "detail": str(exc)},
            status_code=400,
        )

    routes = [
        Route("/problems", post_problems, methods=["POST"]),
        Route("/problems/{pid}", get_problem, methods=["GET"]),
        Route("/problems/{pid}/compile", post_compile, methods=["POST"]),
        Route("/bases/{bid}", get_base, methods=["GET"]),
        Route("/games", post_games, methods=["POST"]),
        Route("/games/{sid}", get_game, methods=["GET"]),
        Route("/games/{sid}/move", post_move, methods=["POST"]),
        Route("/games/{sid}/winning-moves", get_winning_moves, methods=["GET"]),
        Route("/games/{sid}/whatif", post_whatif, methods=["POST"]),
        Route("/health", health, methods=["GET"]),
    ]
    middleware = [
        Middleware(
            CORSMiddleware,
            allow_origins=[cors_origin] if cors_origin != "*" else ["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )
    ]
    app = Starlette(routes=routes, middleware=middleware)
    app.add_exception_handler(ApiError, api_error)
    app.add_exception_handler(QcspError, qcsp_error)
    app.state.service = service
    return app


def main() -> None:
    import uvicorn

    port = int(os.environ.get("PORT", "8000"))
    app = create_app(os.environ.get("DATA_DIR", "./qcsp-data"))
    uvicorn.run(app, host=os.environ.get("HOST", "127.0.0.1"), port=port, log_level="warning")


if __name__ == "__main__":
    main()
