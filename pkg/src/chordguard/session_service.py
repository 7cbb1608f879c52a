"""HTTP facade for interactive play: the client submits evader moves and
receives the state after the pursuer's reply turn.

Turn-based semantics make plain request/response sufficient; sessions live
in memory and are evicted after an idle period.
"""

from __future__ import annotations

import secrets
import threading
import time
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from . import geometry as geo
from .cli import ParseError, parse_workspace
from .ddr_motion import Pose
from .game_engine import (
    GameState,
    IllegalMove,
    StartInCollision,
    StartOutside,
    evader_turn,
    make_policy,
    new_game,
    pursuer_turn,
)
from .geometry import EmptyWorkspace, NotConvex

DEFAULT_IDLE_EVICTION_SECONDS = 3600.0


class WorkspaceBody(BaseModel):
    vertices: list[list[float]]
    name: str | None = None


class NewSessionBody(BaseModel):
    workspace: WorkspaceBody
    pursuer_start: list[float] = Field(min_length=3, max_length=3)
    evader_start: list[float] = Field(min_length=2, max_length=2)
    epsilon: float = 1.0


class MoveBody(BaseModel):
    target: list[float] = Field(min_length=2, max_length=2)


class Session:
    def __init__(self, state: GameState):
        self.state = state
        self.lock = threading.Lock()
        self.last_used = time.monotonic()

    def touch(self) -> None:
        self.last_used = time.monotonic()


def state_view(session_id: str, state: GameState) -> dict[str, Any]:
    guard = None
    if state.guard is not None:
        guard = {
            "a": list(state.guard.chord.a),
            "b": list(state.guard.chord.b),
            "normal": list(state.guard.evader_normal),
        }
    return {
        "session_id": session_id,
        "phase": state.phase,
        "step": state.step,
        "pursuer": {"x": state.pursuer.x, "y": state.pursuer.y,
                    "theta": state.pursuer.theta},
        "evader": {"x": state.evader[0], "y": state.evader[1]},
        "guard": guard,
        "capture_radius": state.constants.r_capture,
        "move_radius": state.epsilon,
        "q_vertices": [list(v) for v in state.q.vertices],
        "w_vertices": [list(v) for v in state.w.vertices],
        "captured": state.captured,
        "captured_by": state.captured_by,
        "last_case": state.last_case,
        "event_log_tail": [rec.to_json_line() for rec in state.event_log[-10:]],
    }


def create_app(idle_eviction_seconds: float = DEFAULT_IDLE_EVICTION_SECONDS) -> FastAPI:
    app = FastAPI(title="chordguard session service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def evict_stale() -> None:
        now = time.monotonic()
        with registry_lock:
            stale = [sid for sid, s in sessions.items()
                     if now - s.last_used > idle_eviction_seconds]
            for sid in stale:
                del sessions[sid]

    def get_session(session_id: str) -> Session:
        evict_stale()
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.touch()
        return session

    @app.post("/sessions", status_code=201)
    def create_session(body: NewSessionBody) -> dict[str, Any]:
        evict_stale()
        try:
            workspace = parse_workspace(body.workspace.model_dump_json())
            px, py, ptheta = body.pursuer_start
            state = new_game(workspace, Pose(px, py, ptheta),
                             (body.evader_start[0], body.evader_start[1]),
                             make_policy("external"), epsilon=body.epsilon)
        except NotConvex as exc:
            raise HTTPException(status_code=422, detail=f"NotConvex: {exc}") from exc
        except EmptyWorkspace as exc:
            raise HTTPException(status_code=422, detail=f"EmptyWorkspace: {exc}") from exc
        except StartInCollision as exc:
            raise HTTPException(status_code=422, detail=f"StartInCollision: {exc}") from exc
        except StartOutside as exc:
            raise HTTPException(status_code=422, detail=f"StartOutside: {exc}") from exc
        except (ParseError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        session_id = secrets.token_hex(16)
        with registry_lock:
            sessions[session_id] = Session(state)
        return state_view(session_id, state)

    @app.post("/sessions/{session_id}/move")
    def move(session_id: str, body: MoveBody) -> dict[str, Any]:
        session = get_session(session_id)
        with session.lock:
            state = session.state
            if state.captured:
                raise HTTPException(status_code=409, detail="session already captured")
            try:
                evader_turn(state, (body.target[0], body.target[1]))
            except IllegalMove as exc:
                raise HTTPException(status_code=422, detail=f"IllegalMove: {exc}") from exc
            if not state.captured:
                pursuer_turn(state)
            return state_view(session_id, state)

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str) -> dict[str, Any]:
        session = get_session(session_id)
        with session.lock:
            return state_view(session_id, session.state)

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str) -> PlainTextResponse:
        session = get_session(session_id)
        with session.lock:
            body = "".join(rec.to_json_line() + "\n"
                           for rec in session.state.event_log)
        return PlainTextResponse(body, media_type="application/x-ndjson")

    return app


def serve_forever(host: str, port: int) -> None:  # pragma: no cover
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
