"""HTTP + WebSocket facade for live episodes with a human in the user role.

A session owns one parked-capable episode engine. ``advance`` drives it
until it blocks on a question, finishes, or exhausts a step quantum;
``reply`` feeds the pending question. The transcript endpoint and the
event WebSocket expose exactly the JSONL event records — never hidden
world state, unless wizard mode is explicitly enabled and requested.
"""

from __future__ import annotations

import asyncio
import random
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .core import Persona, TaskGoal, TaskType
from .episode_io import event_to_dict
from .household import GOAL_CATALOG, LAYOUTS, generate, world_to_dict
from .orchestrator import EngineStatus, EpisodeEngine, LoopConfig
from .policies import ConstantActPolicy, OraclePolicy, ScriptedReSpActPolicy

SESSION_POLICIES = ("oracle", "scripted-respact", "look")


@dataclass
class ServiceSettings:
    capacity: int = 16
    wizard_enabled: bool = False
    static_dir: str | None = None
    reply_timeout: float = 600.0
    advance_quantum: int = 256
    max_steps: int = 50


class CreateSessionBody(BaseModel):
    layout: str
    task_type: str = "random"
    policy: str = "scripted-respact"
    seed: int | None = None
    auto_advance: bool = False


class ReplyBody(BaseModel):
    text: str


@dataclass
class Session:
    session_id: str
    engine: EpisodeEngine
    goal_text: str
    auto_advance: bool
    world_dict: dict
    cursor: int = 0
    awaiting_since: float | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def state_dict(self) -> dict:
        engine = self.engine
        status = engine.status
        done = status is EngineStatus.DONE
        state = {
            "awaiting_user": status is EngineStatus.AWAITING_USER,
            "awaiting_utterance": engine.awaiting_utterance,
            "done": done,
            "outcome": engine.episode.outcome.value if done else None,
            "steps_used": engine.decisions_made,
            "max_steps": engine.cfg.max_steps,
        }
        return state

    def new_events(self) -> list[dict]:
        events = self.engine.episode.events
        fresh = [event_to_dict(ev) for ev in events[self.cursor:]]
        self.cursor = len(events)
        return fresh

    def note_waiting(self) -> None:
        if self.engine.status is EngineStatus.AWAITING_USER:
            if self.awaiting_since is None:
                self.awaiting_since = time.monotonic()
        else:
            self.awaiting_since = None

    def expire_if_stale(self, timeout: float) -> None:
        if (
            self.engine.status is EngineStatus.AWAITING_USER
            and self.awaiting_since is not None
            and time.monotonic() - self.awaiting_since > timeout
        ):
            self.engine.abort()


def _build_goal(body: CreateSessionBody, rng: random.Random) -> tuple[str, TaskGoal]:
    layout_name = body.layout
    if layout_name not in LAYOUTS:
        raise HTTPException(status_code=400, detail=f"unknown layout {layout_name!r}")
    if body.task_type == "random":
        candidates = [
            tt for tt in TaskType if (layout_name, tt) in GOAL_CATALOG
        ]
        task_type = rng.choice(candidates)
    else:
        try:
            task_type = TaskType(body.task_type)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unknown task type {body.task_type!r}")
    catalog = GOAL_CATALOG.get((layout_name, task_type))
    if not catalog:
        raise HTTPException(
            status_code=400, detail=f"{layout_name} cannot host {task_type.value}"
        )
    obj, target = rng.choice(catalog)
    return layout_name, TaskGoal(task_type, obj, target)


def create_app(settings: ServiceSettings | None = None) -> FastAPI:
    settings = settings or ServiceSettings()
    app = FastAPI(title="respact session service")
    sessions: dict[str, Session] = {}

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="no such session")
        session.expire_if_stale(settings.reply_timeout)
        return session

    def drive(session: Session) -> None:
        for _ in range(settings.advance_quantum):
            if session.engine.step_once() is not EngineStatus.RUNNING:
                break
        session.note_waiting()

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        if len(sessions) >= settings.capacity:
            raise HTTPException(status_code=503, detail="session capacity reached")
        if body.policy not in SESSION_POLICIES:
            raise HTTPException(status_code=400, detail=f"unknown policy {body.policy!r}")
        seed = body.seed if body.seed is not None else random.randrange(2**32)
        rng = random.Random(f"service:{seed}")
        layout_name, goal = _build_goal(body, rng)
        try:
            world, plan = generate(LAYOUTS[layout_name], goal, seed)
        except Exception as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if body.policy == "oracle":
            policy = OraclePolicy(plan)
        elif body.policy == "look":
            policy = ConstantActPolicy("look")
        else:
            policy = ScriptedReSpActPolicy(goal)
        engine = EpisodeEngine(
            world,
            goal,
            policy,
            cfg=LoopConfig(max_steps=settings.max_steps),
            user=None,  # replies arrive over HTTP
            episode_id=uuid.uuid4().hex,
            seed=seed,
        )
        session = Session(
            session_id=engine.episode.episode_id,
            engine=engine,
            goal_text=goal.goal_text(),
            auto_advance=body.auto_advance,
            world_dict=world_to_dict(world),
        )
        sessions[session.session_id] = session
        return {"session_id": session.session_id, "goal_text": session.goal_text}

    @app.post("/api/sessions/{session_id}/advance")
    def advance(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            status = session.engine.status
            if status is EngineStatus.DONE:
                return JSONResponse(
                    status_code=409,
                    content={
                        "detail": "episode finished",
                        "outcome": session.engine.episode.outcome.value,
                    },
                )
            if status is EngineStatus.AWAITING_USER:
                raise HTTPException(status_code=409, detail="awaiting user reply")
            drive(session)
            return {"events": session.new_events(), "state": session.state_dict()}

    @app.post("/api/sessions/{session_id}/reply")
    def reply(session_id: str, body: ReplyBody) -> dict:
        session = get_session(session_id)
        with session.lock:
            if not body.text.strip():
                raise HTTPException(status_code=422, detail="reply text is empty")
            if session.engine.status is not EngineStatus.AWAITING_USER:
                raise HTTPException(status_code=409, detail="no pending question")
            session.engine.submit_reply(body.text.strip(), persona=Persona.HUMAN)
            session.awaiting_since = None
            if session.auto_advance:
                drive(session)
            return {"ok": True, "state": session.state_dict()}

    @app.get("/api/sessions/{session_id}/transcript")
    def transcript(session_id: str, wizard: bool = False) -> dict:
        session = get_session(session_id)
        payload = {
            "episode_id": session.session_id,
            "goal_text": session.goal_text,
            "events": [event_to_dict(ev) for ev in session.engine.episode.events],
            "state": session.state_dict(),
        }
        if wizard:
            if not settings.wizard_enabled:
                raise HTTPException(status_code=403, detail="wizard mode disabled")
            payload["world"] = world_to_dict(session.engine.world)
        return payload

    @app.websocket("/api/sessions/{session_id}/events")
    async def events_ws(websocket: WebSocket, session_id: str) -> None:
        session = sessions.get(session_id)
        if session is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        sent = 0
        try:
            while True:
                events = session.engine.episode.events
                while sent < len(events):
                    await websocket.send_json(event_to_dict(events[sent]))
                    sent += 1
                if session.engine.status is EngineStatus.DONE:
                    break
                await asyncio.sleep(0.05)
            await websocket.close()
        except WebSocketDisconnect:
            pass

    if settings.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=settings.static_dir, html=True), name="ui")

    return app
