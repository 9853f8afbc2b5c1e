"""The episode loop: solicit a Decision, route it, fold the response back.

Think routes to the fixed "OK." echo, Speak to the user channel, Act through
the grammar into the environment. The engine is an explicit state machine so
a human user channel can park it mid-Speak (service mode) while simulator
channels answer synchronously.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Protocol
from uuid import uuid4

from .core import (
    Counters,
    Decision,
    DecisionKind,
    Episode,
    Event,
    KIND_OBSERVATION,
    KIND_USER,
    Outcome,
    Persona,
    Source,
    TaskGoal,
    THINK_ECHO,
    UserResponse,
    now_rfc3339,
    recount,
)
from .grammar import ParseError, parse_action
from .household import (
    NOTHING_HAPPENS,
    WorldState,
    goal_satisfied,
    initial_observation,
    step,
)


class PolicyFailure(Exception):
    """The policy raised, timed out, or kept returning garbage."""


class UserChannelClosed(Exception):
    """The user channel is gone (human disconnected, stream closed)."""


@dataclass(frozen=True)
class LoopConfig:
    max_steps: int = 50
    max_consecutive_invalid: int = 10
    require_user_reply: bool = True

    def __post_init__(self) -> None:
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.max_consecutive_invalid < 1:
            raise ValueError("max_consecutive_invalid must be >= 1")


@dataclass(frozen=True)
class ContextView:
    """Read-only slice of the episode handed to ports.

    ``world`` is populated only on the user-simulator path: simulated users
    hold oracle knowledge, policies never see hidden state.
    """

    task: TaskGoal
    goal_text: str
    initial_observation: str
    events: tuple[Event, ...]
    world: WorldState | None = None


class PolicyPort(Protocol):
    def decide(self, ctx: ContextView) -> Decision: ...


class UserPort(Protocol):
    def respond(self, ctx: ContextView, utterance: str) -> UserResponse: ...


class EventSink(Protocol):
    def on_episode_start(self, episode: Episode, initial_obs: str) -> None: ...
    def on_event(self, episode_id: str, event: Event) -> None: ...
    def on_episode_end(self, episode: Episode) -> None: ...


class NullSink:
    def on_episode_start(self, episode: Episode, initial_obs: str) -> None:
        pass

    def on_event(self, episode_id: str, event: Event) -> None:
        pass

    def on_episode_end(self, episode: Episode) -> None:
        pass


class EngineStatus(Enum):
    RUNNING = "running"
    AWAITING_USER = "awaiting_user"
    DONE = "done"


@dataclass
class _Tally:
    think: int = 0
    speak: int = 0
    act: int = 0
    invalid: int = 0

    def to_counters(self) -> Counters:
        return Counters(self.think, self.speak, self.act, self.invalid)


class EpisodeEngine:
    """Drives one episode decision by decision.

    With a user port set, Speak resolves synchronously. Without one, the
    engine parks in AWAITING_USER until submit_reply() supplies the single
    reply every Speak must receive.
    """

    def __init__(
        self,
        world: WorldState,
        goal: TaskGoal,
        policy: PolicyPort,
        cfg: LoopConfig | None = None,
        user: UserPort | None = None,
        sink: EventSink | None = None,
        episode_id: str | None = None,
        seed: int = 0,
    ):
        self.cfg = cfg or LoopConfig()
        self.goal = goal
        self.policy = policy
        self.user = user
        self.sink: EventSink = sink or NullSink()
        self._world = world
        self._initial_obs = initial_observation(world)
        self.episode = Episode(
            episode_id=episode_id or uuid4().hex, task=goal, seed=seed
        )
        self._tally = _Tally()
        self._decisions = 0
        self._consecutive_invalid = 0
        self._pending_speak: str | None = None
        self.sink.on_episode_start(self.episode, self._initial_obs)
        if goal_satisfied(world, goal):
            self._finalize(Outcome.SUCCESS)

    # -- views ----------------------------------------------------------------

    @property
    def world(self) -> WorldState:
        return self._world

    @property
    def initial_obs(self) -> str:
        return self._initial_obs

    @property
    def decisions_made(self) -> int:
        return self._decisions

    @property
    def awaiting_utterance(self) -> str | None:
        return self._pending_speak

    @property
    def status(self) -> EngineStatus:
        if self.episode.outcome is not None:
            return EngineStatus.DONE
        if self._pending_speak is not None:
            return EngineStatus.AWAITING_USER
        return EngineStatus.RUNNING

    def view(self, with_world: bool = False) -> ContextView:
        return ContextView(
            task=self.goal,
            goal_text=self.goal.goal_text(),
            initial_observation=self._initial_obs,
            events=tuple(self.episode.events),
            world=self._world if with_world else None,
        )

    # -- driving --------------------------------------------------------------

    def step_once(self) -> EngineStatus:
        """Process at most one agent decision."""
        if self.status is not EngineStatus.RUNNING:
            return self.status

        try:
            decision = self.policy.decide(self.view())
        except Exception:
            self._finalize(Outcome.ABORTED)
            return self.status

        step_no = self._decisions
        self._decisions += 1
        self._append(Event(step_no, Source.AGENT, decision.kind.value, decision.text))

        if decision.kind is DecisionKind.THINK:
            self._tally.think += 1
            self._append(Event(step_no, Source.ENVIRONMENT, KIND_OBSERVATION, THINK_ECHO))
        elif decision.kind is DecisionKind.SPEAK:
            self._tally.speak += 1
            if self.user is None:
                self._pending_speak = decision.text
                return self.status
            try:
                response = self.user.respond(self.view(with_world=True), decision.text)
            except Exception:
                self._finalize(Outcome.ABORTED)
                return self.status
            self._append(Event(step_no, Source.USER, KIND_USER, response.text))
        else:
            self._route_act(step_no, decision.text)

        self._check_termination()
        return self.status

    def submit_reply(self, text: str, persona: Persona = Persona.HUMAN) -> None:
        """Fold in the reply to a parked Speak and resume."""
        if self.status is not EngineStatus.AWAITING_USER:
            raise RuntimeError("no Speak is awaiting a reply")
        response = UserResponse(text=text, persona=persona)
        step_no = self._decisions - 1
        self._pending_speak = None
        self._append(Event(step_no, Source.USER, KIND_USER, response.text))
        self._check_termination()

    def abort(self) -> None:
        if self.episode.outcome is None:
            self._finalize(Outcome.ABORTED)

    def run(self) -> Episode:
        """Loop to completion; requires a synchronous user port for Speak."""
        while True:
            status = self.step_once()
            if status is EngineStatus.DONE:
                return self.episode
            if status is EngineStatus.AWAITING_USER:
                raise RuntimeError("run() needs a user port; engine parked on Speak")

    # -- internals ------------------------------------------------------------

    def _route_act(self, step_no: int, raw: str) -> None:
        self._tally.act += 1
        try:
            action = parse_action(raw)
        except ParseError:
            self._record_env(step_no, NOTHING_HAPPENS, invalid=True)
            return
        result = step(self._world, action)
        self._world = result.state
        self._record_env(step_no, result.observation, invalid=not result.valid)
        if result.valid and goal_satisfied(self._world, self.goal):
            self._finalize(Outcome.SUCCESS)

    def _record_env(self, step_no: int, obs: str, invalid: bool) -> None:
        if invalid:
            self._tally.invalid += 1
            self._consecutive_invalid += 1
        else:
            self._consecutive_invalid = 0
        self._append(Event(step_no, Source.ENVIRONMENT, KIND_OBSERVATION, obs, invalid=invalid))

    def _check_termination(self) -> None:
        if self.episode.outcome is not None:
            return
        if self._consecutive_invalid >= self.cfg.max_consecutive_invalid:
            self._finalize(Outcome.BUDGET_EXHAUSTED)
        elif self._decisions >= self.cfg.max_steps and self._pending_speak is None:
            self._finalize(Outcome.BUDGET_EXHAUSTED)

    def _append(self, event: Event) -> None:
        stamped = Event(
            event.step, event.source, event.kind, event.text, event.invalid, now_rfc3339()
        )
        self.episode.append(stamped)
        self.sink.on_event(self.episode.episode_id, stamped)

    def _finalize(self, outcome: Outcome) -> None:
        self.episode.finalize(outcome, self._tally.to_counters())
        assert self.episode.counters == recount(self.episode)
        self.sink.on_episode_end(self.episode)


def run_episode(
    world: WorldState,
    goal: TaskGoal,
    policy: PolicyPort,
    user: UserPort,
    cfg: LoopConfig | None = None,
    sink: EventSink | None = None,
    episode_id: str | None = None,
    seed: int = 0,
) -> Episode:
    engine = EpisodeEngine(
        world, goal, policy, cfg=cfg, user=user, sink=sink, episode_id=episode_id, seed=seed
    )
    return engine.run()
