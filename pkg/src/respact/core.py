"""Domain types shared by every module: decisions, events, episodes, goals.

Everything here is a plain value type. An Episode is the agent's whole
context — the append-only history of decisions, observations, and user
replies — plus the final outcome and redundant counters.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum


class DecisionKind(Enum):
    THINK = "think"
    SPEAK = "speak"
    ACT = "act"


class Source(Enum):
    AGENT = "agent"
    ENVIRONMENT = "environment"
    USER = "user"


class Outcome(Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    BUDGET_EXHAUSTED = "budget_exhausted"
    ABORTED = "aborted"


class TaskType(Enum):
    PICK = "pick"
    CLEAN = "clean"
    HEAT = "heat"
    COOL = "cool"
    EXAMINE = "examine"
    PICK_TWO = "pick_two"


class Persona(Enum):
    HELPFUL_KNOWLEDGEABLE = "helpful"
    HELPFUL_PERTURBED = "perturbed"
    UNHELPFUL = "unhelpful"
    HUMAN = "human"
    LLM = "llm"


# Event.kind values for non-agent events.
KIND_OBSERVATION = "observation"
KIND_USER = "user"

THINK_ECHO = "OK."


@dataclass(frozen=True)
class Decision:
    """One policy output: an internal thought, a user-directed utterance,
    or a raw environment command (parsing is the grammar's job)."""

    kind: DecisionKind
    text: str

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("decision text must be non-empty")


@dataclass(frozen=True)
class UserResponse:
    text: str
    persona: Persona

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("user response text must be non-empty")


@dataclass(frozen=True)
class Event:
    """One line of episode history.

    ``step`` counts agent decisions; the response event produced by routing
    a decision carries the same step as that decision. ``invalid`` may be
    true only on the environment event answering an Act.
    """

    step: int
    source: Source
    kind: str  # think | speak | act | observation | user
    text: str
    invalid: bool = False
    ts: str = ""

    def __post_init__(self) -> None:
        if self.step < 0:
            raise ValueError("event step must be non-negative")
        if self.invalid and self.source is not Source.ENVIRONMENT:
            raise ValueError("invalid flag is only legal on environment events")


def now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class TaskGoal:
    task_type: TaskType
    object_class: str
    target_receptacle_class: str

    def __post_init__(self) -> None:
        if self.task_type is TaskType.EXAMINE and self.target_receptacle_class != "desklamp":
            raise ValueError("examine goals target the desklamp")

    def goal_text(self) -> str:
        obj = self.object_class
        rec = self.target_receptacle_class
        prep = "in" if rec in _IN_RECEPTACLES else "on"
        if self.task_type is TaskType.PICK:
            return f"put some {obj} {prep} {rec}."
        if self.task_type is TaskType.CLEAN:
            return f"put a clean {obj} {prep} {rec}."
        if self.task_type is TaskType.HEAT:
            return f"put a hot {obj} {prep} {rec}."
        if self.task_type is TaskType.COOL:
            return f"put a cool {obj} {prep} {rec}."
        if self.task_type is TaskType.EXAMINE:
            return f"examine the {obj} with the desklamp."
        return f"put two {obj} {prep} {rec}."


_IN_RECEPTACLES = {
    "drawer", "cabinet", "fridge", "microwave", "dresser",
    "garbagecan", "laundryhamper", "sinkbasin",
}


@dataclass(frozen=True)
class Counters:
    think_count: int = 0
    speak_count: int = 0
    act_count: int = 0
    invalid_count: int = 0

    def __post_init__(self) -> None:
        for n in (self.think_count, self.speak_count, self.act_count, self.invalid_count):
            if n < 0:
                raise ValueError("counters must be non-negative")


@dataclass
class Episode:
    """Append-only event log plus outcome — the context c the policy sees.

    ``append`` is the only mutation path; past entries are never edited.
    """

    episode_id: str
    task: TaskGoal
    seed: int
    events: list[Event] = field(default_factory=list)
    outcome: Outcome | None = None
    counters: Counters | None = None

    def append(self, event: Event) -> None:
        if self.outcome is not None:
            raise ValueError("episode already finalized")
        if event.source is Source.AGENT:
            expected = self._next_decision_step()
            if event.step != expected:
                raise ValueError(f"decision step {event.step}, expected {expected}")
        else:
            last = self._last_decision_step()
            if last is None or event.step != last:
                raise ValueError("response event must share its decision's step")
            if event.invalid and self.events[-1].kind != DecisionKind.ACT.value:
                raise ValueError("invalid flag only follows an Act")
        self.events.append(event)

    def finalize(self, outcome: Outcome, counters: Counters) -> None:
        if self.outcome is not None:
            raise ValueError("episode already finalized")
        self.outcome = outcome
        self.counters = counters

    def _next_decision_step(self) -> int:
        last = self._last_decision_step()
        return 0 if last is None else last + 1

    def _last_decision_step(self) -> int | None:
        for ev in reversed(self.events):
            if ev.source is Source.AGENT:
                return ev.step
        return None


def recount(episode: Episode) -> Counters:
    """Tally Think/Speak/Act decisions and invalid acts purely from events."""
    think = speak = act = invalid = 0
    for ev in episode.events:
        if ev.source is Source.AGENT:
            if ev.kind == DecisionKind.THINK.value:
                think += 1
            elif ev.kind == DecisionKind.SPEAK.value:
                speak += 1
            elif ev.kind == DecisionKind.ACT.value:
                act += 1
        elif ev.invalid:
            invalid += 1
    return Counters(think, speak, act, invalid)


def copy_with_events(episode: Episode, events: list[Event]) -> Episode:
    return replace(episode, events=list(events))
