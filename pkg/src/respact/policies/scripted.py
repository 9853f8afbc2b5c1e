"""Deterministic policies: oracle replay, fixed-script replay, and the
scripted Reason+Speak+Act state machine used for simulator evaluations.

The scripted policy knows only its goal. It discovers receptacles from the
opening observation, asks the user where to look, trusts fresh suggestions,
and re-asks after a miss; once suggestions repeat or stop parsing it falls
back to a systematic sweep. Deterministic given (goal, user transcript).
"""

from __future__ import annotations

import re
from collections import deque

from ..core import Decision, DecisionKind, Event, Source, TaskGoal, TaskType
from ..orchestrator import ContextView

_ENTITY_RE = re.compile(r"\b([a-z]+)\s*\(?(\d+)\)?")

APPLIANCE_FOR = {
    TaskType.CLEAN: "sinkbasin",
    TaskType.HEAT: "microwave",
    TaskType.COOL: "fridge",
}
APPLIANCE_VERB = {TaskType.CLEAN: "clean", TaskType.HEAT: "heat", TaskType.COOL: "cool"}


def think(text: str) -> Decision:
    return Decision(DecisionKind.THINK, text)


def speak(text: str) -> Decision:
    return Decision(DecisionKind.SPEAK, text)


def act(text: str) -> Decision:
    return Decision(DecisionKind.ACT, text)


class OraclePolicy:
    """Replays a solver plan as Act decisions; emits "look" once exhausted."""

    def __init__(self, plan: tuple[str, ...] | list[str]):
        self._plan = list(plan)
        self._next = 0

    def decide(self, ctx: ContextView) -> Decision:
        if self._next < len(self._plan):
            command = self._plan[self._next]
            self._next += 1
            return act(command)
        return act("look")


class ReplayPolicy:
    """Replays a fixed decision list (thinks, speaks, acts) verbatim."""

    def __init__(self, decisions: list[Decision]):
        self._decisions = list(decisions)
        self._next = 0

    def decide(self, ctx: ContextView) -> Decision:
        if self._next < len(self._decisions):
            d = self._decisions[self._next]
            self._next += 1
            return d
        return act("look")


class ConstantActPolicy:
    """Emits the same raw command forever (budget and invalid-streak probes)."""

    def __init__(self, command: str = "look"):
        self._command = command

    def decide(self, ctx: ContextView) -> Decision:
        return act(self._command)


def _mentions(text: str) -> list[tuple[str, int]]:
    return [(cls, int(idx)) for cls, idx in _ENTITY_RE.findall(text.lower())]


class ScriptedReSpActPolicy:
    """Finite-state Reason+Speak+Act script driven only by goal + transcript."""

    def __init__(self, goal: TaskGoal):
        self.goal = goal
        self._queue: deque[Decision] = deque()
        self._phase = "intro"
        self._roster: list[str] = []           # receptacle names, listing order
        self._roster_classes: set[str] = set()
        self._search: deque[str] = deque()
        self._visited: set[str] = set()
        self._suggested: set[str] = set()
        self._trusting = True
        self._repeat_strikes = 0
        self._at: str | None = None
        self._pending_open: str | None = None
        self._asked_disambig = False
        self._wanted: list[str] = []           # chosen instance names (pick_two)
        self._delivered = 0
        self._needed = 2 if goal.task_type is TaskType.PICK_TWO else 1
        self._source_rec: str | None = None
        self._lamp_seen: dict[str, str] = {}   # lamp name -> receptacle name

    # -- entry ------------------------------------------------------------

    def decide(self, ctx: ContextView) -> Decision:
        if not self._roster:
            self._load_roster(ctx.initial_observation)
        if self._queue:
            return self._queue.popleft()
        self._advance(ctx)
        if self._queue:
            return self._queue.popleft()
        return act("look")

    # -- state machine ------------------------------------------------------

    def _advance(self, ctx: ContextView) -> None:
        obj = self.goal.object_class
        last = ctx.events[-1] if ctx.events else None

        if self._phase == "intro":
            self._queue.append(think(self._decompose_text()))
            self._phase = "plan_ask"
            return

        if self._phase == "plan_ask":
            self._queue.append(
                think(
                    f"First I need to find {self._article()} {obj}. A {obj} is more likely "
                    f"to appear in {self._candidates_text()}. Let me ask where to look "
                    f"for the {obj}."
                )
            )
            self._phase = "ask"
            return

        if self._phase == "ask":
            self._queue.append(
                speak(
                    f"I need to find {self._article()} {obj}. A {obj} is more likely to "
                    f"appear in {self._candidates_text()}. Where do you suggest I should "
                    f"look for the {obj} first?"
                )
            )
            self._phase = "search"
            return

        if self._phase == "search":
            if last is not None and last.source is Source.USER:
                self._ingest_suggestion(last.text)
            elif last is not None and last.source is Source.ENVIRONMENT:
                if self._handle_search_observation(last, ctx):
                    return
            self._emit_next_visit()
            return

        if self._phase == "disambig":
            if last is not None and last.source is Source.USER:
                self._choose_instances(last.text)
            self._enqueue_acquire(ctx)
            return

        if self._phase == "return":
            if last is not None and last.source is Source.ENVIRONMENT:
                visible = self._goal_instances_in(last.text)
                if visible:
                    self._enqueue_acquire(ctx, visible)
                    return
                self._note_miss()
            # the remaining instances are elsewhere; hand back to the search loop
            self._phase = "search"
            if last is not None and last.source is Source.USER:
                self._ingest_suggestion(last.text)
            self._emit_next_visit()
            return

        if self._phase == "lamp_hunt":
            self._advance_lamp_hunt(last)
            return

        # done / idle
        self._queue.append(act("look"))

    # -- search helpers ---------------------------------------------------

    def _load_roster(self, initial_obs: str) -> None:
        for cls, idx in _mentions(initial_obs):
            self._roster.append(f"{cls} {idx}")
            self._roster_classes.add(cls)

    def _ingest_suggestion(self, reply: str) -> None:
        lowered = reply.lower()
        indexed = [
            f"{cls} {idx}"
            for cls, idx in _mentions(lowered)
            if cls in self._roster_classes
        ]
        if indexed:
            name = indexed[0]
            if name in self._visited or name in self._suggested:
                # repeated advice: double-check a couple of times, then stop trusting
                self._repeat_strikes += 1
                if self._repeat_strikes >= 3:
                    self._trusting = False
                    self._fill_systematic()
                else:
                    self._visited.discard(name)
                    self._search.appendleft(name)
            else:
                self._suggested.add(name)
                self._search.appendleft(name)
            return
        class_only = [
            cls
            for cls in sorted(self._roster_classes, key=lambda c: (-len(c), c))
            if re.search(rf"\b{cls}s?\b", lowered)
        ]
        if class_only:
            cls = class_only[0]
            fresh = sorted(
                (
                    name
                    for name in self._roster
                    if name.startswith(cls + " ") and name not in self._visited
                ),
                key=lambda n: int(n.rsplit(" ", 1)[1]),
            )
            # index-free mention: try instance 1 upward
            for name in reversed(fresh):
                if name not in self._search:
                    self._search.appendleft(name)
            return
        self._trusting = False
        self._fill_systematic()

    def _fill_systematic(self) -> None:
        for name in self._roster:
            if name not in self._visited and name not in self._search:
                self._search.append(name)

    def _handle_search_observation(self, last: Event, ctx: ContextView) -> bool:
        """React to the env response of our previous search act; True when a
        follow-up decision was queued."""
        if self._pending_open is not None:
            name = self._pending_open
            self._pending_open = None
            if last.text.startswith(f"The {name} is closed."):
                self._queue.append(act(f"open {name}"))
                return True
        if last.invalid:
            self._note_miss()
            return False
        visible = self._goal_instances_in(last.text)
        self._remember_lamps(last.text)
        if visible and self._at is not None:
            self._source_rec = self._at
            remaining = self._needed - self._delivered
            if (
                self.goal.task_type is TaskType.PICK_TWO
                and len(visible) > remaining
                and not self._asked_disambig
            ):
                self._asked_disambig = True
                self._queue.append(
                    think(
                        f"Now I found {self._count_word(len(visible))} {self.goal.object_class}s. "
                        f"{self._enumerate(visible)}. Let me ask which two I should pick."
                    )
                )
                self._queue.append(
                    speak(
                        f"I found {self._count_word(len(visible))} {self.goal.object_class}s. "
                        f"{self._enumerate(visible)}. Which two should I put in the "
                        f"{self.goal.target_receptacle_class}?"
                    )
                )
                self._phase = "disambig"
                return True
            self._enqueue_acquire(ctx, visible)
            return True
        self._note_miss()
        return False

    def _note_miss(self) -> None:
        if self._at is not None:
            self._visited.add(self._at)

    def _emit_next_visit(self) -> None:
        obj = self.goal.object_class
        if not self._search and self._trusting:
            # suggestion path exhausted without a hit: ask again
            where = f"at the {self._at}" if self._at else "yet"
            self._queue.append(
                think(
                    f"The {obj} is not {('at the ' + self._at) if self._at else 'found'}. "
                    f"Let me ask where I should look next."
                )
            )
            self._queue.append(
                speak(
                    f"I could not find the {obj} {where}. Where do you suggest I "
                    f"should look for the {obj} next?"
                )
            )
            return
        if not self._search:
            self._fill_systematic()
        while self._search:
            name = self._search.popleft()
            if name in self._visited:
                continue
            self._at = name
            self._pending_open = name
            self._queue.append(act(f"go to {name}"))
            return
        self._queue.append(act("look"))

    # -- acquisition and delivery -------------------------------------------

    def _goal_instances_in(self, obs: str) -> list[str]:
        wanted = self.goal.object_class
        return [f"{cls} {idx}" for cls, idx in _mentions(obs) if cls == wanted]

    def _remember_lamps(self, obs: str) -> None:
        lamp_cls = self.goal.target_receptacle_class  # "desklamp" for examine
        if self.goal.task_type is not TaskType.EXAMINE or self._at is None:
            return
        for cls, idx in _mentions(obs):
            if cls == lamp_cls:
                self._lamp_seen[f"{cls} {idx}"] = self._at

    def _choose_instances(self, reply: str) -> None:
        wanted = [
            f"{cls} {idx}"
            for cls, idx in _mentions(reply)
            if cls == self.goal.object_class
        ]
        self._wanted = wanted[: self._needed]

    def _enqueue_acquire(self, ctx: ContextView, visible: list[str] | None = None) -> None:
        if visible is None:
            visible = self._last_visible(ctx)
        if not visible:
            self._phase = "search"
            self._emit_next_visit()
            return
        chosen = [name for name in self._wanted if name in visible] or visible
        instance = chosen[0]
        obj = self.goal.object_class
        ordinal = ("first", "second")[min(self._delivered, 1)]
        prefix = f"the {ordinal} " if self.goal.task_type is TaskType.PICK_TWO else "the "
        idx = instance.rsplit(" ", 1)[1]
        self._queue.append(
            think(f"Now I find {prefix}{obj} ({idx}). Next, I need to take it.")
        )
        self._queue.append(act(f"take {instance} from {self._at}"))
        self._queue.append(think(self._after_take_text(instance)))
        tt = self.goal.task_type
        if tt in APPLIANCE_FOR:
            appliance = self._first_of_class(APPLIANCE_FOR[tt])
            if appliance is not None:
                self._queue.append(act(f"go to {appliance}"))
                self._queue.append(act(f"{APPLIANCE_VERB[tt]} {instance} with {appliance}"))
        if tt is TaskType.EXAMINE:
            self._phase = "lamp_hunt"
            self._hunt_lamp()
            return
        target = self._first_of_class(self.goal.target_receptacle_class)
        if target is None:
            self._phase = "search"
            return
        self._queue.append(act(f"go to {target}"))
        self._queue.append(act(f"put {instance} in/on {target}"))
        self._delivered += 1
        if self.goal.task_type is TaskType.PICK_TWO and self._delivered < self._needed:
            back = self._source_rec
            if back is not None:
                self._queue.append(
                    think(
                        f"Now I put the {ordinal} {obj} in the "
                        f"{self.goal.target_receptacle_class}. Next, I need to take the "
                        f"second {obj}. I can directly go to {back}."
                    )
                )
                self._queue.append(act(f"go to {back}"))
                self._at = back
                self._phase = "return"
            else:
                self._phase = "search"
        else:
            self._phase = "done"

    def _last_visible(self, ctx: ContextView) -> list[str]:
        for ev in reversed(ctx.events):
            if (
                ev.source is Source.ENVIRONMENT
                and ev.kind == "observation"
                and ev.text != "OK."
            ):
                return self._goal_instances_in(ev.text)
        return []

    def _after_take_text(self, instance: str) -> str:
        obj = self.goal.object_class
        idx = instance.rsplit(" ", 1)[1]
        tt = self.goal.task_type
        if tt is TaskType.CLEAN:
            tail = f"clean it with the sinkbasin and put it in/on the {self.goal.target_receptacle_class}."
        elif tt is TaskType.HEAT:
            tail = f"heat it with the microwave and put it in/on the {self.goal.target_receptacle_class}."
        elif tt is TaskType.COOL:
            tail = f"cool it with the fridge and put it in/on the {self.goal.target_receptacle_class}."
        elif tt is TaskType.EXAMINE:
            tail = "find a desklamp and turn it on."
        else:
            tail = f"put it in/on the {self.goal.target_receptacle_class}."
        ordinal = ("first", "second")[min(self._delivered, 1)]
        prefix = f"the {ordinal} " if tt is TaskType.PICK_TWO else "the "
        return f"Now I take {prefix}{obj} ({idx}). Next, I need to {tail}"

    # -- lamp hunt (examine) --------------------------------------------------

    def _hunt_lamp(self) -> None:
        if self._lamp_seen:
            lamp, location = next(iter(self._lamp_seen.items()))
            if self._at != location:
                self._queue.append(act(f"go to {location}"))
                self._at = location
            self._queue.append(act(f"toggle {lamp}"))
            self._phase = "done"
            return
        for name in self._roster:
            if name not in self._visited and name != self._at:
                self._at = name
                self._queue.append(act(f"go to {name}"))
                return
        self._queue.append(act("look"))

    def _advance_lamp_hunt(self, last: Event | None) -> None:
        if last is not None and last.source is Source.ENVIRONMENT:
            if self._at is not None and last.text.startswith(f"The {self._at} is closed."):
                self._queue.append(act(f"open {self._at}"))
                return
            self._remember_lamps(last.text)
            if self._at is not None:
                self._visited.add(self._at)
        self._hunt_lamp()

    # -- wording -----------------------------------------------------------

    def _decompose_text(self) -> str:
        obj = self.goal.object_class
        rec = self.goal.target_receptacle_class
        tt = self.goal.task_type
        if tt is TaskType.PICK:
            return f"To solve the task, I need to find and take a {obj}, then put it in/on a {rec}."
        if tt is TaskType.CLEAN:
            return (
                f"To solve the task, I need to find and take a {obj}, clean it with the "
                f"sinkbasin, then put it in/on a {rec}."
            )
        if tt is TaskType.HEAT:
            return (
                f"To solve the task, I need to find and take a {obj}, heat it with the "
                f"microwave, then put it in/on a {rec}."
            )
        if tt is TaskType.COOL:
            return (
                f"To solve the task, I need to find and take a {obj}, cool it with the "
                f"fridge, then put it in/on a {rec}."
            )
        if tt is TaskType.EXAMINE:
            return (
                f"To solve the task, I need to find and take a {obj}, then find a desklamp "
                f"and turn it on."
            )
        return (
            f"To solve the task, I need to find and take the first {obj}, then put it in "
            f"{rec}, then find and take the second {obj}, then put it in {rec}."
        )

    def _article(self) -> str:
        return "the first" if self.goal.task_type is TaskType.PICK_TWO else "a"

    def _candidates_text(self) -> str:
        groups: dict[str, list[int]] = {}
        for name in self._roster:
            cls, idx = name.rsplit(" ", 1)
            groups.setdefault(cls, []).append(int(idx))
        parts = []
        for cls in groups:
            indices = sorted(groups[cls])
            span = f"{indices[0]}" if len(indices) == 1 else f"{indices[0]}-{indices[-1]}"
            parts.append(f"{cls} ({span})")
        return ", ".join(parts)

    def _first_of_class(self, cls: str) -> str | None:
        best: tuple[int, str] | None = None
        for name in self._roster:
            if name.startswith(cls + " "):
                idx = int(name.rsplit(" ", 1)[1])
                if best is None or idx < best[0]:
                    best = (idx, name)
        return best[1] if best else None

    @staticmethod
    def _count_word(n: int) -> str:
        words = {2: "two", 3: "three", 4: "four", 5: "five"}
        return words.get(n, str(n))

    @staticmethod
    def _enumerate(instances: list[str]) -> str:
        parts = []
        for name in sorted(instances, key=lambda s: -int(s.rsplit(" ", 1)[1])):
            cls, idx = name.rsplit(" ", 1)
            parts.append(f"{cls} ({idx})")
        return ", ".join(parts)
