"""Deterministic household world: state, action semantics, goal predicate.

States are immutable values; `step` returns a new state. Every failed
precondition is an in-band "Nothing happens." with the state unchanged, so
invalid actions are pure no-ops. Observation strings are fixed templates,
stable enough for golden-file tests.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from ..core import TaskGoal, TaskType
from ..grammar import EnvAction, Verb

OPENABLE_CLASSES = frozenset({"cabinet", "drawer", "fridge", "microwave"})
LAMP_CLASSES = frozenset({"desklamp"})

INVENTORY = "inventory"
START = "start"

NOTHING_HAPPENS = "Nothing happens."


class Temperature(Enum):
    NORMAL = "normal"
    HOT = "hot"
    COLD = "cold"


class Cleanliness(Enum):
    DIRTY = "dirty"
    CLEAN = "clean"


@dataclass(frozen=True)
class Receptacle:
    name: str
    class_name: str
    openable: bool
    is_open: bool = True  # non-openable receptacles are always accessible


@dataclass(frozen=True)
class ObjectState:
    name: str
    class_name: str
    location: str  # receptacle name or "inventory"
    temperature: Temperature = Temperature.NORMAL
    cleanliness: Cleanliness = Cleanliness.DIRTY
    lamp_on: bool = False


@dataclass(frozen=True)
class WorldState:
    receptacles: tuple[Receptacle, ...]
    objects: tuple[ObjectState, ...]
    agent_at: str = START
    inventory: str | None = None

    def receptacle(self, name: str) -> Receptacle | None:
        for r in self.receptacles:
            if r.name == name:
                return r
        return None

    def object(self, name: str) -> ObjectState | None:
        for o in self.objects:
            if o.name == name:
                return o
        return None

    def objects_at(self, location: str) -> tuple[ObjectState, ...]:
        return tuple(o for o in self.objects if o.location == location)

    def _with_object(self, obj: ObjectState) -> WorldState:
        objs = tuple(obj if o.name == obj.name else o for o in self.objects)
        return replace(self, objects=objs)

    def _with_receptacle(self, rec: Receptacle) -> WorldState:
        recs = tuple(rec if r.name == rec.name else r for r in self.receptacles)
        return replace(self, receptacles=recs)


@dataclass(frozen=True)
class StepResult:
    state: WorldState
    observation: str
    valid: bool


def _sorted_names(items: list[tuple[str, int]]) -> list[str]:
    # class ascending, index descending — the listing order of the transcripts
    return [f"{c} {i}" for c, i in sorted(items, key=lambda ci: (ci[0], -ci[1]))]


def _listing(names: list[str]) -> str:
    if not names:
        return "nothing"
    if len(names) == 1:
        return f"a {names[0]}"
    return ", ".join(f"a {n}" for n in names[:-1]) + f", and a {names[-1]}"


def _split(name: str) -> tuple[str, int]:
    cls, idx = name.rsplit(" ", 1)
    return cls, int(idx)


def contents_listing(state: WorldState, receptacle_name: str) -> str:
    names = [_split(o.name) for o in state.objects_at(receptacle_name)]
    return _listing(_sorted_names(names))


def initial_observation(state: WorldState) -> str:
    names = _sorted_names([_split(r.name) for r in state.receptacles])
    return (
        "You are in the middle of a room. Looking quickly around you, "
        f"you see {_listing(names)}."
    )


def location_description(state: WorldState) -> str:
    if state.agent_at == START:
        return initial_observation(state)
    rec = state.receptacle(state.agent_at)
    assert rec is not None
    if rec.openable and not rec.is_open:
        return f"The {rec.name} is closed."
    return f"On the {rec.name}, you see {contents_listing(state, rec.name)}."


def _fail(state: WorldState) -> StepResult:
    return StepResult(state, NOTHING_HAPPENS, False)


def step(state: WorldState, action: EnvAction) -> StepResult:
    """Apply one grammar-valid action; failed preconditions are no-ops."""
    v = action.verb

    if v is Verb.LOOK:
        return StepResult(state, location_description(state), True)

    if v is Verb.GOTO:
        rec = state.receptacle(str(action.receptacle))
        if rec is None:
            return _fail(state)
        moved = replace(state, agent_at=rec.name)
        return StepResult(moved, location_description(moved), True)

    if v is Verb.OPEN:
        rec = state.receptacle(str(action.receptacle))
        if rec is None or state.agent_at != rec.name or not rec.openable or rec.is_open:
            return _fail(state)
        opened = state._with_receptacle(replace(rec, is_open=True))
        obs = (
            f"You open the {rec.name}. The {rec.name} is open. "
            f"In it, you see {contents_listing(opened, rec.name)}."
        )
        return StepResult(opened, obs, True)

    if v is Verb.CLOSE:
        rec = state.receptacle(str(action.receptacle))
        if rec is None or state.agent_at != rec.name or not rec.openable or not rec.is_open:
            return _fail(state)
        closed = state._with_receptacle(replace(rec, is_open=False))
        return StepResult(closed, f"You close the {rec.name}.", True)

    if v is Verb.TAKE:
        obj = state.object(str(action.obj))
        rec = state.receptacle(str(action.receptacle))
        if obj is None or rec is None:
            return _fail(state)
        if state.agent_at != rec.name or obj.location != rec.name:
            return _fail(state)
        if rec.openable and not rec.is_open:
            return _fail(state)
        if state.inventory is not None:
            return _fail(state)
        nxt = state._with_object(replace(obj, location=INVENTORY))
        nxt = replace(nxt, inventory=obj.name)
        return StepResult(nxt, f"You pick up the {obj.name} from the {rec.name}.", True)

    if v is Verb.PUT:
        obj = state.object(str(action.obj))
        rec = state.receptacle(str(action.receptacle))
        if obj is None or rec is None:
            return _fail(state)
        if state.agent_at != rec.name or state.inventory != obj.name:
            return _fail(state)
        nxt = state._with_object(replace(obj, location=rec.name))
        nxt = replace(nxt, inventory=None)
        return StepResult(nxt, f"You put the {obj.name} in/on the {rec.name}.", True)

    if v in (Verb.CLEAN, Verb.HEAT, Verb.COOL):
        wanted = {Verb.CLEAN: "sinkbasin", Verb.HEAT: "microwave", Verb.COOL: "fridge"}[v]
        obj = state.object(str(action.obj))
        rec = state.receptacle(str(action.receptacle))
        if obj is None or rec is None or rec.class_name != wanted:
            return _fail(state)
        if state.agent_at != rec.name or state.inventory != obj.name:
            return _fail(state)
        if v is Verb.CLEAN:
            nxt = state._with_object(replace(obj, cleanliness=Cleanliness.CLEAN))
            word = "clean"
        elif v is Verb.HEAT:
            nxt = state._with_object(replace(obj, temperature=Temperature.HOT))
            word = "heat"
        else:
            nxt = state._with_object(replace(obj, temperature=Temperature.COLD))
            word = "cool"
        return StepResult(nxt, f"You {word} the {obj.name} using the {rec.name}.", True)

    if v in (Verb.TOGGLE, Verb.USE):
        target = state.object(str(action.target))
        if target is None or target.class_name not in LAMP_CLASSES:
            return _fail(state)
        if state.agent_at == START or target.location != state.agent_at:
            return _fail(state)
        lit = state._with_object(replace(target, lamp_on=True))
        return StepResult(lit, f"You turn on the {target.name}.", True)

    return _fail(state)


def goal_satisfied(state: WorldState, goal: TaskGoal) -> bool:
    tt = goal.task_type

    if tt is TaskType.EXAMINE:
        if state.inventory is None or state.agent_at == START:
            return False
        held = state.object(state.inventory)
        if held is None or held.class_name != goal.object_class:
            return False
        return any(
            o.class_name in LAMP_CLASSES and o.lamp_on and o.location == state.agent_at
            for o in state.objects
        )

    def on_target(obj: ObjectState) -> bool:
        rec = state.receptacle(obj.location)
        return rec is not None and rec.class_name == goal.target_receptacle_class

    placed = [
        o for o in state.objects if o.class_name == goal.object_class and on_target(o)
    ]
    if tt is TaskType.PICK:
        return bool(placed)
    if tt is TaskType.CLEAN:
        return any(o.cleanliness is Cleanliness.CLEAN for o in placed)
    if tt is TaskType.HEAT:
        return any(o.temperature is Temperature.HOT for o in placed)
    if tt is TaskType.COOL:
        return any(o.temperature is Temperature.COLD for o in placed)
    return len(placed) >= 2  # PICK_TWO


def world_to_dict(state: WorldState) -> dict:
    return {
        "agent_at": state.agent_at,
        "inventory": state.inventory,
        "receptacles": [
            {
                "name": r.name,
                "class": r.class_name,
                "openable": r.openable,
                "is_open": r.is_open,
            }
            for r in state.receptacles
        ],
        "objects": [
            {
                "name": o.name,
                "class": o.class_name,
                "location": o.location,
                "temperature": o.temperature.value,
                "cleanliness": o.cleanliness.value,
                "lamp_on": o.lamp_on,
            }
            for o in state.objects
        ],
    }


def world_from_dict(d: dict) -> WorldState:
    return WorldState(
        receptacles=tuple(
            Receptacle(r["name"], r["class"], r["openable"], r["is_open"])
            for r in d["receptacles"]
        ),
        objects=tuple(
            ObjectState(
                o["name"],
                o["class"],
                o["location"],
                Temperature(o["temperature"]),
                Cleanliness(o["cleanliness"]),
                o["lamp_on"],
            )
            for o in d["objects"]
        ),
        agent_at=d["agent_at"],
        inventory=d["inventory"],
    )
