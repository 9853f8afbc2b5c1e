"""Shortest-plan solver: breadth-first search over the household action graph.

The search only expands moves that can advance the goal (navigation to
receptacles that matter, taking goal-class objects, opening receptacles
that hide one, the goal's appliance action, placement on the target).
Every pruned move is provably useless — it can only lengthen a plan — so
the result is still shortest with respect to the full action set; an
unpruned reference search in the test suite holds it to that.
"""

from __future__ import annotations

from collections import deque

from ..core import TaskGoal, TaskType
from ..grammar import EntityRef, EnvAction, Verb, format_action
from .world import (
    LAMP_CLASSES,
    START,
    WorldState,
    goal_satisfied,
    step,
)

APPLIANCE_FOR = {
    TaskType.CLEAN: "sinkbasin",
    TaskType.HEAT: "microwave",
    TaskType.COOL: "fridge",
}

_MAX_EXPANSIONS = 1_000_000


class Unsolvable(Exception):
    """BFS exhausted the reachable state space without satisfying the goal."""


def _ref(name: str) -> EntityRef:
    cls, idx = name.rsplit(" ", 1)
    return EntityRef(cls, int(idx))


def _interesting_receptacles(state: WorldState, goal: TaskGoal) -> list[str]:
    names: list[str] = []
    seen: set[str] = set()

    def add(name: str) -> None:
        if name not in seen:
            seen.add(name)
            names.append(name)

    for obj in state.objects:
        if obj.class_name == goal.object_class and obj.location != "inventory":
            add(obj.location)
    appliance = APPLIANCE_FOR.get(goal.task_type)
    for rec in state.receptacles:
        if appliance is not None and rec.class_name == appliance:
            add(rec.name)
        if goal.task_type is not TaskType.EXAMINE and rec.class_name == goal.target_receptacle_class:
            add(rec.name)
    if goal.task_type is TaskType.EXAMINE:
        for obj in state.objects:
            if obj.class_name in LAMP_CLASSES and obj.location != "inventory":
                add(obj.location)
    return names


def _candidate_actions(state: WorldState, goal: TaskGoal) -> list[EnvAction]:
    out: list[EnvAction] = []
    at = state.agent_at
    rec = state.receptacle(at) if at != START else None

    if rec is not None:
        rec_ref = _ref(rec.name)
        accessible = rec.is_open or not rec.openable
        if rec.openable and not rec.is_open and any(
            o.class_name == goal.object_class for o in state.objects_at(rec.name)
        ):
            out.append(EnvAction(Verb.OPEN, receptacle=rec_ref))
        if state.inventory is None and accessible:
            for obj in state.objects_at(rec.name):
                if obj.class_name == goal.object_class:
                    out.append(EnvAction(Verb.TAKE, obj=_ref(obj.name), receptacle=rec_ref))
        if state.inventory is not None:
            held = state.object(state.inventory)
            assert held is not None
            held_ref = _ref(held.name)
            if held.class_name == goal.object_class:
                appliance = APPLIANCE_FOR.get(goal.task_type)
                if appliance is not None and rec.class_name == appliance and not _treated(held, goal):
                    verb = {"sinkbasin": Verb.CLEAN, "microwave": Verb.HEAT, "fridge": Verb.COOL}[appliance]
                    out.append(EnvAction(verb, obj=held_ref, receptacle=rec_ref))
                if (
                    goal.task_type is not TaskType.EXAMINE
                    and rec.class_name == goal.target_receptacle_class
                ):
                    out.append(EnvAction(Verb.PUT, obj=held_ref, receptacle=rec_ref))
            else:
                # free the single inventory slot
                out.append(EnvAction(Verb.PUT, obj=held_ref, receptacle=rec_ref))
        if goal.task_type is TaskType.EXAMINE:
            for obj in state.objects_at(rec.name):
                if obj.class_name in LAMP_CLASSES and not obj.lamp_on:
                    out.append(EnvAction(Verb.TOGGLE, obj=_ref(obj.name)))

    for name in _interesting_receptacles(state, goal):
        if name != at:
            out.append(EnvAction(Verb.GOTO, receptacle=_ref(name)))
    return out


def _treated(obj, goal: TaskGoal) -> bool:
    from .world import Cleanliness, Temperature

    if goal.task_type is TaskType.CLEAN:
        return obj.cleanliness is Cleanliness.CLEAN
    if goal.task_type is TaskType.HEAT:
        return obj.temperature is Temperature.HOT
    if goal.task_type is TaskType.COOL:
        return obj.temperature is Temperature.COLD
    return False


def oracle_solve(state: WorldState, goal: TaskGoal) -> tuple[str, ...]:
    """Return a shortest action sequence (canonical grammar strings) reaching
    the goal, or raise Unsolvable."""
    if goal_satisfied(state, goal):
        return ()

    parents: dict[WorldState, tuple[WorldState, EnvAction]] = {}
    visited: set[WorldState] = {state}
    queue: deque[WorldState] = deque([state])
    expansions = 0

    while queue:
        current = queue.popleft()
        expansions += 1
        if expansions > _MAX_EXPANSIONS:
            raise Unsolvable("state space budget exceeded")
        for action in _candidate_actions(current, goal):
            result = step(current, action)
            if not result.valid or result.state in visited:
                continue
            visited.add(result.state)
            parents[result.state] = (current, action)
            if goal_satisfied(result.state, goal):
                return _path(parents, state, result.state)
            queue.append(result.state)
    raise Unsolvable("no plan reaches the goal")


def _path(
    parents: dict[WorldState, tuple[WorldState, EnvAction]],
    start: WorldState,
    end: WorldState,
) -> tuple[str, ...]:
    actions: list[str] = []
    node = end
    while node != start:
        node, action = parents[node]
        actions.append(format_action(action))
    actions.reverse()
    return tuple(actions)


def replay(state: WorldState, plan: tuple[str, ...], goal: TaskGoal) -> bool:
    """Run a plan through step(); True iff every step is valid and the goal
    holds at the end."""
    from ..grammar import parse_action

    for raw in plan:
        result = step(state, parse_action(raw))
        if not result.valid:
            return False
        state = result.state
    return goal_satisfied(state, goal)
