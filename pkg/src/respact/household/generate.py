"""World generation: seed-deterministic, goal-paired, oracle-verified.

A generated world always comes back with a replay-verified shortest plan;
anything the layout cannot realize (missing spawn rule, count ceiling below
a PickTwo, absent target or appliance) raises UnsatisfiableGoal.
"""

from __future__ import annotations

import random

from ..core import TaskGoal, TaskType
from .layouts import LayoutSpec, SpawnRule
from .oracle import Unsolvable, oracle_solve, replay
from .world import OPENABLE_CLASSES, ObjectState, Receptacle, WorldState, goal_satisfied


class UnsatisfiableGoal(Exception):
    """The layout's spawn table or receptacle set cannot realize the goal."""


def generate(layout: LayoutSpec, goal: TaskGoal, seed: int) -> tuple[WorldState, tuple[str, ...]]:
    rng = random.Random(
        f"{layout.name}:{layout.seed}:{goal.task_type.value}:"
        f"{goal.object_class}:{goal.target_receptacle_class}:{seed}"
    )

    receptacles: list[Receptacle] = []
    for cls, count in layout.receptacle_counts:
        openable = cls in OPENABLE_CLASSES
        for i in range(1, count + 1):
            receptacles.append(
                Receptacle(f"{cls} {i}", cls, openable, is_open=not openable)
            )

    need = 2 if goal.task_type is TaskType.PICK_TWO else 1
    goal_rule = layout.rule_for(goal.object_class)
    if goal_rule is None:
        raise UnsatisfiableGoal(f"{layout.name} never spawns {goal.object_class!r}")
    if goal_rule.max_count < need:
        raise UnsatisfiableGoal(
            f"{layout.name} spawns at most {goal_rule.max_count} {goal.object_class!r}"
        )
    if goal.task_type is not TaskType.EXAMINE:
        if goal.target_receptacle_class not in layout.receptacle_classes():
            raise UnsatisfiableGoal(
                f"{layout.name} has no {goal.target_receptacle_class!r}"
            )
    elif layout.rule_for("desklamp") is None:
        raise UnsatisfiableGoal(f"{layout.name} never spawns a desklamp")

    objects: list[ObjectState] = []
    counts: dict[str, int] = {}

    def spawn(cls: str, location: str) -> None:
        counts[cls] = counts.get(cls, 0) + 1
        objects.append(ObjectState(f"{cls} {counts[cls]}", cls, location))

    def candidates(rule: SpawnRule) -> list[str]:
        wanted = set(rule.candidate_receptacles)
        # goal-class objects must not spawn already satisfying a placement goal
        if rule.object_class == goal.object_class and goal.task_type in (
            TaskType.PICK,
            TaskType.PICK_TWO,
        ):
            wanted.discard(goal.target_receptacle_class)
        return [r.name for r in receptacles if r.class_name in wanted]

    for rule in layout.spawn_table:
        spots = candidates(rule)
        if not spots:
            continue
        for _ in range(rule.max_count):
            if rng.random() < rule.probability:
                spawn(rule.object_class, rng.choice(spots))

    def force(cls: str, howmany: int) -> None:
        rule = layout.rule_for(cls)
        assert rule is not None
        spots = candidates(rule)
        if not spots:
            raise UnsatisfiableGoal(f"nowhere to place {cls!r} off-target")
        while counts.get(cls, 0) < howmany:
            spawn(cls, rng.choice(spots))

    force(goal.object_class, need)
    if goal.task_type is TaskType.EXAMINE:
        force("desklamp", 1)

    world = WorldState(receptacles=tuple(receptacles), objects=tuple(objects))
    assert not goal_satisfied(world, goal), "generator postcondition: goals spawn unsatisfied"

    try:
        plan = oracle_solve(world, goal)
    except Unsolvable as exc:
        raise UnsatisfiableGoal(str(exc)) from exc
    assert replay(world, plan, goal), "oracle plan must replay to success"
    return world, plan
