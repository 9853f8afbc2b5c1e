from __future__ import annotations

import pytest

from respact.core import TaskGoal, TaskType
from respact.household import ObjectState, Receptacle, WorldState


def bedroom_fixture_world() -> WorldState:
    """The put-two-creditcards room: receptacles and contents arranged so the
    canonical exemplar trajectory replays observation-for-observation."""
    recs = [
        ("armchair 1", "armchair", False, True),
        ("armchair 2", "armchair", False, True),
        ("bed 1", "bed", False, True),
        ("countertop 1", "countertop", False, True),
        ("diningtable 1", "diningtable", False, True),
        ("drawer 1", "drawer", True, False),
        ("drawer 2", "drawer", True, False),
        ("dresser 1", "dresser", False, True),
        ("garbagecan 1", "garbagecan", False, True),
        ("laundryhamper 1", "laundryhamper", False, True),
        ("sidetable 1", "sidetable", False, True),
    ]
    objs = [
        ("cellphone 2", "cellphone", "countertop 1"),
        ("creditcard 4", "creditcard", "countertop 1"),
        ("creditcard 3", "creditcard", "countertop 1"),
        ("creditcard 2", "creditcard", "countertop 1"),
        ("mirror 1", "mirror", "countertop 1"),
        ("pencil 2", "pencil", "countertop 1"),
        ("pencil 1", "pencil", "countertop 1"),
        ("book 1", "book", "drawer 1"),
        ("cd 1", "cd", "drawer 1"),
        ("pen 1", "pen", "drawer 1"),
        ("mug 1", "mug", "dresser 1"),
        ("television 1", "television", "dresser 1"),
        ("creditcard 1", "creditcard", "drawer 2"),
        ("cellphone 1", "cellphone", "bed 1"),
        ("pillow 1", "pillow", "bed 1"),
    ]
    return WorldState(
        receptacles=tuple(
            Receptacle(name, cls, openable, is_open)
            for name, cls, openable, is_open in recs
        ),
        objects=tuple(ObjectState(name, cls, loc) for name, cls, loc in objs),
    )


@pytest.fixture
def bedroom_world() -> WorldState:
    return bedroom_fixture_world()


@pytest.fixture
def pick_two_goal() -> TaskGoal:
    return TaskGoal(TaskType.PICK_TWO, "creditcard", "dresser")
