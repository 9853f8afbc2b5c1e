"""Deterministic household simulator: worlds, action semantics, solver."""

from .generate import UnsatisfiableGoal, generate
from .layouts import (
    BEDROOM_SMALL,
    GOAL_CATALOG,
    KITCHEN_SMALL,
    LAYOUTS,
    TASK_LAYOUTS,
    LayoutSpec,
    SpawnRule,
    layout_from_dict,
    layout_to_dict,
)
from .oracle import Unsolvable, oracle_solve, replay
from .world import (
    INVENTORY,
    LAMP_CLASSES,
    NOTHING_HAPPENS,
    OPENABLE_CLASSES,
    START,
    Cleanliness,
    ObjectState,
    Receptacle,
    StepResult,
    Temperature,
    WorldState,
    contents_listing,
    goal_satisfied,
    initial_observation,
    location_description,
    step,
    world_from_dict,
    world_to_dict,
)

__all__ = [
    "BEDROOM_SMALL",
    "Cleanliness",
    "GOAL_CATALOG",
    "INVENTORY",
    "KITCHEN_SMALL",
    "LAMP_CLASSES",
    "LAYOUTS",
    "LayoutSpec",
    "NOTHING_HAPPENS",
    "OPENABLE_CLASSES",
    "ObjectState",
    "Receptacle",
    "START",
    "SpawnRule",
    "StepResult",
    "TASK_LAYOUTS",
    "Temperature",
    "Unsolvable",
    "UnsatisfiableGoal",
    "WorldState",
    "contents_listing",
    "generate",
    "goal_satisfied",
    "initial_observation",
    "layout_from_dict",
    "layout_to_dict",
    "location_description",
    "oracle_solve",
    "replay",
    "step",
    "world_from_dict",
    "world_to_dict",
]
