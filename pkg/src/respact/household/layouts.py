"""Room templates: receptacle multisets, spawn tables, and goal catalogs.

Two desk-scale templates ship by default. Spawn rules cap how many
instances of a class can exist, which is also what makes some goals
unsatisfiable (a PickTwo needs a cap of at least 2).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import TaskType


@dataclass(frozen=True)
class SpawnRule:
    object_class: str
    candidate_receptacles: tuple[str, ...]
    probability: float
    max_count: int = 1


@dataclass(frozen=True)
class LayoutSpec:
    name: str
    receptacle_counts: tuple[tuple[str, int], ...]
    spawn_table: tuple[SpawnRule, ...]
    seed: int = 0

    def rule_for(self, object_class: str) -> SpawnRule | None:
        for rule in self.spawn_table:
            if rule.object_class == object_class:
                return rule
        return None

    def receptacle_classes(self) -> frozenset[str]:
        return frozenset(cls for cls, _ in self.receptacle_counts)


def layout_to_dict(layout: LayoutSpec) -> dict:
    return {
        "name": layout.name,
        "seed": layout.seed,
        "receptacles": [{"class": cls, "count": n} for cls, n in layout.receptacle_counts],
        "spawn_table": [
            {
                "object_class": rule.object_class,
                "candidate_receptacles": list(rule.candidate_receptacles),
                "probability": rule.probability,
                "max_count": rule.max_count,
            }
            for rule in layout.spawn_table
        ],
    }


def layout_from_dict(d: dict) -> LayoutSpec:
    return LayoutSpec(
        name=d["name"],
        seed=d.get("seed", 0),
        receptacle_counts=tuple((r["class"], r["count"]) for r in d["receptacles"]),
        spawn_table=tuple(
            SpawnRule(
                rule["object_class"],
                tuple(rule["candidate_receptacles"]),
                rule["probability"],
                rule["max_count"],
            )
            for rule in d["spawn_table"]
        ),
    )


KITCHEN_SMALL = LayoutSpec(
    name="kitchen-small",
    receptacle_counts=(
        ("cabinet", 4),
        ("coffeemachine", 1),
        ("countertop", 3),
        ("drawer", 3),
        ("fridge", 1),
        ("garbagecan", 1),
        ("microwave", 1),
        ("shelf", 2),
        ("sinkbasin", 1),
        ("stoveburner", 2),
        ("toaster", 1),
    ),
    spawn_table=(
        SpawnRule("mug", ("countertop", "cabinet", "shelf", "coffeemachine"), 0.7, 2),
        SpawnRule("cup", ("cabinet", "shelf", "countertop"), 0.5, 2),
        SpawnRule("apple", ("countertop", "fridge", "garbagecan"), 0.6, 2),
        SpawnRule("potato", ("fridge", "countertop", "cabinet"), 0.6, 2),
        SpawnRule("tomato", ("countertop", "fridge", "shelf"), 0.5, 2),
        SpawnRule("bread", ("countertop", "cabinet", "toaster"), 0.5, 1),
        SpawnRule("egg", ("fridge", "countertop"), 0.5, 2),
        SpawnRule("plate", ("cabinet", "countertop", "shelf", "drawer"), 0.6, 2),
        SpawnRule("pan", ("stoveburner", "countertop", "cabinet"), 0.6, 1),
        SpawnRule("knife", ("drawer", "countertop"), 0.6, 1),
        SpawnRule("spatula", ("drawer", "countertop"), 0.5, 1),
        SpawnRule("saltshaker", ("cabinet", "shelf", "countertop"), 0.5, 1),
        SpawnRule("soapbottle", ("sinkbasin", "cabinet", "countertop"), 0.5, 1),
        SpawnRule("creditcard", ("drawer", "countertop"), 0.4, 1),
    ),
)

BEDROOM_SMALL = LayoutSpec(
    name="bedroom-small",
    receptacle_counts=(
        ("armchair", 2),
        ("bed", 1),
        ("countertop", 1),
        ("diningtable", 1),
        ("drawer", 2),
        ("dresser", 1),
        ("garbagecan", 1),
        ("laundryhamper", 1),
        ("shelf", 1),
        ("sidetable", 1),
    ),
    spawn_table=(
        SpawnRule("creditcard", ("drawer", "countertop", "sidetable", "dresser"), 0.6, 3),
        SpawnRule("cellphone", ("bed", "sidetable", "drawer", "countertop"), 0.6, 2),
        SpawnRule("book", ("bed", "shelf", "sidetable", "dresser"), 0.7, 2),
        SpawnRule("pen", ("drawer", "shelf", "sidetable"), 0.5, 2),
        SpawnRule("pencil", ("drawer", "shelf", "countertop"), 0.5, 2),
        SpawnRule("cd", ("drawer", "shelf", "dresser"), 0.5, 2),
        SpawnRule("keychain", ("drawer", "sidetable", "dresser"), 0.5, 1),
        SpawnRule("pillow", ("bed", "armchair"), 0.6, 2),
        SpawnRule("newspaper", ("diningtable", "armchair", "sidetable", "dresser"), 0.5, 1),
        SpawnRule("alarmclock", ("sidetable", "shelf", "dresser"), 0.5, 1),
        SpawnRule("mirror", ("countertop", "dresser"), 0.4, 1),
        SpawnRule("mug", ("countertop", "diningtable", "sidetable"), 0.4, 1),
        SpawnRule("desklamp", ("sidetable", "dresser", "shelf"), 0.9, 1),
    ),
)

LAYOUTS: dict[str, LayoutSpec] = {
    KITCHEN_SMALL.name: KITCHEN_SMALL,
    BEDROOM_SMALL.name: BEDROOM_SMALL,
}

# (object_class, target_receptacle_class) candidates per layout and task type;
# the suite runner picks among these deterministically per episode.
GOAL_CATALOG: dict[tuple[str, TaskType], tuple[tuple[str, str], ...]] = {
    ("kitchen-small", TaskType.PICK): (
        ("mug", "shelf"),
        ("apple", "countertop"),
        ("saltshaker", "cabinet"),
        ("plate", "shelf"),
        ("knife", "countertop"),
    ),
    ("kitchen-small", TaskType.CLEAN): (
        ("mug", "cabinet"),
        ("apple", "countertop"),
        ("plate", "shelf"),
        ("cup", "shelf"),
        ("tomato", "countertop"),
    ),
    ("kitchen-small", TaskType.HEAT): (
        ("mug", "countertop"),
        ("potato", "countertop"),
        ("egg", "countertop"),
        ("bread", "countertop"),
        ("tomato", "shelf"),
    ),
    ("kitchen-small", TaskType.COOL): (
        ("apple", "countertop"),
        ("potato", "countertop"),
        ("mug", "shelf"),
        ("egg", "countertop"),
        ("tomato", "shelf"),
    ),
    ("kitchen-small", TaskType.PICK_TWO): (
        ("plate", "shelf"),
        ("mug", "cabinet"),
        ("apple", "countertop"),
        ("egg", "fridge"),
    ),
    ("bedroom-small", TaskType.PICK): (
        ("creditcard", "dresser"),
        ("cellphone", "sidetable"),
        ("book", "bed"),
        ("keychain", "dresser"),
        ("pillow", "armchair"),
    ),
    ("bedroom-small", TaskType.EXAMINE): (
        ("book", "desklamp"),
        ("cd", "desklamp"),
        ("newspaper", "desklamp"),
        ("creditcard", "desklamp"),
    ),
    ("bedroom-small", TaskType.PICK_TWO): (
        ("creditcard", "dresser"),
        ("book", "dresser"),
        ("cd", "sidetable"),
        ("pillow", "bed"),
        ("cellphone", "bed"),
    ),
}

# which layout hosts which task type by default
TASK_LAYOUTS: dict[TaskType, tuple[str, ...]] = {
    TaskType.PICK: ("kitchen-small", "bedroom-small"),
    TaskType.CLEAN: ("kitchen-small",),
    TaskType.HEAT: ("kitchen-small",),
    TaskType.COOL: ("kitchen-small",),
    TaskType.EXAMINE: ("bedroom-small",),
    TaskType.PICK_TWO: ("kitchen-small", "bedroom-small"),
}
