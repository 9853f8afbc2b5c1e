"""Batch runner: deterministic task lists, per-episode policy/user wiring,
JSONL logging, and report generation.

The default task mix mirrors the standard 134-game split:
Pick 24, Clean 31, Heat 23, Cool 21, Examine 18, PickTwo 17.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..core import Counters, Episode, Outcome, TaskGoal, TaskType
from ..household import GOAL_CATALOG, LAYOUTS, TASK_LAYOUTS, generate, world_to_dict
from ..orchestrator import EpisodeEngine, LoopConfig, PolicyPort, UserPort
from ..policies import (
    ConstantActPolicy,
    LLMPolicy,
    OraclePolicy,
    ScriptedReSpActPolicy,
    chat_client_from_env,
)
from ..usersim import (
    HelpfulKnowledgeableUser,
    HelpfulPerturbedUser,
    StdinUser,
    UnhelpfulUser,
)
from . import metrics
from ..episode_io import write_episode

TABLE1_MIX: dict[TaskType, int] = {
    TaskType.PICK: 24,
    TaskType.CLEAN: 31,
    TaskType.HEAT: 23,
    TaskType.COOL: 21,
    TaskType.EXAMINE: 18,
    TaskType.PICK_TWO: 17,
}

POLICIES = ("oracle", "scripted-respact", "look", "llm:react", "llm:respact", "llm:respact-schema")
PERSONAS = ("helpful", "perturbed", "unhelpful", "human")


@dataclass
class SuiteConfig:
    policy: str = "scripted-respact"
    user: str = "helpful"
    episodes: int = 134
    seed: int = 0
    layout: str = "auto"          # auto | a layout name
    tasks: str = "table1-mix"     # or "pick:3,heat:2" style counts
    max_steps: int = 50
    max_consecutive_invalid: int = 10
    workers: int = 1
    permutation: int = 0          # exemplar-pack permutation for llm:* policies
    out: str | None = None
    dump_world: str | None = None

    def validate(self) -> None:
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r} (choose from {POLICIES})")
        if self.user not in PERSONAS:
            raise ValueError(f"unknown user persona {self.user!r} (choose from {PERSONAS})")
        if self.layout != "auto" and self.layout not in LAYOUTS:
            raise ValueError(f"unknown layout {self.layout!r}")
        if self.episodes < 1:
            raise ValueError("episodes must be >= 1")
        if not 0 <= self.permutation < 6:
            raise ValueError("permutation must be in 0..5")
        if self.user == "human" and self.workers != 1:
            raise ValueError("human persona requires workers=1")
        parse_mix(self.tasks)


def parse_mix(spec: str) -> dict[TaskType, int]:
    if spec == "table1-mix":
        return dict(TABLE1_MIX)
    mix: dict[TaskType, int] = {}
    for part in spec.split(","):
        name, _, count = part.partition(":")
        mix[TaskType(name.strip())] = int(count)
    if not mix or any(v < 0 for v in mix.values()) or sum(mix.values()) == 0:
        raise ValueError(f"bad task mix {spec!r}")
    return mix


@dataclass(frozen=True)
class EpisodeSpec:
    index: int
    layout_name: str
    goal: TaskGoal
    seed: int


def build_task_list(cfg: SuiteConfig) -> list[EpisodeSpec]:
    """Expand the mix into a deterministic, seed-shuffled episode list."""
    mix = parse_mix(cfg.tasks)
    rng = random.Random(f"suite:{cfg.seed}:{cfg.tasks}:{cfg.layout}")
    block: list[EpisodeSpec] = []
    specs: list[EpisodeSpec] = []
    index = 0
    while len(specs) < cfg.episodes:
        block = []
        for task_type, count in mix.items():
            for _ in range(count):
                if cfg.layout != "auto":
                    layout_name = cfg.layout
                else:
                    layout_name = rng.choice(TASK_LAYOUTS[task_type])
                catalog = GOAL_CATALOG.get((layout_name, task_type))
                if not catalog:
                    # layout pinned to one that can't host this task type
                    hosts = TASK_LAYOUTS[task_type]
                    layout_name = hosts[0]
                    catalog = GOAL_CATALOG[(layout_name, task_type)]
                obj, target = rng.choice(catalog)
                block.append(
                    EpisodeSpec(
                        index=0,
                        layout_name=layout_name,
                        goal=TaskGoal(task_type, obj, target),
                        seed=rng.randrange(2**32),
                    )
                )
        rng.shuffle(block)
        specs.extend(block)
    specs = specs[: cfg.episodes]
    return [
        EpisodeSpec(i, s.layout_name, s.goal, s.seed) for i, s in enumerate(specs)
    ]


def _build_policy(cfg: SuiteConfig, spec: EpisodeSpec, plan: tuple[str, ...]) -> PolicyPort:
    if cfg.policy == "oracle":
        return OraclePolicy(plan)
    if cfg.policy == "scripted-respact":
        return ScriptedReSpActPolicy(spec.goal)
    if cfg.policy == "look":
        return ConstantActPolicy("look")
    pack_kind = cfg.policy.split(":", 1)[1]
    return LLMPolicy(
        pack_kind=pack_kind,
        task_type=spec.goal.task_type,
        permutation=cfg.permutation,
        client=chat_client_from_env(),
    )


def _build_user(cfg: SuiteConfig, spec: EpisodeSpec, plan: tuple[str, ...], world) -> UserPort:
    receptacles = [r.name for r in world.receptacles]
    if cfg.user == "helpful":
        return HelpfulKnowledgeableUser(plan)
    if cfg.user == "perturbed":
        return HelpfulPerturbedUser(plan)
    if cfg.user == "unhelpful":
        return UnhelpfulUser(plan, receptacles, seed=spec.seed)
    return StdinUser()


def run_one(cfg: SuiteConfig, spec: EpisodeSpec) -> tuple[Episode, dict]:
    episode_id = f"ep-{cfg.seed}-{spec.index:04d}"
    try:
        world, plan = generate(LAYOUTS[spec.layout_name], spec.goal, spec.seed)
    except Exception:
        # unrealizable episode: record it, never abort the suite
        broken = Episode(episode_id=episode_id, task=spec.goal, seed=spec.seed)
        broken.finalize(Outcome.ABORTED, Counters())
        return broken, {}
    policy = _build_policy(cfg, spec, plan)
    user = _build_user(cfg, spec, plan, world)
    loop = LoopConfig(
        max_steps=cfg.max_steps, max_consecutive_invalid=cfg.max_consecutive_invalid
    )
    engine = EpisodeEngine(
        world, spec.goal, policy, cfg=loop, user=user, episode_id=episode_id, seed=spec.seed
    )
    episode = engine.run()
    return episode, world_to_dict(world)


def run_suite(cfg: SuiteConfig) -> tuple[list[Episode], metrics.MetricsReport]:
    cfg.validate()
    specs = build_task_list(cfg)
    out_fp = open(cfg.out, "w", encoding="utf-8") if cfg.out else None
    world_fp = open(cfg.dump_world, "w", encoding="utf-8") if cfg.dump_world else None
    episodes: list[Episode] = []
    try:
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                results = pool.map(lambda s: run_one(cfg, s), specs)
                for episode, world_dict in results:
                    episodes.append(episode)
                    _flush(episode, world_dict, out_fp, world_fp)
        else:
            for spec in specs:
                episode, world_dict = run_one(cfg, spec)
                episodes.append(episode)
                _flush(episode, world_dict, out_fp, world_fp)
    finally:
        # completed episodes stay on disk even when interrupted mid-suite
        if out_fp:
            out_fp.close()
        if world_fp:
            world_fp.close()
    return episodes, metrics.build_report(episodes)


def _flush(episode: Episode, world_dict: dict, out_fp, world_fp) -> None:
    if out_fp:
        write_episode(episode, out_fp)
        out_fp.flush()
    if world_fp:
        world_fp.write(
            json.dumps({"episode_id": episode.episode_id, "world": world_dict}) + "\n"
        )
        world_fp.flush()
