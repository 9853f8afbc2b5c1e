"""Prompt packs: system prompts, exemplar trajectories, and the pure text
transforms between them.

Three annotated exemplar trajectories ship per task type. A pack picks an
ordered pair of them — permutations(3, 2) gives exactly six packs. The
reasoning-only pack is derived by deleting speak/user lines; the
schema-guided pack tags every speak line with its classified dialog act.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from itertools import permutations

from ..core import DecisionKind, Decision, TaskType
from ..dialogue import tag_utterance
from ..orchestrator import ContextView
from ..core import Source

PACK_KINDS = ("react", "respact", "respact-schema")

_MAIN_FILES = {
    "react": "main_react.txt",
    "respact": "main_respact.txt",
    "respact-schema": "main_respact_schema.txt",
}

_SPEAK_LINE = re.compile(r"^> speak:")
_USER_LINE = re.compile(r"^> Human:")
_THINK_LINE = re.compile(r"^> think:\s*(.*)$")
_ACT_LINE = re.compile(r"^> (.*)$")


def _data_text(*parts: str) -> str:
    node = resources.files("respact.policies").joinpath("data", *parts)
    return node.read_text(encoding="utf-8")


def main_prompt(kind: str) -> str:
    if kind not in PACK_KINDS:
        raise ValueError(f"unknown pack kind {kind!r}")
    return _data_text(_MAIN_FILES[kind])


def load_exemplars(task_type: TaskType) -> tuple[str, str, str]:
    texts = tuple(
        _data_text("exemplars", task_type.value, f"{i}.txt").strip() + "\n"
        for i in (1, 2, 3)
    )
    return texts  # type: ignore[return-value]


def exemplar_permutations(count: int = 3) -> tuple[tuple[int, int], ...]:
    """All ordered pairs of distinct exemplar indices (6 for 3 exemplars)."""
    return tuple(permutations(range(count), 2))


def strip_dialogue(trajectory: str) -> str:
    """Delete speak and user lines: the reasoning-only rendering."""
    kept = [
        line
        for line in trajectory.splitlines()
        if not _SPEAK_LINE.match(line) and not _USER_LINE.match(line)
    ]
    return "\n".join(kept) + ("\n" if trajectory.endswith("\n") else "")


def add_schema_tags(trajectory: str) -> str:
    """Tag each speak line with its classified dialog act."""
    out = []
    for line in trajectory.splitlines():
        if _SPEAK_LINE.match(line):
            utterance = line[len("> speak:"):].strip()
            out.append(f"> speak: {tag_utterance(utterance)}")
        else:
            out.append(line)
    return "\n".join(out) + ("\n" if trajectory.endswith("\n") else "")


@dataclass(frozen=True)
class PromptPack:
    kind: str
    task_type: TaskType
    permutation: int
    system: str
    exemplars: tuple[str, str]


def build_pack(kind: str, task_type: TaskType, permutation: int) -> PromptPack:
    if not 0 <= permutation < 6:
        raise ValueError("permutation must be in 0..5")
    texts = load_exemplars(task_type)
    first, second = exemplar_permutations()[permutation]
    pair = (texts[first], texts[second])
    if kind == "react":
        pair = (strip_dialogue(pair[0]), strip_dialogue(pair[1]))
    elif kind == "respact-schema":
        pair = (add_schema_tags(pair[0]), add_schema_tags(pair[1]))
    return PromptPack(
        kind=kind,
        task_type=task_type,
        permutation=permutation,
        system=main_prompt(kind),
        exemplars=pair,
    )


# -- transcript rendering and parsing -----------------------------------------


def render_context(ctx: ContextView) -> str:
    """Render the live episode in the exemplar transcript format."""
    lines = [ctx.initial_observation, f"Your task is to: {ctx.goal_text}"]
    for ev in ctx.events:
        if ev.source is Source.AGENT:
            if ev.kind == DecisionKind.THINK.value:
                lines.append(f"> think: {ev.text}")
            elif ev.kind == DecisionKind.SPEAK.value:
                lines.append(f"> speak: {ev.text}")
            else:
                lines.append(f"> {ev.text}")
        elif ev.source is Source.USER:
            lines.append(f"> Human: {ev.text}")
        else:
            lines.append(ev.text)
    return "\n".join(lines)


def build_messages(pack: PromptPack, ctx: ContextView) -> list[dict[str, str]]:
    body = (
        "Interact with a household to solve a task. Here are two examples.\n\n"
        f"{pack.exemplars[0].strip()}\n\n{pack.exemplars[1].strip()}\n\n"
        "Here is the task.\n\n"
        f"{render_context(ctx)}\n>"
    )
    return [
        {"role": "system", "content": pack.system},
        {"role": "user", "content": body},
    ]


@dataclass(frozen=True)
class TranscriptTurn:
    kind: str  # think | speak | act | user | observation
    text: str


@dataclass(frozen=True)
class Transcript:
    room: str
    task_line: str
    turns: tuple[TranscriptTurn, ...]

    def agent_decisions(self) -> list[Decision]:
        mapping = {
            "think": DecisionKind.THINK,
            "speak": DecisionKind.SPEAK,
            "act": DecisionKind.ACT,
        }
        return [
            Decision(mapping[t.kind], t.text)
            for t in self.turns
            if t.kind in mapping
        ]

    def user_replies(self) -> list[str]:
        return [t.text for t in self.turns if t.kind == "user"]


def parse_transcript(text: str) -> Transcript:
    room = ""
    task_line = ""
    turns: list[TranscriptTurn] = []
    for line in text.splitlines():
        line = line.rstrip()
        if not line:
            continue
        if line.startswith("You are in the middle of a room"):
            room = line
        elif line.startswith("Your task is to:"):
            task_line = line[len("Your task is to:"):].strip()
        elif _THINK_LINE.match(line):
            turns.append(TranscriptTurn("think", _THINK_LINE.match(line).group(1).strip()))
        elif _SPEAK_LINE.match(line):
            turns.append(TranscriptTurn("speak", line[len("> speak:"):].strip()))
        elif _USER_LINE.match(line):
            turns.append(TranscriptTurn("user", line[len("> Human:"):].strip()))
        elif _ACT_LINE.match(line):
            turns.append(TranscriptTurn("act", _ACT_LINE.match(line).group(1).strip()))
        else:
            turns.append(TranscriptTurn("observation", line))
    return Transcript(room=room, task_line=task_line, turns=tuple(turns))
