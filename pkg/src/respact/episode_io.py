"""Episode (de)serialization: JSON Lines, one event per line.

Layout per episode block:
  header  {"episode_id", "task", "seed"}
  events  {"step", "source", "kind", "text", "invalid", "ts"}
  trailer {"outcome", "counters"}

A run file is a concatenation of episode blocks. The trailer exists so
outcome and counters survive the round trip while the header can still be
written before the episode finishes.
"""

from __future__ import annotations

import json
from typing import IO, Iterable

from .core import Counters, Episode, Event, Outcome, Source, TaskGoal, TaskType

EVENT_FIELDS = ("step", "source", "kind", "text", "invalid", "ts")


def task_to_dict(task: TaskGoal) -> dict:
    return {
        "task_type": task.task_type.value,
        "object_class": task.object_class,
        "target_receptacle_class": task.target_receptacle_class,
    }


def task_from_dict(d: dict) -> TaskGoal:
    return TaskGoal(
        task_type=TaskType(d["task_type"]),
        object_class=d["object_class"],
        target_receptacle_class=d["target_receptacle_class"],
    )


def event_to_dict(ev: Event) -> dict:
    return {
        "step": ev.step,
        "source": ev.source.value,
        "kind": ev.kind,
        "text": ev.text,
        "invalid": ev.invalid,
        "ts": ev.ts,
    }


def event_from_dict(d: dict) -> Event:
    return Event(
        step=d["step"],
        source=Source(d["source"]),
        kind=d["kind"],
        text=d["text"],
        invalid=d["invalid"],
        ts=d["ts"],
    )


def header_line(episode: Episode) -> str:
    return json.dumps(
        {"episode_id": episode.episode_id, "task": task_to_dict(episode.task), "seed": episode.seed}
    )


def trailer_line(episode: Episode) -> str:
    assert episode.outcome is not None and episode.counters is not None
    c = episode.counters
    return json.dumps(
        {
            "outcome": episode.outcome.value,
            "counters": {
                "think_count": c.think_count,
                "speak_count": c.speak_count,
                "act_count": c.act_count,
                "invalid_count": c.invalid_count,
            },
        }
    )


def write_episode(episode: Episode, fp: IO[str]) -> None:
    fp.write(header_line(episode) + "\n")
    for ev in episode.events:
        fp.write(json.dumps(event_to_dict(ev)) + "\n")
    fp.write(trailer_line(episode) + "\n")


class JsonlStreamSink:
    """EventSink that streams an episode to JSONL as it unfolds, so partial
    logs survive interrupts."""

    def __init__(self, fp: IO[str]):
        self._fp = fp

    def on_episode_start(self, episode: Episode, initial_obs: str) -> None:
        self._fp.write(header_line(episode) + "\n")
        self._fp.flush()

    def on_event(self, episode_id: str, event: Event) -> None:
        self._fp.write(json.dumps(event_to_dict(event)) + "\n")

    def on_episode_end(self, episode: Episode) -> None:
        self._fp.write(trailer_line(episode) + "\n")
        self._fp.flush()


def write_run(episodes: Iterable[Episode], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        for ep in episodes:
            write_episode(ep, fp)


def read_episodes(path: str) -> list[Episode]:
    with open(path, "r", encoding="utf-8") as fp:
        return parse_episodes(fp)


def parse_episodes(lines: Iterable[str]) -> list[Episode]:
    episodes: list[Episode] = []
    current: Episode | None = None
    for raw in lines:
        raw = raw.strip()
        if not raw:
            continue
        d = json.loads(raw)
        if "episode_id" in d:
            current = Episode(
                episode_id=d["episode_id"], task=task_from_dict(d["task"]), seed=d["seed"]
            )
            episodes.append(current)
        elif "outcome" in d:
            if current is None:
                raise ValueError("trailer before header")
            c = d["counters"]
            current.finalize(
                Outcome(d["outcome"]),
                Counters(
                    c["think_count"], c["speak_count"], c["act_count"], c["invalid_count"]
                ),
            )
            current = None
        else:
            if current is None:
                raise ValueError("event line outside an episode block")
            current.append(event_from_dict(d))
    return episodes
