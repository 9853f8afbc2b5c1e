"""Metrics over episode logs: success rates, action-type distribution,
invalid-action histogram, dialog-turn statistics, and pack aggregation.

Every figure is derivable from the JSONL logs alone; recompute_report on a
run file equals the report the live path produced.
"""

from __future__ import annotations

import statistics
from dataclasses import asdict, dataclass
from typing import Sequence

from ..core import DecisionKind, Episode, Outcome, Source
from ..dialogue import act_histogram
from ..episode_io import read_episodes


class EmptySample(Exception):
    """A statistic was asked of zero episodes (or zero successes)."""


class MismatchedTaskLists(Exception):
    """Pack aggregation needs identical task lists across packs."""


@dataclass(frozen=True)
class SpeakTurnStats:
    mean: float
    stddev: float


@dataclass(frozen=True)
class SRTable:
    """One success-rate row: per-task percentages plus the pooled overall."""

    per_task_sr: dict[str, float]
    overall_sr: float


@dataclass
class MetricsReport:
    per_task_sr: dict[str, float]
    overall_sr: float
    per_task_n: dict[str, int]
    action_type_distribution: dict[str, float]
    invalid_histogram: dict[int, int]
    speak_turns: SpeakTurnStats | None
    dialog_act_histogram: dict[str, int]
    avg_over_packs: SRTable | None = None
    best_of_k: SRTable | None = None
    episode_count: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        return d


def success_rate(outcomes: Sequence[Outcome]) -> float:
    """100 x successes / total; EmptySample on empty input."""
    if not outcomes:
        raise EmptySample("no outcomes")
    wins = sum(1 for o in outcomes if o is Outcome.SUCCESS)
    return 100.0 * wins / len(outcomes)


def speak_turn_stats(episodes: Sequence[Episode]) -> SpeakTurnStats:
    """Population mean/stddev of speak counts over successful episodes."""
    counts = [
        ep.counters.speak_count
        for ep in episodes
        if ep.outcome is Outcome.SUCCESS and ep.counters is not None
    ]
    if not counts:
        raise EmptySample("no successful episodes")
    return SpeakTurnStats(mean=statistics.fmean(counts), stddev=statistics.pstdev(counts))


def action_type_distribution(episodes: Sequence[Episode]) -> dict[str, float]:
    """Share of decisions by type; invalid acts count as invalid, not act."""
    think = speak = act_ok = invalid = 0
    for ep in episodes:
        events = ep.events
        for i, ev in enumerate(events):
            if ev.source is not Source.AGENT:
                continue
            if ev.kind == DecisionKind.THINK.value:
                think += 1
            elif ev.kind == DecisionKind.SPEAK.value:
                speak += 1
            else:
                response = events[i + 1] if i + 1 < len(events) else None
                if response is not None and response.invalid:
                    invalid += 1
                else:
                    act_ok += 1
    total = think + speak + act_ok + invalid
    if total == 0:
        raise EmptySample("no decisions")
    return {
        "think": 100.0 * think / total,
        "speak": 100.0 * speak / total,
        "act": 100.0 * act_ok / total,
        "invalid": 100.0 * invalid / total,
    }


def invalid_histogram(episodes: Sequence[Episode]) -> dict[int, int]:
    hist: dict[int, int] = {}
    for ep in episodes:
        assert ep.counters is not None
        n = ep.counters.invalid_count
        hist[n] = hist.get(n, 0) + 1
    return hist


def _per_task(episodes: Sequence[Episode]) -> tuple[dict[str, float], dict[str, int]]:
    buckets: dict[str, list[Outcome]] = {}
    for ep in episodes:
        assert ep.outcome is not None
        buckets.setdefault(ep.task.task_type.value, []).append(ep.outcome)
    sr = {task: success_rate(outcomes) for task, outcomes in sorted(buckets.items())}
    n = {task: len(outcomes) for task, outcomes in sorted(buckets.items())}
    return sr, n


def build_report(episodes: Sequence[Episode]) -> MetricsReport:
    if not episodes:
        raise EmptySample("no episodes")
    per_task, per_n = _per_task(episodes)
    try:
        turns: SpeakTurnStats | None = speak_turn_stats(episodes)
    except EmptySample:
        turns = None
    return MetricsReport(
        per_task_sr=per_task,
        overall_sr=success_rate([ep.outcome for ep in episodes]),
        per_task_n=per_n,
        action_type_distribution=action_type_distribution(episodes),
        invalid_histogram=invalid_histogram(episodes),
        speak_turns=turns,
        dialog_act_histogram={
            act.value: count for act, count in act_histogram(episodes).items()
        },
        episode_count=len(episodes),
    )


def recompute_report(jsonl_path: str) -> MetricsReport:
    return build_report(read_episodes(jsonl_path))


@dataclass(frozen=True)
class PackAggregate:
    avg: SRTable
    best_of_k: SRTable
    k: int


def _pooled_overall(per_task_sr: dict[str, float], per_task_n: dict[str, int]) -> float:
    total = sum(per_task_n.values())
    if total == 0:
        raise EmptySample("no episodes in packs")
    return sum(per_task_sr[t] * per_task_n[t] for t in per_task_sr) / total


def aggregate_packs(reports: Sequence[MetricsReport]) -> PackAggregate:
    """Per-cell mean and max over k packs; overall recomputed from pooled
    counts, never from averaging the packs' overall percentages."""
    if not reports:
        raise EmptySample("no pack reports")
    n0 = reports[0].per_task_n
    for r in reports[1:]:
        if r.per_task_n != n0:
            raise MismatchedTaskLists(f"{r.per_task_n} != {n0}")
    tasks = list(n0)
    avg_cells = {
        t: statistics.fmean(r.per_task_sr[t] for r in reports) for t in tasks
    }
    best_cells = {t: max(r.per_task_sr[t] for r in reports) for t in tasks}
    return PackAggregate(
        avg=SRTable(avg_cells, _pooled_overall(avg_cells, n0)),
        best_of_k=SRTable(best_cells, _pooled_overall(best_cells, n0)),
        k=len(reports),
    )


def attach_pack_aggregate(report: MetricsReport, agg: PackAggregate) -> MetricsReport:
    report.avg_over_packs = agg.avg
    report.best_of_k = agg.best_of_k
    return report


def pooled_overall_from_cells(
    per_task_sr: dict[str, float], per_task_n: dict[str, int]
) -> float:
    """Task-count-weighted overall from published per-task cells."""
    return _pooled_overall(per_task_sr, per_task_n)
