"""Batch runner and metrics engine."""

from .metrics import (
    EmptySample,
    MetricsReport,
    MismatchedTaskLists,
    PackAggregate,
    SpeakTurnStats,
    SRTable,
    action_type_distribution,
    aggregate_packs,
    attach_pack_aggregate,
    build_report,
    invalid_histogram,
    pooled_overall_from_cells,
    recompute_report,
    speak_turn_stats,
    success_rate,
)
from .runner import (
    PERSONAS,
    POLICIES,
    TABLE1_MIX,
    EpisodeSpec,
    SuiteConfig,
    build_task_list,
    parse_mix,
    run_one,
    run_suite,
)

__all__ = [
    "EmptySample",
    "EpisodeSpec",
    "MetricsReport",
    "MismatchedTaskLists",
    "PackAggregate",
    "PERSONAS",
    "POLICIES",
    "SRTable",
    "SpeakTurnStats",
    "SuiteConfig",
    "TABLE1_MIX",
    "action_type_distribution",
    "aggregate_packs",
    "attach_pack_aggregate",
    "build_report",
    "build_task_list",
    "invalid_histogram",
    "parse_mix",
    "pooled_overall_from_cells",
    "recompute_report",
    "run_one",
    "run_suite",
    "speak_turn_stats",
    "success_rate",
]
