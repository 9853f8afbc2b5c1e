"""Ten-act dialogue schema: tagging utterances, validating schema-guided
output, and act-frequency statistics.

Classification is a fixed rule cascade, first match wins. An explicit
"[Act]:" (or "<Act>:") prefix always dominates, so tagged utterances
classify to their tag.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .core import DecisionKind, Episode, Source


class DialogAct(Enum):
    REQ_FOR_INSTRUCTION = "ReqForInstruction"
    REQUEST_OTHER_INFO = "RequestOtherInfo"
    INFO_OBJECT_LOC_AND_OD = "InfoObjectLocAndOD"
    REQ_FOR_OBJ_LOC_AND_OD = "ReqForObjLocAndOD"
    INFORMATION_OTHER = "InformationOther"
    ALTERNATE_QUESTIONS = "AlternateQuestions"
    AFFIRM = "Affirm"
    DENY = "Deny"
    OTHER_INTERFACE_COMMENT = "OtherInterfaceComment"
    NOTIFY_FAILURE = "NotifyFailure"


_ACTS_BY_NAME = {act.value.lower(): act for act in DialogAct}

_TAG_RE = re.compile(r"^\s*[\[<]\s*([A-Za-z]+)\s*[\]>]\s*:")
# "creditcard 2" and "creditcard (2)" both count as entity mentions
_ENTITY_RE = re.compile(r"\b([a-z]+)\s*\(?(\d+)\)?")

_LOCATION_QUESTION_RE = re.compile(
    r"\bwhere\b.*\b(is|are|should|do|can|could|look|find)\b|\b(is|are)\b.*\bwhere\b"
)
_LOCATION_STATEMENT_RE = re.compile(r"\b[a-z]+ \d+ (is|are) (on|in|at|under) the\b")
_FAILURE_RE = re.compile(
    r"\bnot able\b|\bunable to\b|\bissue with\b|\bfailed to\b|\bcannot\b|\bcan't\b"
)
_AFFIRM_RE = re.compile(r"^(yes|yeah|yep|sure|okay|ok)\b")
_DENY_RE = re.compile(r"^(no|nope)\b")
_NEXT_STEP_RE = re.compile(r"\bwhat (should|do|shall) i do\b|\bwhat now\b|\bwhat('s| is) next\b")
_DETAIL_QUESTION_RE = re.compile(r"\bwhich \d+\b|\bhow many\b|\bwhich one\b|\bwhat (kind|type|color)\b")
_INTERFACE_RE = re.compile(r"\bi am at the\b|\bshould i open\b|\bit is (closed|open)\b")


def _same_class_mentions(lowered: str) -> int:
    """Largest count of indexed mentions sharing one class — the signal that
    an utterance enumerates concrete alternatives."""
    counts = Counter(cls for cls, _ in _ENTITY_RE.findall(lowered))
    return max(counts.values(), default=0)


def classify(utterance: str) -> DialogAct:
    """Map an utterance to exactly one of the ten acts (total, deterministic)."""
    m = _TAG_RE.match(utterance)
    if m:
        act = _ACTS_BY_NAME.get(m.group(1).lower())
        if act is not None:
            return act

    lowered = " ".join(utterance.split()).lower()

    if _LOCATION_QUESTION_RE.search(lowered):
        return DialogAct.REQ_FOR_OBJ_LOC_AND_OD
    if _LOCATION_STATEMENT_RE.search(lowered):
        return DialogAct.INFO_OBJECT_LOC_AND_OD
    if "which" in lowered and (" or " in lowered or _same_class_mentions(lowered) >= 2):
        return DialogAct.ALTERNATE_QUESTIONS
    if _FAILURE_RE.search(lowered):
        return DialogAct.NOTIFY_FAILURE
    if _AFFIRM_RE.match(lowered):
        return DialogAct.AFFIRM
    if _DENY_RE.match(lowered):
        return DialogAct.DENY
    if _NEXT_STEP_RE.search(lowered):
        return DialogAct.REQ_FOR_INSTRUCTION
    if _DETAIL_QUESTION_RE.search(lowered):
        return DialogAct.REQUEST_OTHER_INFO
    if _INTERFACE_RE.search(lowered):
        return DialogAct.OTHER_INTERFACE_COMMENT
    return DialogAct.INFORMATION_OTHER


class SchemaViolationKind(Enum):
    MISSING_TAG = "missing_tag"
    UNKNOWN_ACT = "unknown_act"


@dataclass(frozen=True)
class SchemaViolation:
    kind: SchemaViolationKind
    detail: str


def validate_schema_output(utterance: str) -> SchemaViolation | None:
    """None when the utterance leads with a known act tag, else the defect."""
    m = _TAG_RE.match(utterance)
    if not m:
        return SchemaViolation(SchemaViolationKind.MISSING_TAG, "no leading [Act]: tag")
    if m.group(1).lower() not in _ACTS_BY_NAME:
        return SchemaViolation(SchemaViolationKind.UNKNOWN_ACT, f"unknown act {m.group(1)!r}")
    return None


def tag_utterance(utterance: str) -> str:
    """Prefix an untagged utterance with its classified act tag."""
    if _TAG_RE.match(utterance):
        return utterance
    return f"[{classify(utterance).value}]: {utterance}"


def act_histogram(episodes: Iterable[Episode]) -> dict[DialogAct, int]:
    """Count classify() over every Speak event; all ten keys always present."""
    hist = {act: 0 for act in DialogAct}
    for episode in episodes:
        for ev in episode.events:
            if ev.source is Source.AGENT and ev.kind == DecisionKind.SPEAK.value:
                hist[classify(ev.text)] += 1
    return hist
