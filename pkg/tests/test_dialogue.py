from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from respact.core import (
    Episode,
    Event,
    Source,
    TaskGoal,
    TaskType,
)
from respact.dialogue import (
    DialogAct,
    SchemaViolationKind,
    act_histogram,
    classify,
    tag_utterance,
    validate_schema_output,
)

# the ten schema examples, one per act
GOLDEN = [
    ("What should I do now?", DialogAct.REQ_FOR_INSTRUCTION),
    ("Which 2 books should I pick?", DialogAct.REQUEST_OTHER_INFO),
    ("The knife 1 is on the countertop 1.", DialogAct.INFO_OBJECT_LOC_AND_OD),
    ("I am looking for a mug. Where is the mug?", DialogAct.REQ_FOR_OBJ_LOC_AND_OD),
    ("I saw the pillow on the armchair.", DialogAct.INFORMATION_OTHER),
    (
        "Which of the two creditcards. creditcard 1 or creditcard 2?",
        DialogAct.ALTERNATE_QUESTIONS,
    ),
    ("Yes. I will proceed with that.", DialogAct.AFFIRM),
    ("No. I don't think so.", DialogAct.DENY),
    (
        "I am at the drawer 1. It is closed Should I open it?",
        DialogAct.OTHER_INTERFACE_COMMENT,
    ),
    ("Not able to do it. Please help", DialogAct.NOTIFY_FAILURE),
]


@pytest.mark.parametrize("utterance,expected", GOLDEN, ids=[a.value for _, a in GOLDEN])
def test_golden_examples(utterance: str, expected: DialogAct) -> None:
    assert classify(utterance) is expected


def test_tag_prefix_dominates_content() -> None:
    assert classify("[Affirm]: Where is the mug?") is DialogAct.AFFIRM
    assert classify("<NotifyFailure>: all good here") is DialogAct.NOTIFY_FAILURE
    for act in DialogAct:
        assert classify(f"[{act.value}]: whatever text") is act


def test_location_question_beats_failure_wording() -> None:
    text = "I could not find the plate at the cabinet 4. Where do you suggest I should look next?"
    assert classify(text) is DialogAct.REQ_FOR_OBJ_LOC_AND_OD


def test_put_two_exemplar_speaks_classify_as_expected() -> None:
    first = (
        "I need to find the first creditcard. A creditcard is more likely to appear in "
        "drawer (1-2), countertop (1). Where do you suggest I should look for the "
        "creditcard first?"
    )
    second = (
        "I found three creditcards. creditcard (4), creditcard (3), creditcard (2). "
        "Which two should I put in the dresser?"
    )
    assert classify(first) is DialogAct.REQ_FOR_OBJ_LOC_AND_OD
    assert classify(second) is DialogAct.ALTERNATE_QUESTIONS


@given(st.text(max_size=80))
@settings(max_examples=300)
def test_classify_is_total(text: str) -> None:
    if text.strip():
        assert classify(text) in DialogAct


def test_validate_schema_output() -> None:
    assert validate_schema_output("[ReqForObjLocAndOD]: Where is the mug?") is None
    missing = validate_schema_output("Where is the mug?")
    assert missing is not None and missing.kind is SchemaViolationKind.MISSING_TAG
    unknown = validate_schema_output("[SliceRequest]: chop it")
    assert unknown is not None and unknown.kind is SchemaViolationKind.UNKNOWN_ACT


def test_tag_utterance_round_trips_through_validation() -> None:
    tagged = tag_utterance("Where is the mug?")
    assert validate_schema_output(tagged) is None
    assert tag_utterance(tagged) == tagged  # already tagged: unchanged


def _episode_with_speaks(texts: list[str]) -> Episode:
    ep = Episode("e", TaskGoal(TaskType.PICK, "mug", "shelf"), 0)
    for i, text in enumerate(texts):
        ep.append(Event(i, Source.AGENT, "speak", text, ts="t"))
        ep.append(Event(i, Source.USER, "user", "ok", ts="t"))
    return ep


def test_histogram_empty_input_is_all_zero() -> None:
    hist = act_histogram([])
    assert set(hist) == set(DialogAct)
    assert all(v == 0 for v in hist.values())


def test_histogram_concatenation_additivity() -> None:
    a = _episode_with_speaks(["Where is the mug?", "Yes. Proceeding."])
    b = _episode_with_speaks(["Not able to do it. Please help"])
    combined = act_histogram([a, b])
    ha, hb = act_histogram([a]), act_histogram([b])
    assert combined == {act: ha[act] + hb[act] for act in DialogAct}


def test_histogram_counts_only_speak_events() -> None:
    ep = _episode_with_speaks(["Where is the mug?"])
    ep.append(Event(1, Source.AGENT, "think", "Where is the mug?", ts="t"))
    ep.append(Event(1, Source.ENVIRONMENT, "observation", "OK.", ts="t"))
    hist = act_histogram([ep])
    assert hist[DialogAct.REQ_FOR_OBJ_LOC_AND_OD] == 1
    assert sum(hist.values()) == 1
