from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from respact.grammar import (
    EntityRef,
    EnvAction,
    ParseError,
    ParseErrorKind,
    Verb,
    format_action,
    parse_action,
)

entity = st.builds(
    EntityRef,
    class_name=st.from_regex(r"[a-z]{1,12}", fullmatch=True),
    index=st.integers(min_value=1, max_value=99),
)


@st.composite
def actions(draw) -> EnvAction:
    verb = draw(st.sampled_from(list(Verb)))
    if verb is Verb.LOOK:
        return EnvAction(verb)
    if verb in (Verb.GOTO, Verb.OPEN, Verb.CLOSE, Verb.USE):
        return EnvAction(verb, receptacle=draw(entity))
    if verb is Verb.TOGGLE:
        return EnvAction(verb, obj=draw(entity))
    return EnvAction(verb, obj=draw(entity), receptacle=draw(entity))


class TestParse:
    def test_goto(self) -> None:
        a = parse_action("go to drawer 1")
        assert a == EnvAction(Verb.GOTO, receptacle=EntityRef("drawer", 1))

    def test_put_with_canonical_separator(self) -> None:
        a = parse_action("put creditcard 2 in/on dresser 1")
        assert a.verb is Verb.PUT
        assert str(a.obj) == "creditcard 2"
        assert str(a.receptacle) == "dresser 1"

    def test_put_accepts_bare_in_and_on(self) -> None:
        for sep in ("in", "on"):
            a = parse_action(f"put saltshaker 1 {sep} cabinet 2")
            assert format_action(a) == "put saltshaker 1 in/on cabinet 2"

    def test_look_is_nullary(self) -> None:
        assert parse_action("look") == EnvAction(Verb.LOOK)

    def test_unknown_verb(self) -> None:
        with pytest.raises(ParseError) as err:
            parse_action("slice apple 1 with knife 1")
        assert err.value.kind is ParseErrorKind.UNKNOWN_VERB
        assert err.value.span == "slice"

    def test_case_insensitive_verbs_and_lowercased_entities(self) -> None:
        a = parse_action("Go To Drawer 1")
        assert str(a.receptacle) == "drawer 1"

    def test_ragged_whitespace_normalized(self) -> None:
        a = parse_action("  take   mug 1   from   countertop  2 ")
        assert format_action(a) == "take mug 1 from countertop 2"

    def test_arity_mismatch(self) -> None:
        with pytest.raises(ParseError) as err:
            parse_action("look around")
        assert err.value.kind is ParseErrorKind.ARITY_MISMATCH
        with pytest.raises(ParseError) as err:
            parse_action("go to drawer")
        assert err.value.kind is ParseErrorKind.ARITY_MISMATCH
        with pytest.raises(ParseError) as err:
            parse_action("take mug 1 with countertop 1")
        assert err.value.kind is ParseErrorKind.ARITY_MISMATCH

    def test_bad_entity_ref(self) -> None:
        with pytest.raises(ParseError) as err:
            parse_action("go to drawer 0")
        assert err.value.kind is ParseErrorKind.BAD_ENTITY_REF
        assert err.value.span == "0"
        with pytest.raises(ParseError) as err:
            parse_action("open drawer2 1")
        assert err.value.kind is ParseErrorKind.BAD_ENTITY_REF

    def test_go_alone_is_unknown_verb(self) -> None:
        with pytest.raises(ParseError) as err:
            parse_action("go fishing")
        assert err.value.kind is ParseErrorKind.UNKNOWN_VERB

    def test_empty_input(self) -> None:
        with pytest.raises(ParseError) as err:
            parse_action("   ")
        assert err.value.kind is ParseErrorKind.UNKNOWN_VERB


class TestFormat:
    def test_heat_surface_form(self) -> None:
        a = EnvAction(Verb.HEAT, obj=EntityRef("mug", 1), receptacle=EntityRef("microwave", 1))
        assert format_action(a) == "heat mug 1 with microwave 1"

    def test_look(self) -> None:
        assert format_action(EnvAction(Verb.LOOK)) == "look"

    def test_toggle(self) -> None:
        assert format_action(EnvAction(Verb.TOGGLE, obj=EntityRef("desklamp", 1))) == "toggle desklamp 1"

    def test_toggle_normalizes_receptacle_slot(self) -> None:
        a = EnvAction(Verb.TOGGLE, receptacle=EntityRef("desklamp", 2))
        assert a.obj == EntityRef("desklamp", 2)
        assert a.receptacle is None


def test_slot_invariants_enforced() -> None:
    with pytest.raises(ValueError):
        EnvAction(Verb.PUT, obj=EntityRef("mug", 1))  # missing receptacle
    with pytest.raises(ValueError):
        EnvAction(Verb.GOTO, obj=EntityRef("mug", 1), receptacle=EntityRef("shelf", 1))
    with pytest.raises(ValueError):
        EnvAction(Verb.LOOK, obj=EntityRef("mug", 1))


@given(actions())
@settings(max_examples=300)
def test_round_trip(action: EnvAction) -> None:
    assert parse_action(format_action(action)) == action


@given(st.text(max_size=60))
@settings(max_examples=300)
def test_parsing_is_total(raw: str) -> None:
    try:
        parse_action(raw)
    except ParseError:
        pass  # the only permitted failure mode


_VERB_HEADS = {"put", "take", "open", "toggle", "close", "clean", "heat", "cool", "use", "look"}


@given(st.from_regex(r"[a-z]{1,10}( [a-z0-9]{1,8}){0,4}", fullmatch=True))
@settings(max_examples=300)
def test_rejection_completeness(raw: str) -> None:
    tokens = raw.split()
    head_ok = tokens[0] in _VERB_HEADS or (
        len(tokens) >= 2 and tokens[0] == "go" and tokens[1] == "to"
    )
    if head_ok:
        return
    with pytest.raises(ParseError) as err:
        parse_action(raw)
    assert err.value.kind is ParseErrorKind.UNKNOWN_VERB
