"""Bidirectional parser/formatter for the eleven-command household grammar.

Productions (canonical surface forms):

    put {object} in/on {receptacle}
    go to {receptacle}
    take {object} from {receptacle}
    open {receptacle}
    toggle {object_or_receptacle}
    close {receptacle}
    clean {object} with {receptacle}
    heat {object} with {receptacle}
    cool {object} with {receptacle}
    use {receptacle}
    look

Verb matching is case-insensitive, whitespace runs collapse, and "in"/"on"
are accepted for Put but formatted back as the canonical "in/on".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class Verb(Enum):
    PUT = "put"
    GOTO = "go to"
    TAKE = "take"
    OPEN = "open"
    TOGGLE = "toggle"
    CLOSE = "close"
    CLEAN = "clean"
    HEAT = "heat"
    COOL = "cool"
    USE = "use"
    LOOK = "look"


class ParseErrorKind(Enum):
    UNKNOWN_VERB = "unknown_verb"
    ARITY_MISMATCH = "arity_mismatch"
    BAD_ENTITY_REF = "bad_entity_ref"


class ParseError(ValueError):
    """Raised for any string outside the grammar; carries the bad span."""

    def __init__(self, kind: ParseErrorKind, span: str, message: str):
        super().__init__(message)
        self.kind = kind
        self.span = span


_CLASS_RE = re.compile(r"^[a-z]+$")


@dataclass(frozen=True)
class EntityRef:
    """A typed mention like "drawer 1": lowercase class plus 1-based index."""

    class_name: str
    index: int

    def __post_init__(self) -> None:
        if not _CLASS_RE.match(self.class_name):
            raise ValueError(f"entity class must be lowercase ascii: {self.class_name!r}")
        if self.index < 1:
            raise ValueError(f"entity index must be >= 1: {self.index}")

    def __str__(self) -> str:
        return f"{self.class_name} {self.index}"


# verbs taking object + receptacle, with their separator token
_BINARY_SEPS = {Verb.TAKE: "from", Verb.CLEAN: "with", Verb.HEAT: "with", Verb.COOL: "with"}
# verbs taking receptacle only
_UNARY_RECEPTACLE = (Verb.GOTO, Verb.OPEN, Verb.CLOSE, Verb.USE)


@dataclass(frozen=True)
class EnvAction:
    """A parsed, typed environment command.

    Toggle's single target is slot-ambiguous on the surface, so it is
    normalized into the object slot at construction; round-tripping through
    format/parse is then exact for every constructible action.
    """

    verb: Verb
    obj: EntityRef | None = None
    receptacle: EntityRef | None = None

    def __post_init__(self) -> None:
        v = self.verb
        if v is Verb.TOGGLE and self.obj is None and self.receptacle is not None:
            object.__setattr__(self, "obj", self.receptacle)
            object.__setattr__(self, "receptacle", None)
        has_obj, has_rec = self.obj is not None, self.receptacle is not None
        if v is Verb.PUT or v in _BINARY_SEPS:
            ok = has_obj and has_rec
        elif v in _UNARY_RECEPTACLE:
            ok = not has_obj and has_rec
        elif v is Verb.TOGGLE:
            ok = has_obj and not has_rec
        else:  # LOOK
            ok = not has_obj and not has_rec
        if not ok:
            raise ValueError(f"bad slots for {v.name}: obj={self.obj}, receptacle={self.receptacle}")

    @property
    def target(self) -> EntityRef | None:
        """The single entity of a unary action (toggle/use/goto/open/close)."""
        return self.obj if self.obj is not None else self.receptacle


def normalize(raw: str) -> str:
    return " ".join(raw.split()).lower()


def _entity(class_tok: str, index_tok: str) -> EntityRef:
    if not _CLASS_RE.match(class_tok):
        raise ParseError(
            ParseErrorKind.BAD_ENTITY_REF, class_tok, f"bad entity class {class_tok!r}"
        )
    if not index_tok.isdigit() or int(index_tok) < 1:
        raise ParseError(
            ParseErrorKind.BAD_ENTITY_REF, index_tok, f"bad entity index {index_tok!r}"
        )
    return EntityRef(class_tok, int(index_tok))


def parse_action(raw: str) -> EnvAction:
    """Parse a surface string into an EnvAction or raise ParseError.

    Total over all inputs: every failure is a ParseError carrying the
    offending span, never a crash.
    """
    text = normalize(raw)
    tokens = text.split(" ") if text else []
    if not tokens or tokens == [""]:
        raise ParseError(ParseErrorKind.UNKNOWN_VERB, raw, "empty command")

    head = tokens[0]
    if head == "go":
        if len(tokens) < 2 or tokens[1] != "to":
            raise ParseError(ParseErrorKind.UNKNOWN_VERB, text, f"unknown verb {text!r}")
        verb, rest = Verb.GOTO, tokens[2:]
    else:
        try:
            verb = Verb(head)
        except ValueError:
            raise ParseError(ParseErrorKind.UNKNOWN_VERB, head, f"unknown verb {head!r}") from None
        rest = tokens[1:]

    if verb is Verb.LOOK:
        if rest:
            raise ParseError(
                ParseErrorKind.ARITY_MISMATCH, " ".join(rest), "look takes no arguments"
            )
        return EnvAction(Verb.LOOK)

    if verb in _UNARY_RECEPTACLE:
        if len(rest) != 2:
            raise ParseError(
                ParseErrorKind.ARITY_MISMATCH, " ".join(rest),
                f"{verb.value} takes one receptacle",
            )
        return EnvAction(verb, receptacle=_entity(rest[0], rest[1]))

    if verb is Verb.TOGGLE:
        if len(rest) != 2:
            raise ParseError(
                ParseErrorKind.ARITY_MISMATCH, " ".join(rest), "toggle takes one entity"
            )
        return EnvAction(Verb.TOGGLE, obj=_entity(rest[0], rest[1]))

    # binary productions: {verb} O o_idx {sep} R r_idx
    if len(rest) != 5:
        raise ParseError(
            ParseErrorKind.ARITY_MISMATCH, " ".join(rest),
            f"{verb.value} takes an object and a receptacle",
        )
    sep = rest[2]
    if verb is Verb.PUT:
        if sep not in ("in/on", "in", "on"):
            raise ParseError(ParseErrorKind.ARITY_MISMATCH, sep, "put wants 'in/on'")
    elif sep != _BINARY_SEPS[verb]:
        raise ParseError(
            ParseErrorKind.ARITY_MISMATCH, sep,
            f"{verb.value} wants '{_BINARY_SEPS[verb]}'",
        )
    return EnvAction(verb, obj=_entity(rest[0], rest[1]), receptacle=_entity(rest[3], rest[4]))


def format_action(action: EnvAction) -> str:
    """Emit the canonical surface form; parse_action(format_action(a)) == a."""
    v = action.verb
    if v is Verb.LOOK:
        return "look"
    if v is Verb.GOTO:
        return f"go to {action.receptacle}"
    if v in (Verb.OPEN, Verb.CLOSE, Verb.USE):
        return f"{v.value} {action.receptacle}"
    if v is Verb.TOGGLE:
        return f"toggle {action.obj}"
    if v is Verb.PUT:
        return f"put {action.obj} in/on {action.receptacle}"
    return f"{v.value} {action.obj} {_BINARY_SEPS[v]} {action.receptacle}"
