"""User-channel implementations: the three simulated personas, a scripted
reply list for fixtures, a stdin channel for terminal play, and an optional
LLM-backed variant.

Simulated personas answer only what was asked and never volunteer future
steps. The helpful persona grounds answers in the episode's oracle plan and
live world; the perturbed one gives the same answers stripped of instance
indices; the unhelpful one deliberately names receptacles the plan never
touches.
"""

from __future__ import annotations

import random
import re

from .core import Persona, UserResponse
from .grammar import ParseError, Verb, parse_action
from .orchestrator import ContextView, UserChannelClosed

_ENTITY_RE = re.compile(r"\b([a-z]+)\s*\(?(\d+)\)?")


# -- plan inspection ---------------------------------------------------------


def _parsed_plan(plan: tuple[str, ...]) -> list:
    actions = []
    for raw in plan:
        try:
            actions.append(parse_action(raw))
        except ParseError:
            continue
    return actions


def plan_receptacles(plan: tuple[str, ...]) -> list[str]:
    """Every receptacle a plan touches, in plan order, deduplicated."""
    names: list[str] = []
    for action in _parsed_plan(plan):
        if action.verb in (Verb.TOGGLE, Verb.USE):
            continue  # those targets are lamps, not receptacles
        if action.receptacle is not None and str(action.receptacle) not in names:
            names.append(str(action.receptacle))
    return names


def receptacles_for_class(plan: tuple[str, ...], object_class: str) -> list[str]:
    """Receptacles of plan steps touching an object class, in plan order.

    Toggle/use steps have no receptacle slot; the preceding goto's target
    stands in for their location.
    """
    out: list[str] = []
    last_goto: str | None = None
    for action in _parsed_plan(plan):
        if action.verb is Verb.GOTO:
            last_goto = str(action.receptacle)
            continue
        if action.obj is None or action.obj.class_name != object_class:
            continue
        spot: str | None = None
        if action.verb in (Verb.TOGGLE, Verb.USE):
            spot = last_goto
        elif action.receptacle is not None:
            spot = str(action.receptacle)
        if spot is not None and spot not in out:
            out.append(spot)
    return out


def take_receptacles_for_class(plan: tuple[str, ...], object_class: str) -> list[str]:
    """Receptacles the plan takes instances of a class from, in plan order."""
    out: list[str] = []
    for action in _parsed_plan(plan):
        if action.verb is Verb.TAKE and action.obj.class_name == object_class:
            spot = str(action.receptacle)
            if spot not in out:
                out.append(spot)
    return out


def plan_object_classes(plan: tuple[str, ...]) -> list[str]:
    classes: list[str] = []
    for action in _parsed_plan(plan):
        target = action.obj
        if action.verb in (Verb.TOGGLE, Verb.USE):
            target = action.target
        if target is not None and target.class_name not in classes:
            classes.append(target.class_name)
    return classes


def plan_take_instances(plan: tuple[str, ...], object_class: str) -> list[str]:
    return [
        str(action.obj)
        for action in _parsed_plan(plan)
        if action.verb is Verb.TAKE and action.obj.class_name == object_class
    ]


# -- query understanding -----------------------------------------------------


def _is_location_query(utterance: str) -> bool:
    return "where" in utterance.lower()


def _is_choice_query(utterance: str) -> bool:
    return "which" in utterance.lower()


def _queried_class(utterance: str, plan: tuple[str, ...]) -> str | None:
    words = set(re.findall(r"[a-z]+", utterance.lower()))
    for cls in plan_object_classes(plan):
        if cls in words or cls + "s" in words:
            return cls
    return None


ACK_TEXT = "Got it. Thanks for the update."
UNSURE_TEXT = "Hmm I am not sure."


class HelpfulKnowledgeableUser:
    """Answers from the oracle plan and the live world, nothing more."""

    persona = Persona.HELPFUL_KNOWLEDGEABLE

    def __init__(self, plan: tuple[str, ...]):
        self.plan = tuple(plan)

    def respond(self, ctx: ContextView, utterance: str) -> UserResponse:
        if _is_location_query(utterance):
            spot = self._location_answer(ctx, utterance)
            if spot is None:
                return self._say(UNSURE_TEXT)
            return self._say(f"Hmm let me think. Can you please check the {spot}?")
        if _is_choice_query(utterance):
            answer = self._choice_answer(ctx, utterance)
            if answer is None:
                return self._say(UNSURE_TEXT)
            return self._say(answer)
        return self._say(ACK_TEXT)

    def _say(self, text: str) -> UserResponse:
        return UserResponse(text=text, persona=self.persona)

    def _queried(self, utterance: str) -> str | None:
        cls = _queried_class(utterance, self.plan)
        if cls is None:
            classes = plan_object_classes(self.plan)
            cls = classes[0] if classes else None
        return cls

    def _location_answer(self, ctx: ContextView, utterance: str) -> str | None:
        cls = self._queried(utterance)
        if cls is None:
            return None
        # where to *look*: receptacles the plan fetches from, preferring one
        # that still holds an instance right now
        sources = take_receptacles_for_class(self.plan, cls)
        if ctx.world is not None:
            for spot in sources:
                if any(
                    o.class_name == cls and o.location == spot
                    for o in ctx.world.objects
                ):
                    return spot
        if sources:
            return sources[0]
        spots = receptacles_for_class(self.plan, cls)
        return spots[0] if spots else None

    def _choice_answer(self, ctx: ContextView, utterance: str) -> str | None:
        cls = self._queried(utterance)
        if cls is None:
            return None
        instances = plan_take_instances(self.plan, cls)
        if not instances:
            return None
        if len(instances) == 1:
            return f"Just {instances[0]}."
        return f"Just {instances[0]} and {instances[1]}."


class HelpfulPerturbedUser(HelpfulKnowledgeableUser):
    """Same routing as the knowledgeable persona, but ambiguous: receptacle
    classes stay truthful, instance indices are never given."""

    persona = Persona.HELPFUL_PERTURBED

    def respond(self, ctx: ContextView, utterance: str) -> UserResponse:
        if _is_location_query(utterance):
            spot = self._location_answer(ctx, utterance)
            if spot is None:
                return self._say(UNSURE_TEXT)
            cls = spot.rsplit(" ", 1)[0]
            return self._say(f"Hmm let me think. Can you please check the {cls}?")
        if _is_choice_query(utterance):
            cls = self._queried(utterance)
            spot = self._location_answer(ctx, utterance)
            if cls is None or spot is None:
                return self._say(UNSURE_TEXT)
            return self._say(f"Maybe just the {cls}s on the {spot.rsplit(' ', 1)[0]}.")
        return self._say(ACK_TEXT)


class UnhelpfulUser:
    """Offers uniformly random receptacles the oracle plan never touches."""

    persona = Persona.UNHELPFUL

    def __init__(self, plan: tuple[str, ...], receptacle_names: list[str], seed: int = 0):
        self.plan = tuple(plan)
        self._receptacles = list(receptacle_names)
        self._rng = random.Random(seed)

    def respond(self, ctx: ContextView, utterance: str) -> UserResponse:
        if _is_location_query(utterance):
            avoid = set(plan_receptacles(self.plan))
            pool = [r for r in self._receptacles if r not in avoid] or list(self._receptacles)
            spot = self._rng.choice(pool)
            return UserResponse(
                text=f"Hmm I am not sure maybe check the {spot}?", persona=self.persona
            )
        return UserResponse(text=UNSURE_TEXT, persona=self.persona)


class ScriptedUser:
    """Replays a fixed reply list; raises once exhausted."""

    def __init__(self, replies: list[str], persona: Persona = Persona.HUMAN):
        self._replies = list(replies)
        self._next = 0
        self.persona = persona

    def respond(self, ctx: ContextView, utterance: str) -> UserResponse:
        if self._next >= len(self._replies):
            raise UserChannelClosed("scripted replies exhausted")
        text = self._replies[self._next]
        self._next += 1
        return UserResponse(text=text, persona=self.persona)


class StdinUser:
    """Terminal channel for playing the user role interactively."""

    persona = Persona.HUMAN

    def respond(self, ctx: ContextView, utterance: str) -> UserResponse:
        print(f"\n[agent asks] {utterance}")
        try:
            text = input("[your reply] ").strip()
        except EOFError as exc:
            raise UserChannelClosed("stdin closed") from exc
        while not text:
            text = input("[your reply] ").strip()
        return UserResponse(text=text, persona=self.persona)


# -- LLM-backed persona (off by default) --------------------------------------

HELPFUL_SIM_PROMPT = """You are a helpful user whose task is to guide an agent operating in the environment. You have knowledge of the objects necessary to complete the tasks and their whereabouts as well as each step necessary for the agent in the environment to be successful which is as follows:

You MUST respond ONLY when the agent speaks to you and ONLY regarding the specific information sought. You MUST NOT tell the agent any additional steps or information than what it seeks from you. Use a natural tone while responding.

Example:

Oracle Information: ['go to dresser 1', 'take newspaper 1 from dresser 1', 'go to coffeetable 1', 'use desklamp 1']

Agent Query: I think a newspaper is more likely to appear in coffeetable (1-2), drawer (1-8), dresser (1-2), garbagecan (1), armchair (1), ottoman (1), sofa (1). Where do you suggest I should look for it first?

Your Response: Hmm let me think. Can you please check the dresser 1?

Think carefully and Provide your response for the following:

Oracle Information: {oracle_text}

Agent Query:
{query}

Your Response:"""

PERTURBED_SIM_PROMPT = """You are a human whose task is to guide an AI agent operating in a household environment. You have knowledge of the objects necessary to complete the tasks and their whereabouts as well as each step necessary for the agent in the environment to be successful which is as follows:

You MUST respond ONLY when the agent speaks to you and ONLY regarding the specific information sought. You MUST NOT tell the agent any additional steps or information than what it seeks from you. Use a natural tone while responding.

Example:

Oracle Information: ['go to dresser', 'take newspaper from dresser', 'go to coffeetable', 'use desklamp']

Agent Query: I think a newspaper is more likely to appear in coffeetable (1-2), drawer (1-8), dresser (1-2), garbagecan (1), armchair (1), ottoman (1), sofa (1). Where do you suggest I should look for it first?

Your responses should be ambiguous and Do NOT provide exact number of object or location.

Your Response: Hmm let me think. Can you please check the dresser?

Think carefully and Provide your response for the following:

Oracle Information: {oracle_text}

Agent Query:
{query}

Your Response:"""

UNHELPFUL_SIM_PROMPT = """You are a user who is interacting with an agent operating in the environment. You do not have knowledge of the objects necessary to complete the tasks and their whereabouts in the environment for the agent to be successful, which is as follows:

You MUST respond ONLY when the agent speaks to you and ONLY regarding the specific information sought. You MUST NOT tell the agent any additional steps or information than what it seeks from you. Use a natural tone while responding.

Example:

Agent Query: I think a newspaper is more likely to appear in coffeetable (1-2), drawer (1-8), dresser (1-2), garbagecan (1), armchair (1), ottoman (1), sofa (1). Where do you suggest I should look for it first?

Your Response: Hmm I am not sure maybe check the ottoman?

Think carefully and Provide your response for the following:

Oracle Information: {oracle_text}

Agent Query:
{query}

Your Response:"""

_SIM_PROMPTS = {
    Persona.HELPFUL_KNOWLEDGEABLE: HELPFUL_SIM_PROMPT,
    Persona.HELPFUL_PERTURBED: PERTURBED_SIM_PROMPT,
    Persona.UNHELPFUL: UNHELPFUL_SIM_PROMPT,
}


class LLMUser:
    """Chat-endpoint-backed persona sharing the policy module's client."""

    persona = Persona.LLM

    def __init__(self, persona_kind: Persona, plan: tuple[str, ...], client):
        self._prompt = _SIM_PROMPTS[persona_kind]
        self.plan = tuple(plan)
        self._client = client  # policies.llm.ChatClient

    def respond(self, ctx: ContextView, utterance: str) -> UserResponse:
        if self._prompt is UNHELPFUL_SIM_PROMPT:
            oracle_text = "[]"
        else:
            oracle_text = str(list(self.plan))
        prompt = self._prompt.format(oracle_text=oracle_text, query=utterance)
        text = self._client.complete([{"role": "user", "content": prompt}])
        return UserResponse(text=text.strip() or UNSURE_TEXT, persona=self.persona)
