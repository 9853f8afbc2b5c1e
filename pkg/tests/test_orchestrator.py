from __future__ import annotations

import pytest

from respact.core import (
    Decision,
    DecisionKind,
    Outcome,
    Persona,
    Source,
    TaskGoal,
    TaskType,
    recount,
)
from respact.household import NOTHING_HAPPENS, generate, KITCHEN_SMALL
from respact.orchestrator import (
    ContextView,
    EngineStatus,
    EpisodeEngine,
    LoopConfig,
    run_episode,
)
from respact.policies import ConstantActPolicy, OraclePolicy, ReplayPolicy
from respact.usersim import ScriptedUser


HEAT_GOAL = TaskGoal(TaskType.HEAT, "mug", "countertop")


def heat_setup():
    return generate(KITCHEN_SMALL, HEAT_GOAL, 7)


def test_oracle_policy_succeeds_with_plan_length_acts() -> None:
    world, plan = heat_setup()
    episode = run_episode(world, HEAT_GOAL, OraclePolicy(plan), ScriptedUser([]))
    assert episode.outcome is Outcome.SUCCESS
    assert episode.counters.act_count == len(plan)
    assert episode.counters.speak_count == 0
    assert episode.counters.invalid_count == 0


def test_always_look_exhausts_budget_at_exactly_max_steps() -> None:
    world, _ = heat_setup()
    cfg = LoopConfig(max_steps=17)
    episode = run_episode(world, HEAT_GOAL, ConstantActPolicy("look"), ScriptedUser([]), cfg)
    assert episode.outcome is Outcome.BUDGET_EXHAUSTED
    assert episode.counters.act_count == 17
    assert episode.counters.invalid_count == 0  # look is always valid


def test_gibberish_acts_abort_after_invalid_streak() -> None:
    world, _ = heat_setup()
    cfg = LoopConfig(max_steps=50, max_consecutive_invalid=10)
    engine = EpisodeEngine(world, HEAT_GOAL, ConstantActPolicy("frobnicate the sprocket"),
                           cfg=cfg, user=ScriptedUser([]))
    episode = engine.run()
    assert episode.outcome is Outcome.BUDGET_EXHAUSTED
    assert episode.counters.act_count == 10
    assert episode.counters.invalid_count == 10
    assert engine.world == world  # every invalid step was a pure no-op
    env_events = [ev for ev in episode.events if ev.source is Source.ENVIRONMENT]
    assert all(ev.text == NOTHING_HAPPENS and ev.invalid for ev in env_events)


def test_think_routes_to_ok_echo() -> None:
    world, plan = heat_setup()
    policy = ReplayPolicy([Decision(DecisionKind.THINK, "pondering...")] +
                          [Decision(DecisionKind.ACT, a) for a in plan])
    episode = run_episode(world, HEAT_GOAL, policy, ScriptedUser([]))
    assert episode.outcome is Outcome.SUCCESS
    assert episode.events[0].kind == "think"
    echo = episode.events[1]
    assert echo.source is Source.ENVIRONMENT and echo.text == "OK."
    assert echo.step == episode.events[0].step


def test_speak_never_mutates_world_state() -> None:
    world, plan = heat_setup()
    policy = ReplayPolicy([Decision(DecisionKind.SPEAK, "Where should I look?")] +
                          [Decision(DecisionKind.ACT, a) for a in plan])
    engine = EpisodeEngine(world, HEAT_GOAL, policy, user=ScriptedUser(["check the fridge 1"]))
    before = engine.world
    assert engine.step_once() is EngineStatus.RUNNING
    assert engine.world == before
    user_events = [ev for ev in engine.episode.events if ev.source is Source.USER]
    assert user_events[0].text == "check the fridge 1"


def test_policy_exception_aborts_episode() -> None:
    class Exploding:
        def decide(self, ctx: ContextView) -> Decision:
            raise RuntimeError("boom")

    world, _ = heat_setup()
    episode = run_episode(world, HEAT_GOAL, Exploding(), ScriptedUser([]))
    assert episode.outcome is Outcome.ABORTED


def test_exhausted_user_channel_aborts_episode() -> None:
    world, _ = heat_setup()
    policy = ReplayPolicy([Decision(DecisionKind.SPEAK, "anyone there?")])
    episode = run_episode(world, HEAT_GOAL, policy, ScriptedUser([]))
    assert episode.outcome is Outcome.ABORTED


def test_engine_parks_on_speak_without_user_port() -> None:
    world, plan = heat_setup()
    policy = ReplayPolicy([Decision(DecisionKind.SPEAK, "Where should I look?")] +
                          [Decision(DecisionKind.ACT, a) for a in plan])
    engine = EpisodeEngine(world, HEAT_GOAL, policy, user=None)
    assert engine.step_once() is EngineStatus.AWAITING_USER
    assert engine.awaiting_utterance == "Where should I look?"
    with pytest.raises(RuntimeError):
        engine.run()  # cannot loop while parked
    engine.submit_reply("try the fridge", persona=Persona.HUMAN)
    assert engine.status is EngineStatus.RUNNING
    while engine.step_once() is not EngineStatus.DONE:
        pass
    assert engine.episode.outcome is Outcome.SUCCESS


def test_submit_reply_rejected_when_not_awaiting() -> None:
    world, _ = heat_setup()
    engine = EpisodeEngine(world, HEAT_GOAL, ConstantActPolicy("look"), user=None)
    with pytest.raises(RuntimeError):
        engine.submit_reply("hello")


def test_counters_always_match_recount_and_events_are_append_only() -> None:
    world, plan = heat_setup()
    seen: list[tuple[int, str]] = []

    class Spy:
        def on_episode_start(self, episode, initial_obs):
            pass

        def on_event(self, episode_id, event):
            seen.append((event.step, event.kind))

        def on_episode_end(self, episode):
            pass

    episode = run_episode(world, HEAT_GOAL, OraclePolicy(plan), ScriptedUser([]), sink=Spy())
    assert episode.counters == recount(episode)
    assert seen == [(ev.step, ev.kind) for ev in episode.events]


def test_success_on_presatisfied_world_is_immediate() -> None:
    world, plan = heat_setup()
    from respact.grammar import parse_action
    from respact.household import step as env_step

    for raw in plan:
        world = env_step(world, parse_action(raw)).state
    episode = run_episode(world, HEAT_GOAL, ConstantActPolicy("look"), ScriptedUser([]))
    assert episode.outcome is Outcome.SUCCESS
    assert episode.events == []


def test_jsonl_stream_sink_matches_batch_serialization() -> None:
    import io

    from respact.episode_io import JsonlStreamSink, parse_episodes, write_episode

    world, plan = heat_setup()
    stream = io.StringIO()
    episode = run_episode(
        world, HEAT_GOAL, OraclePolicy(plan), ScriptedUser([]), sink=JsonlStreamSink(stream)
    )
    batch = io.StringIO()
    write_episode(episode, batch)
    assert stream.getvalue() == batch.getvalue()
    (round_tripped,) = parse_episodes(stream.getvalue().splitlines())
    assert round_tripped == episode


def test_replay_of_fixture_transcript(bedroom_world, pick_two_goal) -> None:
    from respact.policies import load_exemplars, parse_transcript

    transcript = parse_transcript(load_exemplars(TaskType.PICK_TWO)[0])
    policy = ReplayPolicy(transcript.agent_decisions())
    user = ScriptedUser(transcript.user_replies())
    episode = run_episode(bedroom_world, pick_two_goal, policy, user)
    assert episode.outcome is Outcome.SUCCESS
    assert episode.counters.speak_count == 2
    assert episode.counters.invalid_count == 0
    # the environment reproduces the transcript's responses word for word
    replies = [ev.text for ev in episode.events
               if ev.source in (Source.ENVIRONMENT, Source.USER)]
    expected = [t.text for t in transcript.turns if t.kind in ("observation", "user")]
    assert replies == expected
