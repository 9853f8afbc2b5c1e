// Transcript state derived purely from server data: events build the
// counters (never client-side world inference), server state snapshots
// drive the awaiting/done flags.

import type { Counters, EpisodeEvent, SessionState } from "./types";

export interface TranscriptState {
  events: EpisodeEvent[];
  counters: Counters;
  stepsUsed: number;
  maxSteps: number | null;
  awaitingUser: boolean;
  awaitingUtterance: string | null;
  done: boolean;
  outcome: string | null;
}

export function initialState(): TranscriptState {
  return {
    events: [],
    counters: { think: 0, speak: 0, act: 0, invalid: 0 },
    stepsUsed: 0,
    maxSteps: null,
    awaitingUser: false,
    awaitingUtterance: null,
    done: false,
    outcome: null,
  };
}

function recount(events: EpisodeEvent[]): Counters {
  const counters: Counters = { think: 0, speak: 0, act: 0, invalid: 0 };
  for (const ev of events) {
    if (ev.source === "agent") {
      if (ev.kind === "think") counters.think += 1;
      else if (ev.kind === "speak") counters.speak += 1;
      else counters.act += 1;
    } else if (ev.invalid) {
      counters.invalid += 1;
    }
  }
  return counters;
}

function stepsUsed(events: EpisodeEvent[]): number {
  let used = 0;
  for (const ev of events) {
    if (ev.source === "agent") used = Math.max(used, ev.step + 1);
  }
  return used;
}

/** Append one event (deduplicating WS/refetch overlap) and recount. */
export function applyEvent(
  state: TranscriptState,
  event: EpisodeEvent,
): TranscriptState {
  const last = state.events[state.events.length - 1];
  if (
    last &&
    last.step === event.step &&
    last.kind === event.kind &&
    last.source === event.source &&
    last.text === event.text
  ) {
    return state;
  }
  const events = [...state.events, event];
  return {
    ...state,
    events,
    counters: recount(events),
    stepsUsed: stepsUsed(events),
  };
}

/** Replace the whole event list (transcript refetch after a reconnect). */
export function replaceEvents(
  state: TranscriptState,
  events: EpisodeEvent[],
): TranscriptState {
  return {
    ...state,
    events: [...events],
    counters: recount(events),
    stepsUsed: stepsUsed(events),
  };
}

export function applyServerState(
  state: TranscriptState,
  server: SessionState,
): TranscriptState {
  return {
    ...state,
    awaitingUser: server.awaiting_user,
    awaitingUtterance: server.awaiting_utterance,
    done: server.done,
    outcome: server.outcome,
    maxSteps: server.max_steps,
  };
}

/** Reply is legal exactly when the server says a question is pending. */
export function canReply(state: TranscriptState): boolean {
  return state.awaitingUser && !state.done;
}
