// Wire types for the session API. The event shape is the shared contract
// fixture (contract/event-schema.json): identical over WebSocket, in
// transcripts, and in JSONL logs.

export type EventSource = "agent" | "environment" | "user";
export type EventKind = "think" | "speak" | "act" | "observation" | "user";

export interface EpisodeEvent {
  step: number;
  source: EventSource;
  kind: EventKind;
  text: string;
  invalid: boolean;
  ts: string;
}

export interface SessionState {
  awaiting_user: boolean;
  awaiting_utterance: string | null;
  done: boolean;
  outcome: string | null;
  steps_used: number;
  max_steps: number;
}

export interface SessionCreated {
  session_id: string;
  goal_text: string;
}

export interface AdvanceResponse {
  events: EpisodeEvent[];
  state: SessionState;
}

export interface TranscriptResponse {
  episode_id: string;
  goal_text: string;
  events: EpisodeEvent[];
  state: SessionState;
}

export interface NewSessionForm {
  layout: string;
  task_type: string;
  policy: string;
  seed?: number;
}

export interface Counters {
  think: number;
  speak: number;
  act: number;
  invalid: number;
}
