// Typed client for the session service. The WebSocket constructor is
// injectable so tests (and node) can supply their own implementation.

import type {
  AdvanceResponse,
  EpisodeEvent,
  NewSessionForm,
  SessionCreated,
  TranscriptResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(response.status, body.detail ?? response.statusText);
  }
  return body as T;
}

export type WebSocketFactory = (url: string) => WebSocket;

/** What the UI needs from the backend; SessionClient is the real one. */
export interface SessionApi {
  createSession(form: NewSessionForm): Promise<SessionCreated>;
  advance(sessionId: string): Promise<AdvanceResponse>;
  reply(sessionId: string, text: string): Promise<{ ok: boolean }>;
  transcript(sessionId: string): Promise<TranscriptResponse>;
  openEventStream(
    sessionId: string,
    onEvent: (event: EpisodeEvent) => void,
    onClose: () => void,
  ): { close(): void };
}

export class SessionClient implements SessionApi {
  constructor(
    readonly baseUrl: string = "",
    readonly makeSocket: WebSocketFactory = (url) => new WebSocket(url),
  ) {}

  createSession(form: NewSessionForm): Promise<SessionCreated> {
    const body: Record<string, unknown> = {
      layout: form.layout,
      task_type: form.task_type,
      policy: form.policy,
    };
    if (form.seed !== undefined) {
      body.seed = form.seed; // blank seed field stays out of the request
    }
    return request<SessionCreated>(`${this.baseUrl}/api/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  advance(sessionId: string): Promise<AdvanceResponse> {
    return request<AdvanceResponse>(
      `${this.baseUrl}/api/sessions/${sessionId}/advance`,
      { method: "POST" },
    );
  }

  reply(sessionId: string, text: string): Promise<{ ok: boolean }> {
    return request(`${this.baseUrl}/api/sessions/${sessionId}/reply`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  transcript(sessionId: string): Promise<TranscriptResponse> {
    return request<TranscriptResponse>(
      `${this.baseUrl}/api/sessions/${sessionId}/transcript`,
    );
  }

  openEventStream(
    sessionId: string,
    onEvent: (event: EpisodeEvent) => void,
    onClose: () => void,
  ): WebSocket {
    const http = this.baseUrl || window.location.origin;
    const wsBase = http.replace(/^http/, "ws");
    const socket = this.makeSocket(
      `${wsBase}/api/sessions/${sessionId}/events`,
    );
    socket.onmessage = (message: MessageEvent) => {
      onEvent(JSON.parse(String(message.data)) as EpisodeEvent);
    };
    socket.onclose = onClose;
    return socket;
  }
}
