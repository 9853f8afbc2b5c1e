import { beforeEach, describe, expect, it } from "vitest";

import { ApiError, type SessionApi } from "../src/api";
import { App } from "../src/ui";
import type {
  AdvanceResponse,
  EpisodeEvent,
  NewSessionForm,
  SessionState,
  TranscriptResponse,
} from "../src/types";

function ev(partial: Partial<EpisodeEvent>): EpisodeEvent {
  return {
    step: 0,
    source: "agent",
    kind: "think",
    text: "hmm",
    invalid: false,
    ts: "t",
    ...partial,
  };
}

const state = (p: Partial<SessionState> = {}): SessionState => ({
  awaiting_user: false,
  awaiting_utterance: null,
  done: false,
  outcome: null,
  steps_used: 0,
  max_steps: 50,
  ...p,
});

/** Scripted fake backend: a question-asking episode that one reply finishes. */
class FakeClient implements SessionApi {
  events: EpisodeEvent[] = [];
  replies: string[] = [];
  createdWith: NewSessionForm | null = null;
  failCreate: ApiError | null = null;
  phase: "fresh" | "asked" | "answered" | "done" = "fresh";
  private listeners: Array<(e: EpisodeEvent) => void> = [];

  private push(event: EpisodeEvent): void {
    this.events.push(event);
    for (const cb of this.listeners) cb(event);
  }

  async createSession(form: NewSessionForm) {
    if (this.failCreate) throw this.failCreate;
    this.createdWith = form;
    return { session_id: "s1", goal_text: "put some book on bed." };
  }

  async advance(_: string): Promise<AdvanceResponse> {
    if (this.phase === "fresh") {
      this.push(ev({ step: 0, kind: "speak", text: "Where should I look for the book?" }));
      this.phase = "asked";
      return {
        events: [],
        state: state({
          awaiting_user: true,
          awaiting_utterance: "Where should I look for the book?",
          steps_used: 1,
        }),
      };
    }
    if (this.phase === "answered") {
      this.push(ev({ step: 1, kind: "act", text: "go to dresser 1" }));
      this.push(
        ev({
          step: 1,
          source: "environment",
          kind: "observation",
          text: "On the dresser 1, you see a book 1.",
        }),
      );
      this.phase = "done";
      return { events: [], state: state({ done: true, outcome: "success", steps_used: 2 }) };
    }
    throw new ApiError(409, "not runnable");
  }

  async reply(_: string, text: string) {
    if (this.phase !== "asked") throw new ApiError(409, "no pending question");
    this.replies.push(text);
    this.push(ev({ step: 0, source: "user", kind: "user", text }));
    this.phase = "answered";
    return { ok: true };
  }

  async transcript(_: string): Promise<TranscriptResponse> {
    return {
      episode_id: "s1",
      goal_text: "put some book on bed.",
      events: [...this.events],
      state: state(
        this.phase === "done"
          ? { done: true, outcome: "success" }
          : this.phase === "asked"
            ? { awaiting_user: true, awaiting_utterance: "Where should I look for the book?" }
            : {},
      ),
    };
  }

  openEventStream(
    _: string,
    onEvent: (event: EpisodeEvent) => void,
    _onClose: () => void,
  ) {
    this.listeners.push(onEvent);
    for (const event of this.events) onEvent(event);
    return { close() {} };
  }
}

async function flush(): Promise<void> {
  for (let i = 0; i < 20; i++) await Promise.resolve();
}

describe("App", () => {
  let root: HTMLElement;
  let client: FakeClient;
  let app: App;

  beforeEach(() => {
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById("app")!;
    client = new FakeClient();
    app = new App(root, client);
  });

  it("reply box is disabled until the server says a question is pending", async () => {
    const input = root.querySelector<HTMLInputElement>("#reply-text")!;
    expect(input.disabled).toBe(true);
    await app.createSession({ layout: "bedroom-small", task_type: "pick", policy: "scripted-respact" });
    await flush();
    expect(app.state.awaitingUser).toBe(true);
    expect(input.disabled).toBe(false);
    expect(root.querySelector("#question")!.textContent).toContain("Where should I look");
  });

  it("empty reply submissions are blocked client-side", async () => {
    await app.createSession({ layout: "bedroom-small", task_type: "pick", policy: "scripted-respact" });
    await flush();
    const input = root.querySelector<HTMLInputElement>("#reply-text")!;
    input.value = "   ";
    await app.submitReply();
    expect(client.replies).toEqual([]);
    expect(app.state.awaitingUser).toBe(true);
  });

  it("a reply resumes the loop and the outcome banner appears", async () => {
    await app.createSession({ layout: "bedroom-small", task_type: "pick", policy: "scripted-respact" });
    await flush();
    const input = root.querySelector<HTMLInputElement>("#reply-text")!;
    input.value = "check the dresser 1";
    await app.submitReply();
    await flush();
    expect(client.replies).toEqual(["check the dresser 1"]);
    const transcriptText = root.querySelector("#transcript")!.textContent!;
    expect(transcriptText).toContain("go to dresser 1");
    const banner = root.querySelector<HTMLElement>("#outcome-banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("Success");
    expect(input.disabled).toBe(true); // no longer awaiting
  });

  it("counters on the strip recount the received events only", async () => {
    await app.createSession({ layout: "bedroom-small", task_type: "pick", policy: "scripted-respact" });
    await flush();
    const input = root.querySelector<HTMLInputElement>("#reply-text")!;
    input.value = "check the dresser 1";
    await app.submitReply();
    await flush();
    expect(root.querySelector("#count-speak")!.textContent).toBe("1");
    expect(root.querySelector("#count-act")!.textContent).toBe("1");
    expect(root.querySelector("#count-think")!.textContent).toBe("0");
    expect(root.querySelector("#count-invalid")!.textContent).toBe("0");
  });

  it("blank seed is omitted from the create request", async () => {
    const layout = root.querySelector<HTMLSelectElement>("#layout")!;
    layout.value = "bedroom-small";
    root.querySelector<HTMLInputElement>("#seed")!.value = "  ";
    await app.createFromForm();
    expect(client.createdWith).not.toBeNull();
    expect("seed" in client.createdWith!).toBe(false);
  });

  it("seed is forwarded when given", async () => {
    root.querySelector<HTMLInputElement>("#seed")!.value = "15";
    await app.createFromForm();
    expect(client.createdWith!.seed).toBe(15);
  });

  it("server errors surface in the banner and retry resubmits", async () => {
    client.failCreate = new ApiError(503, "session capacity reached");
    await app.createFromForm();
    const banner = root.querySelector<HTMLElement>("#error-banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("capacity");

    client.failCreate = null;
    (root.querySelector("#retry") as HTMLButtonElement).click();
    await flush();
    expect(app.sessionId).toBe("s1");
    expect(banner.hidden).toBe(true);
  });

  it("invalid environment responses increment the invalid badge", async () => {
    app.autoAdvance = false;
    await app.createSession({ layout: "bedroom-small", task_type: "pick", policy: "oracle" });
    await flush();
    client.events.length = 0;
    // push an invalid act response through the stream
    const pushers = client as unknown as { listeners: Array<(e: EpisodeEvent) => void> };
    for (const cb of pushers.listeners) {
      cb(ev({ step: 0, kind: "act", text: "zorble" }));
      cb(
        ev({
          step: 0,
          source: "environment",
          kind: "observation",
          text: "Nothing happens.",
          invalid: true,
        }),
      );
    }
    expect(root.querySelector("#count-invalid")!.textContent).toBe("1");
  });
});
