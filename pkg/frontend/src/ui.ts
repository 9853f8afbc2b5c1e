// DOM layer: a new-session panel, the live transcript with reply box, and
// the run summary strip. All state comes from the server; the reply box is
// enabled exactly while a question is pending.

import { ApiError, type SessionApi } from "./api";
import {
  applyEvent,
  applyServerState,
  canReply,
  initialState,
  replaceEvents,
  type TranscriptState,
} from "./state";
import type { EpisodeEvent, NewSessionForm, SessionState } from "./types";

const LAYOUTS = ["bedroom-small", "kitchen-small"];
const TASK_TYPES = ["random", "pick", "clean", "heat", "cool", "examine", "pick_two"];
const POLICIES = ["scripted-respact", "oracle", "look"];

export class App {
  state: TranscriptState = initialState();
  sessionId: string | null = null;
  goalText = "";
  autoAdvance = true;
  private socket: { close(): void } | null = null;
  private streamed = 0;
  private streamGen = 0;
  private lastForm: NewSessionForm | null = null;
  private advancing = false;

  constructor(
    private root: HTMLElement,
    private client: SessionApi,
  ) {
    this.root.innerHTML = template();
    this.el("new-session-form").addEventListener("submit", (e) => {
      e.preventDefault();
      void this.createFromForm();
    });
    this.el("retry").addEventListener("click", () => {
      void this.createSession(this.lastForm ?? this.readForm());
    });
    this.el("reply-form").addEventListener("submit", (e) => {
      e.preventDefault();
      void this.submitReply();
    });
    this.el("step").addEventListener("click", () => void this.advanceOnce());
    const auto = this.el<HTMLInputElement>("auto-advance");
    auto.checked = this.autoAdvance;
    auto.addEventListener("change", () => {
      this.autoAdvance = auto.checked;
      if (this.autoAdvance) void this.advanceLoop();
    });
    this.render();
  }

  // -- session lifecycle ------------------------------------------------

  readForm(): NewSessionForm {
    const form: NewSessionForm = {
      layout: this.el<HTMLSelectElement>("layout").value,
      task_type: this.el<HTMLSelectElement>("task-type").value,
      policy: this.el<HTMLSelectElement>("policy").value,
    };
    const seed = this.el<HTMLInputElement>("seed").value.trim();
    if (seed !== "") form.seed = Number(seed);
    return form;
  }

  async createFromForm(): Promise<void> {
    await this.createSession(this.readForm());
  }

  async createSession(form: NewSessionForm): Promise<void> {
    this.lastForm = form;
    this.hideError();
    try {
      const created = await this.client.createSession(form);
      this.sessionId = created.session_id;
      this.goalText = created.goal_text;
      this.state = initialState();
      this.streamed = 0;
      this.openStream();
      this.render();
      if (this.autoAdvance) await this.advanceLoop();
    } catch (error) {
      this.showError(error);
    }
  }

  private openStream(): void {
    if (!this.sessionId) return;
    this.socket?.close();
    const gen = ++this.streamGen;
    this.streamed = 0;
    this.socket = this.client.openEventStream(
      this.sessionId,
      (event) => this.onStreamEvent(gen, event),
      () => void this.onStreamClosed(gen),
    );
  }

  private onStreamEvent(gen: number, event: EpisodeEvent): void {
    if (gen !== this.streamGen) return; // stale connection
    // the stream always replays from the start; skip what we already hold
    this.streamed += 1;
    if (this.streamed <= this.state.events.length) return;
    this.state = applyEvent(this.state, event);
    this.render();
  }

  private async onStreamClosed(gen: number): Promise<void> {
    // reconnect path: refetch the authoritative transcript, then resubscribe
    if (gen !== this.streamGen) return; // we closed it ourselves
    if (!this.sessionId || this.state.done) return;
    try {
      const transcript = await this.client.transcript(this.sessionId);
      this.state = applyServerState(
        replaceEvents(this.state, transcript.events),
        transcript.state,
      );
      this.render();
      if (!this.state.done) this.openStream();
    } catch {
      /* session is gone; leave the transcript as-is */
    }
  }

  // -- driving ------------------------------------------------------------

  async advanceOnce(): Promise<void> {
    if (!this.sessionId || this.state.done || this.state.awaitingUser) return;
    try {
      const response = await this.client.advance(this.sessionId);
      this.applyState(response.state);
    } catch (error) {
      if (!(error instanceof ApiError && error.status === 409)) this.showError(error);
    }
  }

  async advanceLoop(): Promise<void> {
    if (this.advancing) return;
    this.advancing = true;
    try {
      while (
        this.sessionId &&
        this.autoAdvance &&
        !this.state.done &&
        !this.state.awaitingUser
      ) {
        await this.advanceOnce();
      }
    } finally {
      this.advancing = false;
    }
  }

  async submitReply(): Promise<void> {
    const input = this.el<HTMLInputElement>("reply-text");
    const text = input.value.trim();
    if (!text || !this.sessionId || !canReply(this.state)) return; // client-side block
    try {
      await this.client.reply(this.sessionId, text);
      input.value = "";
      this.state = { ...this.state, awaitingUser: false, awaitingUtterance: null };
      this.render();
      if (this.autoAdvance) await this.advanceLoop();
    } catch (error) {
      this.showError(error);
    }
  }

  private applyState(server: SessionState): void {
    this.state = applyServerState(this.state, server);
    this.render();
  }

  // -- rendering ------------------------------------------------------------

  render(): void {
    this.el("goal").textContent = this.goalText;
    this.el("session-panel").hidden = this.sessionId === null;

    const log = this.el("transcript");
    log.textContent = "";
    for (const event of this.state.events) {
      const line = document.createElement("div");
      line.className = `ev ev-${event.kind}${event.invalid ? " ev-invalid" : ""}`;
      line.textContent = `${label(event)} ${event.text}`;
      log.appendChild(line);
    }
    log.scrollTop = log.scrollHeight;

    const question = this.el("question");
    question.textContent = this.state.awaitingUtterance ?? "";
    question.hidden = !this.state.awaitingUser;

    const replyInput = this.el<HTMLInputElement>("reply-text");
    const replySend = this.el<HTMLButtonElement>("reply-send");
    replyInput.disabled = !canReply(this.state);
    replySend.disabled = !canReply(this.state);
    if (canReply(this.state)) replyInput.focus();

    const c = this.state.counters;
    this.el("count-think").textContent = String(c.think);
    this.el("count-speak").textContent = String(c.speak);
    this.el("count-act").textContent = String(c.act);
    this.el("count-invalid").textContent = String(c.invalid);
    const budget = this.state.maxSteps
      ? `${this.state.stepsUsed}/${this.state.maxSteps}`
      : String(this.state.stepsUsed);
    this.el("budget").textContent = budget;
    const bar = this.el<HTMLProgressElement>("budget-bar");
    bar.max = this.state.maxSteps ?? 50;
    bar.value = this.state.stepsUsed;

    const banner = this.el("outcome-banner");
    banner.hidden = !this.state.done;
    if (this.state.done) {
      const won = this.state.outcome === "success";
      banner.className = `banner ${won ? "banner-success" : "banner-failure"}`;
      banner.textContent = won
        ? `Success — think ${c.think}, speak ${c.speak}, act ${c.act}, invalid ${c.invalid}`
        : `${(this.state.outcome ?? "failure").replace("_", " ")} — think ${c.think}, ` +
          `speak ${c.speak}, act ${c.act}, invalid ${c.invalid}`;
    }
    this.el<HTMLButtonElement>("step").disabled =
      this.state.done || this.state.awaitingUser || this.sessionId === null;
  }

  private showError(error: unknown): void {
    const banner = this.el("error-banner");
    banner.hidden = false;
    banner.querySelector("span")!.textContent =
      error instanceof Error ? error.message : String(error);
  }

  private hideError(): void {
    this.el("error-banner").hidden = true;
  }

  el<T extends HTMLElement = HTMLElement>(id: string): T {
    return this.root.querySelector(`#${id}`) as T;
  }
}

function label(event: EpisodeEvent): string {
  switch (event.kind) {
    case "think":
      return "think:";
    case "speak":
      return "speak:";
    case "act":
      return ">";
    case "user":
      return "you:";
    default:
      return event.invalid ? "env (invalid):" : "env:";
  }
}

function options(values: string[]): string {
  return values.map((v) => `<option value="${v}">${v}</option>`).join("");
}

function template(): string {
  return `
  <header><h1>respact session</h1></header>
  <section id="new-session">
    <form id="new-session-form">
      <label>layout <select id="layout">${options(LAYOUTS)}</select></label>
      <label>task <select id="task-type">${options(TASK_TYPES)}</select></label>
      <label>policy <select id="policy">${options(POLICIES)}</select></label>
      <label>seed <input id="seed" inputmode="numeric" placeholder="random"></label>
      <button id="create" type="submit">start session</button>
    </form>
    <div id="error-banner" class="banner banner-failure" hidden>
      <span></span> <button id="retry" type="button">retry</button>
    </div>
  </section>
  <section id="session-panel" hidden>
    <h2 id="goal"></h2>
    <div id="summary">
      <span>think <b id="count-think">0</b></span>
      <span>speak <b id="count-speak">0</b></span>
      <span>act <b id="count-act">0</b></span>
      <span>invalid <b id="count-invalid">0</b></span>
      <span>steps <b id="budget">0</b></span>
      <progress id="budget-bar" value="0" max="50"></progress>
      <label><input type="checkbox" id="auto-advance"> auto-advance</label>
      <button id="step" type="button">single step</button>
    </div>
    <div id="transcript" aria-live="polite"></div>
    <div id="outcome-banner" class="banner" hidden></div>
    <div id="question" class="pinned-question" hidden></div>
    <form id="reply-form">
      <input id="reply-text" placeholder="answer the agent" disabled>
      <button id="reply-send" type="submit" disabled>reply</button>
    </form>
  </section>`;
}
