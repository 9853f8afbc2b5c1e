// End-to-end over the real backend: spawns the Python session server, mounts
// the app in jsdom, and plays the user role through the DOM. The scripted
// flow follows the acceptance script: answer the location question with
// "check the dresser 1", watch the agent go there, and land on the Success
// banner. Seed 15 pins a bedroom pick task whose object sits on dresser 1.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import NodeWebSocket from "ws";

import { SessionClient } from "../src/api";
import { App } from "../src/ui";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function until(
  predicate: () => boolean,
  timeoutMs = 15000,
  label = "condition",
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
  throw new Error(`timed out waiting for ${label}`);
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "respact.cli", "serve", "--port", String(PORT), "--host", "127.0.0.1"],
    { stdio: "ignore" },
  );
  const deadline = Date.now() + 30000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/healthz`);
      if (response.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("backend did not come up");
});

afterAll(() => {
  server?.kill();
});

function makeApp(): { app: App; root: HTMLElement } {
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app")!;
  const client = new SessionClient(BASE, (url) => {
    // the ws package is API-compatible enough for onmessage/onclose wiring
    return new NodeWebSocket(url) as unknown as WebSocket;
  });
  return { app: new App(root, client), root };
}

describe("human-in-the-loop session over the real backend", () => {
  it("answers the location question and sees the agent follow it to success", async () => {
    const { app, root } = makeApp();

    root.querySelector<HTMLSelectElement>("#layout")!.value = "bedroom-small";
    root.querySelector<HTMLSelectElement>("#task-type")!.value = "pick";
    root.querySelector<HTMLSelectElement>("#policy")!.value = "scripted-respact";
    root.querySelector<HTMLInputElement>("#seed")!.value = "15";

    const replyInput = root.querySelector<HTMLInputElement>("#reply-text")!;
    expect(replyInput.disabled).toBe(true); // nothing pending before the session

    root
      .querySelector<HTMLFormElement>("#new-session-form")!
      .dispatchEvent(new window.Event("submit", { bubbles: true, cancelable: true }));

    await until(() => app.sessionId !== null, 15000, "session creation");
    expect(root.querySelector("#goal")!.textContent).toContain("book");

    await until(() => app.state.awaitingUser, 15000, "the agent's question");
    const question = root.querySelector<HTMLElement>("#question")!;
    expect(question.hidden).toBe(false);
    expect(question.textContent!.toLowerCase()).toContain("where do you suggest");
    expect(replyInput.disabled).toBe(false);

    replyInput.value = "check the dresser 1";
    root
      .querySelector<HTMLFormElement>("#reply-form")!
      .dispatchEvent(new window.Event("submit", { bubbles: true, cancelable: true }));

    await until(() => app.state.done, 20000, "episode completion");
    await until(
      () => app.state.events.some((e) => e.kind === "act"),
      10000,
      "the event stream to drain",
    );

    const transcript = root.querySelector("#transcript")!.textContent!;
    expect(transcript).toContain("go to dresser 1");
    const actEvents = app.state.events.filter((e) => e.kind === "act");
    expect(actEvents[0]!.text).toBe("go to dresser 1");

    const banner = root.querySelector<HTMLElement>("#outcome-banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("Success");
    expect(app.state.outcome).toBe("success");

    expect(replyInput.disabled).toBe(true); // awaiting_user=false again
    expect(root.querySelector("#count-speak")!.textContent).toBe("1");
  });

  it("streams exactly the transcript the server reports", async () => {
    const { app } = makeApp();
    await app.createSession({
      layout: "bedroom-small",
      task_type: "pick",
      policy: "oracle",
      seed: 15,
    });
    await until(() => app.state.done, 20000, "oracle episode completion");
    const client = new SessionClient(BASE);
    const transcript = await client.transcript(app.sessionId!);
    await until(
      () => app.state.events.length === transcript.events.length,
      5000,
      "stream to drain",
    );
    expect(app.state.events).toEqual(transcript.events);
    expect(transcript.state.outcome).toBe("success");
  });
});
