from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from respact.service import ServiceSettings, create_app


@pytest.fixture
def client() -> TestClient:
    return TestClient(create_app(ServiceSettings(capacity=4)))


def _create(client: TestClient, **overrides) -> dict:
    body = {"layout": "bedroom-small", "task_type": "pick", "policy": "oracle", "seed": 15}
    body.update(overrides)
    response = client.post("/api/sessions", json=body)
    assert response.status_code == 201, response.text
    return response.json()


def _drain(client: TestClient, session_id: str, max_rounds: int = 30) -> list[dict]:
    events: list[dict] = []
    for _ in range(max_rounds):
        response = client.post(f"/api/sessions/{session_id}/advance")
        if response.status_code == 409:
            break
        body = response.json()
        events.extend(body["events"])
        if body["state"]["done"] or body["state"]["awaiting_user"]:
            break
    return events


def test_healthz(client: TestClient) -> None:
    assert client.get("/healthz").status_code == 200


def test_create_returns_id_and_goal(client: TestClient) -> None:
    created = _create(client)
    assert created["session_id"]
    assert created["goal_text"].startswith("put some book")


def test_create_unknown_layout_is_400(client: TestClient) -> None:
    response = client.post("/api/sessions", json={"layout": "garage", "policy": "oracle"})
    assert response.status_code == 400


def test_create_unknown_policy_is_400(client: TestClient) -> None:
    response = client.post(
        "/api/sessions", json={"layout": "bedroom-small", "policy": "telepathy"}
    )
    assert response.status_code == 400


def test_two_sessions_are_isolated(client: TestClient) -> None:
    first = _create(client)
    second = _create(client, seed=32)
    assert first["session_id"] != second["session_id"]
    _drain(client, first["session_id"])
    transcript = client.get(f"/api/sessions/{second['session_id']}/transcript").json()
    assert transcript["events"] == []  # untouched by the other session's advance


def test_capacity_limit_returns_503() -> None:
    client = TestClient(create_app(ServiceSettings(capacity=1)))
    _create(client)
    response = client.post(
        "/api/sessions",
        json={"layout": "bedroom-small", "task_type": "pick", "policy": "oracle"},
    )
    assert response.status_code == 503


def test_oracle_session_advances_to_success(client: TestClient) -> None:
    created = _create(client)
    sid = created["session_id"]
    events = _drain(client, sid)
    assert events, "advance returned no events"
    state = client.get(f"/api/sessions/{sid}/transcript").json()["state"]
    assert state["done"] is True
    assert state["outcome"] == "success"


def test_advance_after_done_is_409_with_outcome(client: TestClient) -> None:
    sid = _create(client)["session_id"]
    _drain(client, sid)
    response = client.post(f"/api/sessions/{sid}/advance")
    assert response.status_code == 409
    assert response.json()["outcome"] == "success"


def test_unknown_session_is_404(client: TestClient) -> None:
    assert client.post("/api/sessions/nope/advance").status_code == 404
    assert client.get("/api/sessions/nope/transcript").status_code == 404
    assert client.post("/api/sessions/nope/reply", json={"text": "hi"}).status_code == 404


def test_scripted_session_asks_then_follows_reply(client: TestClient) -> None:
    created = _create(client, policy="scripted-respact")
    sid = created["session_id"]

    response = client.post(f"/api/sessions/{sid}/advance")
    state = response.json()["state"]
    assert state["awaiting_user"] is True
    assert "where do you suggest" in state["awaiting_utterance"].lower()

    # advancing while a question is pending is a conflict
    assert client.post(f"/api/sessions/{sid}/advance").status_code == 409
    # empty replies are rejected
    assert (
        client.post(f"/api/sessions/{sid}/reply", json={"text": "   "}).status_code == 422
    )

    reply = client.post(f"/api/sessions/{sid}/reply", json={"text": "check the dresser 1"})
    assert reply.status_code == 200

    events = _drain(client, sid)
    acts = [ev["text"] for ev in events if ev["kind"] == "act"]
    assert acts[0] == "go to dresser 1"
    state = client.get(f"/api/sessions/{sid}/transcript").json()["state"]
    assert state["done"] and state["outcome"] == "success"


def test_reply_when_not_awaiting_is_409(client: TestClient) -> None:
    sid = _create(client)["session_id"]
    response = client.post(f"/api/sessions/{sid}/reply", json={"text": "hello"})
    assert response.status_code == 409


def test_transcript_equals_streamed_events(client: TestClient) -> None:
    sid = _create(client)["session_id"]
    streamed: list[dict] = []
    with client.websocket_connect(f"/api/sessions/{sid}/events") as ws:
        _drain(client, sid)
        while True:
            try:
                streamed.append(ws.receive_json())
            except Exception:
                break
    transcript = client.get(f"/api/sessions/{sid}/transcript").json()["events"]
    assert streamed == transcript
    steps = [ev["step"] for ev in streamed]
    assert steps == sorted(steps)
    assert all(
        set(ev) == {"step", "source", "kind", "text", "invalid", "ts"} for ev in streamed
    )


def test_wizard_transcript_is_gated(client: TestClient) -> None:
    sid = _create(client)["session_id"]
    assert (
        client.get(f"/api/sessions/{sid}/transcript", params={"wizard": "true"}).status_code
        == 403
    )
    plain = client.get(f"/api/sessions/{sid}/transcript").json()
    assert "world" not in plain

    wizard_client = TestClient(create_app(ServiceSettings(wizard_enabled=True)))
    sid2 = _create(wizard_client)["session_id"]
    body = wizard_client.get(
        f"/api/sessions/{sid2}/transcript", params={"wizard": "true"}
    ).json()
    assert "world" in body and "objects" in body["world"]


def test_no_endpoint_leaks_world_state_without_wizard(client: TestClient) -> None:
    created = _create(client, policy="scripted-respact")
    sid = created["session_id"]
    advance = client.post(f"/api/sessions/{sid}/advance").json()
    transcript = client.get(f"/api/sessions/{sid}/transcript").json()
    for payload in (created, advance, transcript):
        assert "world" not in payload


def test_reply_timeout_aborts_episode() -> None:
    client = TestClient(create_app(ServiceSettings(reply_timeout=0.0)))
    created = _create(client, policy="scripted-respact")
    sid = created["session_id"]
    client.post(f"/api/sessions/{sid}/advance")
    import time

    time.sleep(0.01)
    state = client.get(f"/api/sessions/{sid}/transcript").json()["state"]
    assert state["done"] is True
    assert state["outcome"] == "aborted"
