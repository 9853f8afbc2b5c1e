from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient

from respact.service import ServiceSettings, create_app

SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "contract" / "event-schema.json").read_text()
)


@pytest.fixture
def client() -> TestClient:
    return TestClient(create_app(ServiceSettings()))


def test_every_served_event_matches_the_shared_schema(client: TestClient) -> None:
    created = client.post(
        "/api/sessions",
        json={"layout": "bedroom-small", "task_type": "pick", "policy": "oracle", "seed": 15},
    ).json()
    sid = created["session_id"]
    advanced = client.post(f"/api/sessions/{sid}/advance").json()
    transcript = client.get(f"/api/sessions/{sid}/transcript").json()
    events = advanced["events"] + transcript["events"]
    assert events
    for event in events:
        jsonschema.validate(event, SCHEMA)


def test_jsonl_event_lines_match_the_shared_schema(tmp_path) -> None:
    from respact.cli import main

    out = tmp_path / "run.jsonl"
    main(["run", "--policy", "oracle", "--episodes", "2", "--seed", "3", "--out", str(out)])
    for line in out.read_text().splitlines():
        record = json.loads(line)
        if "step" in record:
            jsonschema.validate(record, SCHEMA)
