"""Chat-completion-backed policy.

Endpoint contract: POST {base_url}/chat/completions with
{model, messages, temperature}; the first choice's message content is the
reply. Replies lead with "think:"/"speak:"/"act:" (case-insensitive);
untagged replies default to Act. Empty replies retry twice, then the
episode aborts via PolicyFailure.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Callable

import requests

from ..core import Decision, DecisionKind, TaskType
from ..orchestrator import ContextView, PolicyFailure
from .prompts import PromptPack, build_messages, build_pack

ENV_URL = "RESPACT_LLM_URL"
ENV_KEY = "RESPACT_LLM_KEY"

Transport = Callable[[str, dict, dict, float], dict]

_TAG_RE = re.compile(r"^\s*(think|speak|act)\s*:\s*(.*)$", re.IGNORECASE | re.DOTALL)


def parse_decision_text(reply: str) -> Decision:
    """Leading tag wins; an untagged non-empty reply is an Act."""
    m = _TAG_RE.match(reply)
    if m:
        kind = DecisionKind(m.group(1).lower())
        text = m.group(2).strip()
    else:
        kind = DecisionKind.ACT
        text = reply.strip()
    if not text:
        raise ValueError("empty decision text")
    return Decision(kind, text)


def default_transport(url: str, payload: dict, headers: dict, timeout: float) -> dict:
    response = requests.post(url, json=payload, headers=headers, timeout=timeout)
    response.raise_for_status()
    return response.json()


@dataclass
class ChatClient:
    base_url: str
    model: str = "gpt-4o"
    api_key: str = ""
    temperature: float = 0.0  # greedy decoding
    timeout: float = 60.0
    transport: Transport = default_transport

    def complete(self, messages: list[dict[str, str]]) -> str:
        url = self.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": self.model,
            "messages": messages,
            "temperature": self.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            body = self.transport(url, payload, headers, self.timeout)
            return body["choices"][0]["message"]["content"]
        except Exception as exc:
            raise PolicyFailure(f"chat endpoint failure: {exc}") from exc


def chat_client_from_env(model: str | None = None) -> ChatClient:
    base_url = os.environ.get(ENV_URL, "")
    if not base_url:
        raise PolicyFailure(f"{ENV_URL} is not configured")
    return ChatClient(
        base_url=base_url,
        api_key=os.environ.get(ENV_KEY, ""),
        model=model or os.environ.get("RESPACT_LLM_MODEL", "gpt-4o"),
    )


class LLMPolicy:
    """Prompt-pack policy over a chat endpoint; shareable across episodes."""

    MAX_RETRIES = 2

    def __init__(
        self,
        pack_kind: str,
        task_type: TaskType,
        permutation: int,
        client: ChatClient,
        pack: PromptPack | None = None,
    ):
        self.pack = pack or build_pack(pack_kind, task_type, permutation)
        self.client = client

    def decide(self, ctx: ContextView) -> Decision:
        messages = build_messages(self.pack, ctx)
        for _ in range(1 + self.MAX_RETRIES):
            reply = self.client.complete(messages)
            try:
                return parse_decision_text(reply)
            except ValueError:
                continue
        raise PolicyFailure("malformed replies exhausted retries")
