"""Policy implementations: scripted state machines, plan replay, and the
chat-endpoint-backed policy with its prompt packs."""

from .llm import (
    ChatClient,
    ENV_KEY,
    ENV_URL,
    LLMPolicy,
    chat_client_from_env,
    default_transport,
    parse_decision_text,
)
from .prompts import (
    PACK_KINDS,
    PromptPack,
    Transcript,
    TranscriptTurn,
    add_schema_tags,
    build_messages,
    build_pack,
    exemplar_permutations,
    load_exemplars,
    main_prompt,
    parse_transcript,
    render_context,
    strip_dialogue,
)
from .scripted import (
    ConstantActPolicy,
    OraclePolicy,
    ReplayPolicy,
    ScriptedReSpActPolicy,
)

__all__ = [
    "ChatClient",
    "ConstantActPolicy",
    "ENV_KEY",
    "ENV_URL",
    "LLMPolicy",
    "OraclePolicy",
    "PACK_KINDS",
    "PromptPack",
    "ReplayPolicy",
    "ScriptedReSpActPolicy",
    "Transcript",
    "TranscriptTurn",
    "add_schema_tags",
    "build_messages",
    "build_pack",
    "chat_client_from_env",
    "default_transport",
    "exemplar_permutations",
    "load_exemplars",
    "main_prompt",
    "parse_decision_text",
    "parse_transcript",
    "render_context",
    "strip_dialogue",
]
