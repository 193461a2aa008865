"""
LLM Bridge - text clustering, landmark judgement and navigation through a language model

The three operations take any backend with `cluster_name`, `judge_landmark`
and `select_landmark` methods: the OpenAI-compatible WireBackend or the
rule-driven MockBackend.
"""

from typing import Mapping, Protocol, Sequence, Union

from llm.errors import BackendUnavailable, NoSelection, UnparseableReply
from llm.mock import MockBackend, MockRules
from llm.parsing import extract_bracketed, parse_verdict, resolve_member
from llm.session import ChatMessage, ChatRole, PromptSession, load_session
from llm.wire import WireBackend, WireConfig


class LlmBackend(Protocol):
    def cluster_name(self, members: dict[str, int]) -> str: ...

    def judge_landmark(self, name: str) -> bool: ...

    def select_landmark(self, query: str, names: list[str]) -> str: ...


def cluster_name(backend: LlmBackend, members: Mapping[str, int]) -> str:
    """Pick the canonical spelling for a group of homologous texts."""
    if not members:
        raise ValueError("cluster_name needs at least one member")
    if len(members) == 1:
        return next(iter(members))
    return backend.cluster_name(dict(members))


def judge_landmark(backend: LlmBackend, name: str) -> bool:
    """True when the name denotes a shop / landmark."""
    if not name.strip():
        raise ValueError("judge_landmark needs a name")
    return backend.judge_landmark(name)


def select_landmark(backend: LlmBackend, query: str, names: Sequence[str]) -> str:
    """Choose the place answering a natural-language request; always an element of names."""
    names = list(names)
    if not names:
        raise ValueError("select_landmark needs at least one name")
    if not query.strip():
        raise ValueError("select_landmark needs a query")
    if len(names) == 1:
        return names[0]
    return resolve_member(backend.select_landmark(query, names), names)


def build_backend(kind: str, wire: WireConfig = None, mock: MockRules = None) -> Union[WireBackend, MockBackend]:
    """Instantiate the configured backend variant."""
    if kind == "mock":
        return MockBackend(mock or MockRules())
    if kind == "wire":
        return WireBackend(wire or WireConfig())
    raise ValueError(f"Unknown backend kind: {kind}")


__all__ = [
    "BackendUnavailable",
    "NoSelection",
    "UnparseableReply",
    "ChatMessage",
    "ChatRole",
    "PromptSession",
    "load_session",
    "extract_bracketed",
    "parse_verdict",
    "resolve_member",
    "LlmBackend",
    "WireBackend",
    "WireConfig",
    "MockBackend",
    "MockRules",
    "cluster_name",
    "judge_landmark",
    "select_landmark",
    "build_backend",
]
