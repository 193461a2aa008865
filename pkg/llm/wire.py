"""
Wire backend - OpenAI-compatible chat completions

Every call resends the task's full priming, so a retried request sees exactly
what the first attempt saw and no session state lives on the server.
"""

from pathlib import Path
from typing import Optional

import openai
from pydantic import BaseModel, ConfigDict, Field

from llm.errors import BackendUnavailable, NoSelection, UnparseableReply
from llm.parsing import extract_bracketed, longest_contained, parse_verdict
from llm.session import TASKS, PromptSession, load_session
from utils.log import get_logger

log = get_logger("llm.wire")

DEFAULT_WIRE = {
    "model": "gpt-3.5-turbo",
    "timeout": 30.0,
    "max_retries": 3,
    "temperature": 0.0,
}


class WireConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    url: Optional[str] = None
    api_key: Optional[str] = None
    model: str = DEFAULT_WIRE["model"]
    timeout: float = Field(default=DEFAULT_WIRE["timeout"], gt=0)
    max_retries: int = Field(default=DEFAULT_WIRE["max_retries"], ge=0)
    temperature: float = Field(default=DEFAULT_WIRE["temperature"], ge=0)
    prompts_dir: Optional[Path] = None


class WireBackend:
    """Talks to a chat-completion endpoint; one primed session per task."""

    def __init__(self, cfg: WireConfig, client=None):
        self.cfg = cfg
        self._client = client or openai.OpenAI(
            api_key=cfg.api_key or "not-set",
            base_url=cfg.url,
            timeout=cfg.timeout,
            max_retries=cfg.max_retries,
        )
        self.sessions: dict[str, PromptSession] = {
            task: load_session(task, cfg.model, cfg.temperature, cfg.prompts_dir)
            for task in TASKS
        }

    def complete(self, task: str, **context) -> str:
        """Send priming + rendered request, return the first choice's text."""
        session = self.sessions[task]
        messages = [m.as_dict() for m in session.request(**context)]
        try:
            response = self._client.chat.completions.create(
                model=session.model_id,
                temperature=session.temperature,
                messages=messages,
            )
        except openai.OpenAIError as exc:
            log.warning("%s request failed: %s", task, exc)
            raise BackendUnavailable(f"{task}: {exc}") from exc

        if not response.choices:
            raise UnparseableReply(f"{task}: reply has no choices")
        content = response.choices[0].message.content or ""
        log.debug("%s reply: %r", task, content)
        return content

    def cluster_name(self, members: dict[str, int]) -> str:
        ordered = sorted(members.items(), key=lambda kv: (-kv[1], kv[0]))
        reply = self.complete("cluster_name", members=ordered)
        name = extract_bracketed(reply)
        if name:
            return name
        name = longest_contained(reply, list(members))
        if name:
            return name
        raise UnparseableReply(f"no name in cluster reply: {reply!r}")

    def judge_landmark(self, name: str) -> bool:
        return parse_verdict(self.complete("judge_landmark", name=name))

    def select_landmark(self, query: str, names: list[str]) -> str:
        reply = self.complete("select_landmark", query=query, names=names)
        selected = extract_bracketed(reply) or longest_contained(reply, names)
        if selected is None:
            raise NoSelection(f"reply names no place: {reply!r}")
        return selected
