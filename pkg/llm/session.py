"""
Prompt sessions - mission description plus worked examples, rendered from jinja2 files

A priming template is split into messages by marker lines:

    ### system
    ...mission...
    ### user
    ...example question...
    ### assistant
    ...example answer...
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from jinja2 import ChoiceLoader, Environment, FileSystemLoader, StrictUndefined

PROMPTS_DIR = Path(__file__).parent / "prompts"
TASKS = ("cluster_name", "judge_landmark", "select_landmark")
MARKER = re.compile(r"^###\s+(system|user|assistant)\s*$", re.MULTILINE)


class ChatRole(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class ChatMessage:
    role: ChatRole
    content: str

    def __post_init__(self):
        if not self.content.strip():
            raise ValueError(f"empty {self.role.value} message")

    def as_dict(self) -> dict:
        return {"role": self.role.value, "content": self.content}


@dataclass(frozen=True)
class PromptSession:
    """Priming messages resent whole with every request."""

    task: str
    priming: tuple[ChatMessage, ...]
    model_id: str
    temperature: float = 0.0
    prompts_dir: Optional[Path] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.priming or self.priming[0].role is not ChatRole.SYSTEM:
            raise ValueError(f"{self.task}: priming must open with the mission description")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    def request(self, **context) -> list[ChatMessage]:
        """Priming followed by the rendered user request."""
        text = _environment(self.prompts_dir).get_template(f"{self.task}.request.j2").render(**context)
        return [*self.priming, ChatMessage(ChatRole.USER, text.strip())]


def _environment(prompts_dir: Optional[Path]) -> Environment:
    loaders = [FileSystemLoader(str(PROMPTS_DIR))]
    if prompts_dir:
        loaders.insert(0, FileSystemLoader(str(prompts_dir)))
    return Environment(
        loader=ChoiceLoader(loaders),
        undefined=StrictUndefined,
        autoescape=False,
        trim_blocks=True,
        lstrip_blocks=True,
    )


def split_messages(text: str) -> tuple[ChatMessage, ...]:
    """Split a rendered priming file on its ### role markers."""
    parts = MARKER.split(text)
    # parts = [preamble, role, body, role, body, ...]
    messages = []
    for role, body in zip(parts[1::2], parts[2::2]):
        messages.append(ChatMessage(ChatRole(role), body.strip()))
    return tuple(messages)


def load_session(
    task: str,
    model_id: str,
    temperature: float = 0.0,
    prompts_dir: Optional[Path] = None,
) -> PromptSession:
    """Render a task's priming template into a PromptSession."""
    if task not in TASKS:
        raise ValueError(f"Unknown task: {task}")
    prompts_dir = Path(prompts_dir) if prompts_dir else None
    text = _environment(prompts_dir).get_template(f"{task}.prime.j2").render()
    return PromptSession(
        task=task,
        priming=split_messages(text),
        model_id=model_id,
        temperature=temperature,
        prompts_dir=prompts_dir,
    )
