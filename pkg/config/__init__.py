"""
Configuration - mapping and backend settings loaded from JSON files

Mapping file (build):
    {"intrinsics": {...}, "similarity": {...}, "memory": {...},
     "cluster": {...}, "border_margin": 20, "association_window": 0.05,
     "landmarks_only": true}

Backend file (distill / query):
    {"kind": "mock", "mock": {"shop_lexicon": [...], "keyword_map": {...}}}
    {"kind": "wire", "wire": {"url": ..., "api_key": ..., "model": ...}}
"""

import json
import os
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from geometry import DEFAULT_BORDER_MARGIN, EPSILON_Z, Intrinsics
from landmarks import ClusterConfig
from llm import MockRules, WireConfig, build_backend
from memory import MemoryConfig
from textsim import SimilarityConfig
from utils.errors import ConfigError

ENV_LLM_URL = "TEXTLAND_LLM_URL"
ENV_LLM_KEY = "TEXTLAND_LLM_KEY"

DEFAULT_ASSOCIATION_WINDOW = 0.05


class MappingConfig(BaseModel):
    """Everything the runtime mapping and distilling workflows need."""

    model_config = ConfigDict(frozen=True)

    intrinsics: Intrinsics
    similarity: SimilarityConfig = Field(default_factory=SimilarityConfig)
    memory: MemoryConfig = Field(default_factory=MemoryConfig)
    cluster: ClusterConfig = Field(default_factory=ClusterConfig)
    border_margin: float = Field(default=DEFAULT_BORDER_MARGIN, ge=0)
    epsilon_z: float = Field(default=EPSILON_Z, gt=0)
    association_window: float = Field(default=DEFAULT_ASSOCIATION_WINDOW, ge=0)
    landmarks_only: bool = True
    distill_workers: int = Field(default=1, ge=1)


class BackendConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["wire", "mock"] = "mock"
    wire: WireConfig = Field(default_factory=WireConfig)
    mock: MockRules = Field(default_factory=MockRules)

    def build(self):
        return build_backend(self.kind, wire=self.wire, mock=self.mock)


def _read_json(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}: invalid JSON: {e.msg}")
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return data


def parse_mapping_config(data: dict, source: str = "<config>") -> MappingConfig:
    try:
        return MappingConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{source}: {e}")


def load_mapping_config(path: Union[str, Path]) -> MappingConfig:
    """Load and validate a mapping config file."""
    return parse_mapping_config(_read_json(path), str(path))


def load_backend_config(path: Optional[Union[str, Path]] = None) -> BackendConfig:
    """
    Load a backend config, letting TEXTLAND_LLM_URL / TEXTLAND_LLM_KEY override
    the wire endpoint. Without a file, both variables select the wire backend.
    """
    url = os.environ.get(ENV_LLM_URL)
    key = os.environ.get(ENV_LLM_KEY)

    if path is None:
        if not (url and key):
            raise ConfigError(
                f"no backend config given and {ENV_LLM_URL} / {ENV_LLM_KEY} are not both set"
            )
        data = {"kind": "wire", "wire": {}}
    else:
        data = _read_json(path)

    if url or key:
        wire = dict(data.get("wire") or {})
        if url:
            wire["url"] = url
        if key:
            wire["api_key"] = key
        data = {**data, "wire": wire}

    try:
        return BackendConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{path or 'environment'}: {e}")


__all__ = [
    "ENV_LLM_URL",
    "ENV_LLM_KEY",
    "DEFAULT_ASSOCIATION_WINDOW",
    "MappingConfig",
    "BackendConfig",
    "parse_mapping_config",
    "load_mapping_config",
    "load_backend_config",
]
