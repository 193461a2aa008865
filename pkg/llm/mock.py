"""
Mock backend - deterministic rules standing in for the language model
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from llm.errors import NoSelection
from llm.parsing import resolve_member


class MockRules(BaseModel):
    model_config = ConfigDict(frozen=True)

    canonical_rule: Literal["max_count"] = "max_count"
    shop_lexicon: list[str] = Field(default_factory=list)
    keyword_map: dict[str, str] = Field(default_factory=dict)


class MockBackend:
    """Pure function of (operation, inputs, rules)."""

    def __init__(self, rules: MockRules):
        self.rules = rules
        self._lexicon = {name.strip().casefold() for name in rules.shop_lexicon}

    def cluster_name(self, members: dict[str, int]) -> str:
        # highest count, then lexicographically smallest
        return min(members.items(), key=lambda kv: (-kv[1], kv[0]))[0]

    def judge_landmark(self, name: str) -> bool:
        return name.strip().casefold() in self._lexicon

    def select_landmark(self, query: str, names: list[str]) -> str:
        folded = query.casefold()
        for keyword, landmark in self.rules.keyword_map.items():
            if keyword.casefold() not in folded:
                continue
            try:
                return resolve_member(landmark, names)
            except NoSelection:
                continue
        raise NoSelection(f"no keyword rule matches {query!r}")
