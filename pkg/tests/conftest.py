"""
Shared fixtures: camera, configs, mock rules and the mall scenario
"""

import json

import pytest

from config import MappingConfig
from geometry import Intrinsics, WorldPoint
from landmarks import LandmarkRecord, Verdict
from llm import MockBackend, MockRules
from memory import MemoryEntry, MemoryStatus
from pipeline import MapState, new_map

# Landmark judgement table: name -> is this a shop?
SHOP_TABLE = {
    "Donotbeat": False,
    "请切拍打": False,
    "NoSmoking": False,
    "KFC": True,
    "Don't Touch": False,
    "DANGER": False,
    "HIGHTEMPERATURE": False,
    "必胜客欢乐餐厅": True,
    "WASHROOM": False,
    "ALIENWARE": True,
    "HUAWEI": True,
    "GUCCI": True,
}

KEYWORD_MAP = {
    "pizza": "必胜客欢乐餐厅",
    "chicken": "KFC",
    "computer": "ALIENWARE",
    "phone": "HUAWEI",
    "smoke": "NoSmoking",
}

SIGNS = [
    ("KFC", (1.0, -0.5, 4.0)),
    ("必胜客欢乐餐厅", (2.6, 0.0, 4.0)),
    ("ALIENWARE", (4.2, 0.5, 4.0)),
    ("GUCCI", (5.8, -0.5, 4.0)),
    ("DANGER", (7.4, 0.0, 4.0)),
    ("HIGHTEMPERATURE", (9.0, 0.5, 4.0)),
]


@pytest.fixture
def intrinsics():
    return Intrinsics(alpha_x=500.0, alpha_y=500.0, u0=320.0, v0=240.0, width=640, height=480)


@pytest.fixture
def mapping_config(intrinsics):
    return MappingConfig(intrinsics=intrinsics)


@pytest.fixture
def mock_rules():
    return MockRules(
        shop_lexicon=[name for name, shop in SHOP_TABLE.items() if shop],
        keyword_map=KEYWORD_MAP,
    )


@pytest.fixture
def mock_backend(mock_rules):
    return MockBackend(mock_rules)


def scenario_dict(noisy: bool = True, seed: int = 7) -> dict:
    """A 300-frame walk along six signs and back."""
    noise = {
        "char_substitute_rate": 0.1,
        "spurious_rate": 0.02,
        "depth_sigma": 0.05,
    } if noisy else {}
    return {
        "seed": seed,
        "intrinsics": {"alpha_x": 500.0, "alpha_y": 500.0, "u0": 320.0, "v0": 240.0,
                       "width": 640, "height": 480},
        "noise": noise,
        "signs": [{"text": text, "center": list(center), "half_extent": 0.3} for text, center in SIGNS],
        "waypoints": [
            {"position": [0.0, 0.0, 0.0]},
            {"position": [10.0, 0.0, 0.0]},
        ],
        "frames_per_segment": 150,
        "loop": True,
    }


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario_dict(), ensure_ascii=False), encoding="utf-8")
    return path


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "mapping.json"
    path.write_text(json.dumps({
        "intrinsics": {"alpha_x": 500.0, "alpha_y": 500.0, "u0": 320.0, "v0": 240.0,
                       "width": 640, "height": 480},
    }), encoding="utf-8")
    return path


@pytest.fixture
def backend_file(tmp_path, mock_rules):
    path = tmp_path / "backend.json"
    path.write_text(json.dumps({"kind": "mock", "mock": mock_rules.model_dump()}, ensure_ascii=False),
                    encoding="utf-8")
    return path


def build_table_map(config: MappingConfig) -> MapState:
    """A distilled map holding every judgement-table name as a long-term class."""
    stored = {
        "KFC": WorldPoint(1.2, -0.064, 0.70),
        "必胜客欢乐餐厅": WorldPoint(2.5, -0.086, 0.78),
        "ALIENWARE": WorldPoint(3.4, -0.10, 0.82),
    }
    state = new_map(config)
    for i, (name, is_shop) in enumerate(SHOP_TABLE.items()):
        text_class = state.classes.create(name)
        text_class.add(name, 4)  # five reads in all
        text_class.canonical_name = name
        position = stored.get(name, WorldPoint(float(i), 0.0, 1.0))
        state.memory.entries[text_class.class_id] = MemoryEntry(
            score=5.0, status=MemoryStatus.LONG_TERM, observations=6, promoted_frame=i,
        )
        state.records[text_class.class_id] = LandmarkRecord(
            class_id=text_class.class_id,
            canonical_name=name,
            verdict=Verdict.LANDMARK if is_shop else Verdict.NOT_LANDMARK,
            positions=[position],
            final_position=position,
        )
    state.memory.frame = 40
    state.last_frame_id = 39
    state.distilled = True
    return state


@pytest.fixture
def table_map(mapping_config):
    return build_table_map(mapping_config)
