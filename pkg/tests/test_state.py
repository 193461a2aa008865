"""
Tests for map file persistence
"""

import json

import pytest

from pipeline import distill, new_map, process_frame
from state import MAP_VERSION, MapVersionError, dumps_map, load_map, map_to_dict, save_map
from tests.test_pipeline import frame_with


def built_map(mapping_config, intrinsics, mock_backend=None):
    state = new_map(mapping_config)
    frames = [[("KFC", (-1.0, 0.0, 4.0)), ("GUCCI", (1.0, 0.2, 4.5))]] * 7 + [[("zzq", (0.0, 0.0, 4.0))]] + [[]] * 11
    for frame_id, signs in enumerate(frames):
        process_frame(state, frame_with(intrinsics, frame_id, signs))
    if mock_backend is not None:
        distill(state, mock_backend)
    return state


class TestMapFile:
    """Tests for saving and loading maps."""

    def test_round_trip_undistilled(self, tmp_path, mapping_config, intrinsics):
        state = built_map(mapping_config, intrinsics)
        save_map(state, tmp_path / "map.json")
        assert load_map(tmp_path / "map.json") == state

    def test_round_trip_distilled(self, tmp_path, mapping_config, intrinsics, mock_backend):
        state = built_map(mapping_config, intrinsics, mock_backend)
        save_map(state, tmp_path / "map.json")
        loaded = load_map(tmp_path / "map.json")
        assert loaded == state
        assert loaded.distilled
        assert loaded.classes[0].canonical_name == "KFC"

    def test_round_trip_table_map(self, tmp_path, table_map):
        save_map(table_map, tmp_path / "map.json")
        assert load_map(tmp_path / "map.json") == table_map

    def test_layout(self, mapping_config, intrinsics, mock_backend):
        data = map_to_dict(built_map(mapping_config, intrinsics, mock_backend))
        assert data["version"] == MAP_VERSION
        assert data["intrinsics"]["width"] == 640
        assert "intrinsics" not in data["config"]
        assert data["forgotten"] == [2]
        assert [entry["class_id"] for entry in data["landmarks"]] == [0, 1]

        kfc = data["landmarks"][0]
        assert kfc["canonical_name"] == "KFC"
        assert kfc["verdict"] == "landmark"
        assert kfc["member_counts"] == {"KFC": 7}
        assert kfc["n_observations"] == 7
        assert kfc["status"] == "long_term"
        assert len(kfc["position"]) == 3

    def test_deterministic_bytes(self, mapping_config, intrinsics, mock_backend):
        a = dumps_map(built_map(mapping_config, intrinsics, mock_backend))
        b = dumps_map(built_map(mapping_config, intrinsics, mock_backend))
        assert a == b
        assert a.endswith("}\n")

    def test_unicode_written_verbatim(self, tmp_path, table_map):
        save_map(table_map, tmp_path / "map.json")
        assert "必胜客欢乐餐厅" in (tmp_path / "map.json").read_text(encoding="utf-8")

    def test_wrong_version(self, tmp_path, table_map):
        data = map_to_dict(table_map)
        data["version"] = 99
        path = tmp_path / "map.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(MapVersionError) as e:
            load_map(path)
        assert e.value.exit_code == 2

    def test_malformed(self, tmp_path):
        path = tmp_path / "map.json"
        path.write_text('{"version": 1, "landmarks": []}', encoding="utf-8")
        with pytest.raises(MapVersionError):
            load_map(path)

    def test_not_json(self, tmp_path):
        path = tmp_path / "map.json"
        path.write_text("landmarks:\n  - KFC\n", encoding="utf-8")
        with pytest.raises(MapVersionError):
            load_map(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MapVersionError):
            load_map(tmp_path / "nope.json")
