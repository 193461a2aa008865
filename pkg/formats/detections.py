"""
Detection logs - newline-delimited JSON, one detected string per line

    {"ts": 12.5, "text": "KFC", "quad": [[u, v], [u, v], [u, v], [u, v]],
     "depth_m": 2.1, "conf": 0.93}
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from formats.lines import read_lines
from geometry import QuadBox
from utils.errors import ParseError
from utils.log import get_logger

log = get_logger("formats.detections")


@dataclass(frozen=True)
class DetectionRecord:
    ts: float
    text: str
    quad: QuadBox
    depth_m: Optional[float]
    conf: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "ts": self.ts,
                "text": self.text,
                "quad": self.quad.as_list(),
                "depth_m": self.depth_m,
                "conf": self.conf,
            },
            ensure_ascii=False,
        )


def _number(value, name: str, path, lineno: int) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ParseError(path, lineno, f"{name} must be a finite number, got {value!r}")
    return float(value)


def parse_detection_line(line: str, path, lineno: int) -> DetectionRecord:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as e:
        raise ParseError(path, lineno, f"invalid JSON: {e.msg}")
    if not isinstance(data, dict):
        raise ParseError(path, lineno, "expected a JSON object")

    missing = [k for k in ("ts", "text", "quad") if k not in data]
    if missing:
        raise ParseError(path, lineno, f"missing field(s): {', '.join(missing)}")

    ts = _number(data["ts"], "ts", path, lineno)
    text = data["text"]
    if not isinstance(text, str):
        raise ParseError(path, lineno, "text must be a string")

    quad = data["quad"]
    if not isinstance(quad, list) or len(quad) != 4 or not all(
        isinstance(c, list) and len(c) == 2 for c in quad
    ):
        raise ParseError(path, lineno, "quad must hold exactly 4 [u, v] pairs")
    corners = [(_number(u, "quad", path, lineno), _number(v, "quad", path, lineno)) for u, v in quad]

    depth = data.get("depth_m")
    if depth is not None:
        depth = _number(depth, "depth_m", path, lineno)
        if depth <= 0:
            depth = None
    conf = _number(data.get("conf", 1.0), "conf", path, lineno)
    if not 0.0 <= conf <= 1.0:
        raise ParseError(path, lineno, f"conf must lie in [0, 1], got {conf}")

    return DetectionRecord(ts=ts, text=text, quad=QuadBox(tuple(corners)), depth_m=depth, conf=conf)


def load_detections(path: Union[str, Path]) -> list[DetectionRecord]:
    """Read a detection log; timestamps must not decrease."""
    records: list[DetectionRecord] = []
    for lineno, line in read_lines(path):
        if not line:
            continue
        record = parse_detection_line(line, path, lineno)
        if records and record.ts < records[-1].ts:
            raise ParseError(path, lineno, f"timestamp {record.ts!r} goes backwards")
        records.append(record)
    return records


def write_detections(records: Iterable[DetectionRecord], path: Union[str, Path]):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(record.to_json() + "\n")
