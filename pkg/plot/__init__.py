"""
Map Plot - top-down SVG scatter of landmark positions

Blue marks records judged as landmarks, pink marks everything else.
"""

from jinja2 import Environment

from landmarks import Verdict

LANDMARK_COLOR = "#1f77b4"
OTHER_COLOR = "#ff69b4"

CANVAS_SIZE = 640
CANVAS_PADDING = 60

SVG_TEMPLATE = """<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{{ size }}" height="{{ size }}" viewBox="0 0 {{ size }} {{ size }}">
  <title>{{ title }}</title>
  <rect x="0" y="0" width="{{ size }}" height="{{ size }}" fill="white"/>
  <text x="10" y="20" font-family="sans-serif" font-size="12" fill="#555">x (m) → right, z (m) → up · {{ points | length }} position(s)</text>
{% for p in points %}
  <g>
    <circle cx="{{ '%.2f' | format(p.cx) }}" cy="{{ '%.2f' | format(p.cy) }}" r="6" fill="{{ p.color }}"/>
    <text x="{{ '%.2f' | format(p.cx + 9) }}" y="{{ '%.2f' | format(p.cy + 4) }}" font-family="sans-serif" font-size="13" fill="{{ p.color }}">{{ p.label }}</text>
  </g>
{% endfor %}
</svg>
"""

_environment = Environment(autoescape=True, trim_blocks=True, lstrip_blocks=True)


def plot_points(records) -> list[dict]:
    """Canvas coordinates for every record with a final position (x right, z up)."""
    placed = [r for r in records if r.final_position is not None]
    if not placed:
        return []

    xs = [r.final_position.x for r in placed]
    zs = [r.final_position.z for r in placed]
    span = max(max(xs) - min(xs), max(zs) - min(zs), 1e-9)
    scale = (CANVAS_SIZE - 2 * CANVAS_PADDING) / span

    points = []
    for record in placed:
        x, _, z = record.final_position
        points.append({
            "cx": CANVAS_PADDING + (x - min(xs)) * scale,
            "cy": CANVAS_SIZE - CANVAS_PADDING - (z - min(zs)) * scale,
            "color": LANDMARK_COLOR if record.verdict is Verdict.LANDMARK else OTHER_COLOR,
            "label": record.canonical_name or f"class {record.class_id}",
        })
    return points


def render_svg(records, title: str = "textland map") -> str:
    """Render the map's positioned records as a standalone SVG document."""
    template = _environment.from_string(SVG_TEMPLATE)
    return template.render(size=CANVAS_SIZE, title=title, points=plot_points(records))


__all__ = ["LANDMARK_COLOR", "OTHER_COLOR", "plot_points", "render_svg"]
