"""SVG rendering of a laid-out visible graph.

Boxes, orthogonal routes with circular-arc bends, leveled port glyphs (level 1
largest), attachment badges, and pile echoes with repeat counts. Output is
deterministic: fixed attribute order, coordinates rounded to 2 decimals.
"""

from __future__ import annotations

from .layout import Arc, LayoutResult

_PORT_RADIUS = {1: 5.0, 2: 3.5}
_PORT_RADIUS_DEFAULT = 2.5

_KIND_FILL = {
    "operation": "#dce9f5",
    "meta": "#f2f2ec",
    "container": "#fbfbf8",
}
_LAYER_STROKE = {
    "CNNLayer": "#4878b0",
    "RNNLayer": "#8b5fa8",
    "FCLayer": "#3f8f5f",
    "NormalLayer": "#8a8a84",
}


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return s[:-3] if s.endswith(".00") else s


def _path_d(points: list[tuple[float, float]], arcs: list[Arc]) -> str:
    if not points:
        return ""
    if len(points) == 2 or not arcs:
        return "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in points)
    parts = [f"M {_fmt(points[0][0])} {_fmt(points[0][1])}"]
    for i, arc in enumerate(arcs, start=1):
        bx, by = points[i]
        r = arc.radius
        ax = bx - arc.d_in[0] * r
        ay = by - arc.d_in[1] * r
        cx = bx + arc.d_out[0] * r
        cy = by + arc.d_out[1] * r
        cross = arc.d_in[0] * arc.d_out[1] - arc.d_in[1] * arc.d_out[0]
        sweep = 1 if cross > 0 else 0
        parts.append(f"L {_fmt(ax)} {_fmt(ay)}")
        parts.append(f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(cx)} {_fmt(cy)}")
    parts.append(f"L {_fmt(points[-1][0])} {_fmt(points[-1][1])}")
    return " ".join(parts)


def render_svg(visible, result: LayoutResult, scale: float = 1.0) -> str:
    """Standalone SVG 1.1 document for a visible graph and its layout."""
    if not result.boxes:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="10" height="10"></svg>\n'
    max_x = max(b.x + b.w for b in result.boxes.values()) + 20
    max_y = max(b.y + b.h for b in result.boxes.values()) + 20
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(max_x * scale)}" '
        f'height="{_fmt(max_y * scale)}" viewBox="0 0 {_fmt(max_x)} {_fmt(max_y)}">',
        '<g font-family="sans-serif" font-size="10">',
    ]

    node_meta = {n["path"]: n for n in visible.nodes}
    container_meta = {c["path"]: c for c in visible.containers}

    # containers first (painted under their children)
    ordered = sorted(result.boxes, key=lambda p: (p in node_meta, p.count("/"), p))
    for path in ordered:
        box = result.boxes[path]
        info = node_meta.get(path) or container_meta.get(path) or {}
        is_container = path in container_meta
        fill = _KIND_FILL["container" if is_container else info.get("kind", "meta") if info.get("kind") in _KIND_FILL else "meta"]
        stroke = _LAYER_STROKE.get(info.get("layer_class", ""), "#5a5a55")
        rx = 6 if info.get("kind") == "meta" or is_container else 2
        pile = info.get("pile")
        if pile:
            for k in (2, 1):
                off = k * result.pile_marks.get(pile["id"], {}).get("offset", 6.0)
                lines.append(
                    f'<rect x="{_fmt(box.x + off)}" y="{_fmt(box.y + off)}" width="{_fmt(box.w)}" '
                    f'height="{_fmt(box.h)}" rx="{rx}" fill="#ffffff" stroke="{stroke}" stroke-opacity="0.45"/>'
                )
        lines.append(
            f'<rect x="{_fmt(box.x)}" y="{_fmt(box.y)}" width="{_fmt(box.w)}" height="{_fmt(box.h)}" '
            f'rx="{rx}" fill="{fill}" stroke="{stroke}"/>'
        )
        label = path.rsplit("/", 1)[-1]
        lines.append(
            f'<text x="{_fmt(box.x + 6)}" y="{_fmt(box.y + 13)}" fill="#33332f">{_escape(label)}</text>'
        )
        if pile:
            bx = box.x + box.w - 4
            lines.append(
                f'<text x="{_fmt(bx)}" y="{_fmt(box.y - 3)}" text-anchor="end" font-weight="bold" '
                f'fill="#b05028">x{pile["repeat"]}</text>'
            )

    for eid in sorted(result.routes, key=lambda e: (len(e), e)):
        route = result.routes[eid]
        d = _path_d(route.points, route.arcs)
        lines.append(f'<path d="{d}" fill="none" stroke="#6b6b64" stroke-width="1.2"/>')
        # arrowhead: short terminal tick
        (x1, y1) = route.points[-1]
        lines.append(
            f'<circle cx="{_fmt(x1)}" cy="{_fmt(y1)}" r="1.6" fill="#6b6b64"/>'
        )

    ports = {p["id"]: p for p in visible.ports}
    for pid in sorted(result.port_anchors):
        port = ports.get(pid)
        if port is None:
            continue
        x, y = result.port_anchors[pid]
        r = _PORT_RADIUS.get(port["level"], _PORT_RADIUS_DEFAULT)
        lines.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="#ffffff" stroke="#b05028" '
            f'stroke-width="{1.6 if port["kind"] == "module" else 1.0}"/>'
        )

    for data_id in sorted(result.badges):
        badge = result.badges[data_id]
        x, y = badge["point"]
        lines.append(
            f'<rect x="{_fmt(x - 4)}" y="{_fmt(y - 4)}" width="8" height="8" '
            f'fill="{"#e8d9a0" if badge["corner"] == "bottom-left" else "#cfe3cf"}" stroke="#8a8a84"/>'
        )

    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
