"""Port-constrained layered orthogonal layout, computed recursively per
expanded metanode.

Each expanded scope is laid out independently (layer assignment by longest
path over a feedback-free subgraph, dummy nodes for long edges, barycenter
crossing reduction, coordinate assignment); inner scopes are laid out first so
their bounding boxes become node sizes one level up. Flow runs left to right:
inputs attach on the left border, outputs on the right, ports stacked
vertically by level. Routes are axis-aligned polylines whose bends carry
circular-arc annotations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import ProcessedGraph, natural_key
from .pruning import HIDDEN_EDGE

FLOW_LEFT_RIGHT = "left-right"
FLOW_TOP_DOWN = "top-down"

BARYCENTER_SWEEPS = 4
HEADER_HEIGHT = 18.0
CHAR_WIDTH = 7.2


@dataclass(frozen=True)
class LayoutParams:
    layer_gap: float = 60.0
    node_gap: float = 20.0
    margin: float = 16.0
    arc_radius: float = 8.0
    min_node_width: float = 60.0
    min_node_height: float = 28.0
    port_spacing: float = 12.0
    pile_offset: float = 6.0
    flow: str = FLOW_LEFT_RIGHT

    def __post_init__(self):
        for name in ("layer_gap", "node_gap", "margin", "arc_radius", "min_node_width", "min_node_height", "port_spacing", "pile_offset"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class Box:
    x: float
    y: float
    w: float
    h: float

    def to_json(self) -> list[float]:
        return [round(self.x, 2), round(self.y, 2), round(self.w, 2), round(self.h, 2)]


@dataclass
class Arc:
    x: float
    y: float
    radius: float
    d_in: tuple[float, float]
    d_out: tuple[float, float]

    def to_json(self) -> dict:
        return {
            "at": [round(self.x, 2), round(self.y, 2)],
            "radius": round(self.radius, 2),
            "in": list(self.d_in),
            "out": list(self.d_out),
        }


@dataclass
class Route:
    edge_id: str
    points: list[tuple[float, float]]
    arcs: list[Arc]

    def to_json(self) -> dict:
        return {
            "edge": self.edge_id,
            "points": [[round(x, 2), round(y, 2)] for x, y in self.points],
            "arcs": [a.to_json() for a in self.arcs],
        }


@dataclass
class LayoutResult:
    boxes: dict[str, Box]
    port_anchors: dict[str, tuple[float, float]]
    routes: dict[str, Route]
    badges: dict[str, dict]
    pile_marks: dict[str, dict]
    correspondence: dict[str, str] = field(default_factory=dict)
    debug: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "boxes": {k: self.boxes[k].to_json() for k in sorted(self.boxes)},
            "ports": {k: [round(v[0], 2), round(v[1], 2)] for k, v in sorted(self.port_anchors.items())},
            "routes": [self.routes[k].to_json() for k in sorted(self.routes, key=_edge_sort_key)],
            "badges": {k: self.badges[k] for k in sorted(self.badges)},
            "piles": {k: self.pile_marks[k] for k in sorted(self.pile_marks)},
            "correspondence": {k: self.correspondence[k] for k in sorted(self.correspondence)},
        }


def _edge_sort_key(eid: str):
    return (len(eid), eid)


def _path_key(path: str) -> tuple:
    return tuple(natural_key(seg) for seg in path.split("/"))


def _label(path: str) -> str:
    return path.rsplit("/", 1)[-1]


@dataclass
class _ScopeEdge:
    edge_id: str
    src_child: str
    dst_child: str
    src_owner: str
    dst_owner: str
    src_port: str | None
    dst_port: str | None
    feedback: bool = False
    dummies: list[str] = field(default_factory=list)


class _ScopeLayout:
    """Layered layout of one expanded scope in local coordinates."""

    def __init__(self, scope_path: str, children: list[str], sizes: dict[str, tuple[float, float]],
                 edges: list[_ScopeEdge], params: LayoutParams, seed_order: dict[str, tuple] | None):
        self.scope = scope_path
        self.children = children
        self.sizes = sizes
        self.edges = edges
        self.params = params
        self.seed_order = seed_order
        self.layer_of: dict[str, int] = {}
        self.orders: list[list[str]] = []
        self.pos: dict[str, tuple[float, float]] = {}
        self.dummy_pos: dict[str, tuple[float, float]] = {}
        self.size = (0.0, 0.0)

    def run(self) -> None:
        self._mark_feedback()
        self._assign_layers()
        self._insert_dummies()
        self._order()
        self._coordinates()

    def _adj(self, respect_feedback: bool) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {c: [] for c in self.children}
        for e in self.edges:
            if e.src_child == e.dst_child:
                continue
            a, b = (e.src_child, e.dst_child)
            if respect_feedback and e.feedback:
                a, b = b, a
            adj[a].append(b)
        return adj

    def _mark_feedback(self) -> None:
        """Back edges found by a deterministic DFS are layered in reverse but
        still routed in their true direction."""
        adj: dict[str, list[tuple[str, _ScopeEdge]]] = {c: [] for c in self.children}
        for e in self.edges:
            if e.src_child != e.dst_child:
                adj[e.src_child].append((e.dst_child, e))
        color: dict[str, int] = {c: 0 for c in self.children}
        order = sorted(self.children, key=_path_key)
        for root in order:
            if color[root]:
                continue
            stack: list[tuple[str, int]] = [(root, 0)]
            color[root] = 1
            while stack:
                node, i = stack[-1]
                nxt = adj[node]
                if i < len(nxt):
                    stack[-1] = (node, i + 1)
                    child, edge = nxt[i]
                    if color[child] == 0:
                        color[child] = 1
                        stack.append((child, 0))
                    elif color[child] == 1:
                        edge.feedback = True
                else:
                    color[node] = 2
                    stack.pop()

    def _assign_layers(self) -> None:
        adj = self._adj(respect_feedback=True)
        indeg = {c: 0 for c in self.children}
        for a, bs in adj.items():
            for b in bs:
                indeg[b] += 1
        layer = {c: 0 for c in self.children}
        queue = sorted((c for c in self.children if indeg[c] == 0), key=_path_key)
        seen = 0
        while queue:
            node = queue.pop(0)
            seen += 1
            for b in adj[node]:
                layer[b] = max(layer[b], layer[node] + 1)
                indeg[b] -= 1
                if indeg[b] == 0:
                    queue.append(b)
            queue.sort(key=_path_key)
        self.layer_of = layer

    def _insert_dummies(self) -> None:
        for e in self.edges:
            if e.src_child == e.dst_child:
                continue
            a, b = e.src_child, e.dst_child
            la, lb = self.layer_of[a], self.layer_of[b]
            lo, hi = (la, lb) if la <= lb else (lb, la)
            for k in range(lo + 1, hi):
                d = f"__dummy:{e.edge_id}:{k}"
                e.dummies.append(d)
                self.layer_of[d] = k
        # routed direction may run right-to-left for feedback edges; keep the
        # dummy list ordered along the route
        for e in self.edges:
            if e.dummies and self.layer_of[e.src_child] > self.layer_of[e.dst_child]:
                e.dummies.reverse()

    def _order(self) -> None:
        n_layers = (max(self.layer_of.values()) + 1) if self.layer_of else 0
        layers: list[list[str]] = [[] for _ in range(n_layers)]
        for node, l in self.layer_of.items():
            layers[l].append(node)

        seed = self.seed_order or {}

        def initial_key(n: str):
            if n in seed:
                return (0, seed[n], _path_key(n))
            return (1, 0.0, _path_key(n))

        for l in layers:
            l.sort(key=initial_key)

        neigh_out: dict[str, list[str]] = {}
        neigh_in: dict[str, list[str]] = {}
        for e in self.edges:
            chain = [e.src_child] + e.dummies + [e.dst_child]
            if self.layer_of[e.src_child] > self.layer_of[e.dst_child]:
                chain.reverse()
            for a, b in zip(chain, chain[1:]):
                neigh_out.setdefault(a, []).append(b)
                neigh_in.setdefault(b, []).append(a)

        survivors_fixed = bool(seed)
        index: dict[str, int] = {}

        def reindex(layer: list[str]) -> None:
            for i, n in enumerate(layer):
                index[n] = i

        for l in layers:
            reindex(l)

        def sweep(layer: list[str], neighbors: dict[str, list[str]]) -> list[str]:
            def bary(n: str) -> float:
                ns = neighbors.get(n, [])
                if not ns:
                    return float(index[n])
                return sum(index[m] for m in ns) / len(ns)

            if survivors_fixed:
                # surviving nodes keep their relative order; newcomers (and
                # dummies) slot in by barycenter against current positions
                fixed = [n for n in layer if n in seed]
                movable = sorted((n for n in layer if n not in seed), key=lambda n: (bary(n), _path_key(n)))
                if not movable:
                    return layer
                barys = {n: bary(n) for n in movable}
                result: list[str] = []
                mi = 0
                for f in fixed:
                    fpos = float(index[f])
                    while mi < len(movable) and barys[movable[mi]] <= fpos:
                        result.append(movable[mi])
                        mi += 1
                    result.append(f)
                result.extend(movable[mi:])
                return result
            return sorted(layer, key=lambda n: (bary(n), index[n]))

        for _ in range(BARYCENTER_SWEEPS):
            for li in range(1, len(layers)):
                layers[li] = sweep(layers[li], neigh_in)
                reindex(layers[li])
            for li in range(len(layers) - 2, -1, -1):
                layers[li] = sweep(layers[li], neigh_out)
                reindex(layers[li])
        self.orders = layers

    def _coordinates(self) -> None:
        p = self.params
        layer_widths: list[float] = []
        for layer in self.orders:
            w = max((self.sizes[n][0] for n in layer if not n.startswith("__dummy:")), default=p.min_node_width)
            layer_widths.append(w)
        x = p.margin
        xs: list[float] = []
        for i, w in enumerate(layer_widths):
            xs.append(x)
            x += w + p.layer_gap
        total_w = (x - p.layer_gap + p.margin) if layer_widths else 2 * p.margin

        heights: list[float] = []
        for layer in self.orders:
            h = sum(p.node_gap if n.startswith("__dummy:") else self.sizes[n][1] for n in layer)
            h += p.node_gap * max(len(layer) - 1, 0)
            heights.append(h)
        total_h = max(heights, default=0.0) + 2 * p.margin + HEADER_HEIGHT

        for li, layer in enumerate(self.orders):
            y = p.margin + HEADER_HEIGHT + (max(heights, default=0.0) - heights[li]) / 2.0
            for n in layer:
                if n.startswith("__dummy:"):
                    self.dummy_pos[n] = (xs[li] + layer_widths[li] / 2.0, y + p.node_gap / 2.0)
                    y += p.node_gap
                    continue
                w, h = self.sizes[n]
                cx = xs[li] + (layer_widths[li] - w) / 2.0
                self.pos[n] = (cx, y)
                y += h + p.node_gap
        self.size = (total_w, total_h)


def _visible_scope_children(graph: ProcessedGraph, visible, expanded: set[str]) -> dict[str, list[str]]:
    children: dict[str, list[str]] = {p: [] for p in expanded | {"/"}}
    for entry in visible.nodes:
        node = graph.by_path[entry["path"]]
        parent = node.parent.path if node.parent is not None and not node.parent.is_root else "/"
        children[parent].append(entry["path"])
    for entry in visible.containers:
        node = graph.by_path[entry["path"]]
        parent = node.parent.path if node.parent is not None and not node.parent.is_root else "/"
        children[parent].append(entry["path"])
    for sub in children.values():
        sub.sort(key=_path_key)
    return children


def _ancestor_paths(graph: ProcessedGraph, owner: str) -> list[str]:
    """Strict ancestors of a visible owner, outermost first (root excluded)."""
    out: list[str] = []
    cur = graph.by_path[owner].parent
    while cur is not None and not cur.is_root:
        out.append(cur.path)
        cur = cur.parent
    out.reverse()
    return out


def _route_scope(graph: ProcessedGraph, o1: str, o2: str) -> tuple[str, str, str]:
    """LCA scope of two visible owners plus the branch child on each side."""
    a1 = _ancestor_paths(graph, o1)
    a2 = _ancestor_paths(graph, o2)
    i = 0
    while i < len(a1) and i < len(a2) and a1[i] == a2[i]:
        i += 1
    scope = a1[i - 1] if i > 0 else "/"
    c1 = a1[i] if i < len(a1) else o1
    c2 = a2[i] if i < len(a2) else o2
    return scope, c1, c2


def layout_subgraph(
    children: list[tuple[str, tuple[float, float]]],
    edges: list[tuple[str, str, str]],
    params: LayoutParams | None = None,
    seed_order: dict[str, tuple] | None = None,
) -> dict:
    """Layered layout of one scope in isolation.

    children are (id, (width, height)); edges are (edge_id, src, dst). Returns
    local boxes, orthogonal routes with arc annotations, the scope size, and
    the layer/dummy assignment. layout_graph composes this same machinery
    recursively; this surface exists for callers laying out a single expanded
    metanode's children.
    """
    p = params or LayoutParams()
    ids = [c for c, _ in children]
    sizes = {c: s for c, s in children}
    scope_edges = [
        _ScopeEdge(edge_id=eid, src_child=a, dst_child=b, src_owner=a, dst_owner=b, src_port=None, dst_port=None)
        for eid, a, b in edges
    ]
    sl = _ScopeLayout("/", ids, sizes, scope_edges, p, seed_order)
    sl.run()
    boxes = {n: Box(x, y, *sizes[n]) for n, (x, y) in sl.pos.items()}
    routes: dict[str, Route] = {}
    for se in sl.edges:
        src_box, dst_box = boxes[se.src_child], boxes[se.dst_child]
        start = (src_box.x + src_box.w, src_box.y + src_box.h / 2.0)
        end = (dst_box.x, dst_box.y + dst_box.h / 2.0)
        vias = [start] + [sl.dummy_pos[d] for d in se.dummies] + [end]
        points = _orthogonal(vias)
        routes[se.edge_id] = Route(edge_id=se.edge_id, points=points, arcs=_arcs(points, p.arc_radius))
    return {
        "boxes": boxes,
        "routes": routes,
        "size": sl.size,
        "layers": dict(sl.layer_of),
        "dummies": {e.edge_id: len(e.dummies) for e in sl.edges},
        "feedback": [e.edge_id for e in sl.edges if e.feedback],
    }


def _input_signature(visible, expanded: set[str], params: LayoutParams) -> str:
    import json as _json

    return _json.dumps([visible.to_json(), sorted(expanded), params.__dict__], sort_keys=True, default=str)


def layout_graph(graph: ProcessedGraph, visible, expanded: set[str],
                 params: LayoutParams | None = None, previous: LayoutResult | None = None) -> LayoutResult:
    """Bottom-up recursive layout of the visible graph; previous result, when
    given, seeds per-scope orderings for stability."""
    p = params or LayoutParams()
    signature = _input_signature(visible, expanded, p)
    if previous is not None and previous.debug.get("input_sig") == signature:
        reused = LayoutResult(
            boxes=dict(previous.boxes),
            port_anchors=dict(previous.port_anchors),
            routes=dict(previous.routes),
            badges=dict(previous.badges),
            pile_marks=dict(previous.pile_marks),
            correspondence={k: k for k in previous.boxes},
            debug=dict(previous.debug),
        )
        return reused
    scope_children = _visible_scope_children(graph, visible, set(expanded))

    # resolve routed edges to their lca scope
    scope_edges: dict[str, list[_ScopeEdge]] = {s: [] for s in scope_children}
    for edge in visible.edges:
        if edge.kind == HIDDEN_EDGE:
            continue
        scope, c1, c2 = _route_scope(graph, edge.src.node, edge.dst.node)
        scope_edges.setdefault(scope, []).append(
            _ScopeEdge(
                edge_id=edge.id,
                src_child=c1,
                dst_child=c2,
                src_owner=edge.src.node,
                dst_owner=edge.dst.node,
                src_port=edge.src.port,
                dst_port=edge.dst.port,
            )
        )

    # bottom-up sizes
    def scope_depth(path: str) -> int:
        return 0 if path == "/" else graph.by_path[path].depth

    ordered_scopes = sorted(scope_children, key=lambda s: -scope_depth(s))
    sizes: dict[str, tuple[float, float]] = {}
    piled_nodes = {n["path"]: n["pile"] for n in visible.nodes if "pile" in n}

    def leaf_size(path: str, is_meta: bool) -> tuple[float, float]:
        label = _label(path)
        w = max(p.min_node_width, 16 + CHAR_WIDTH * len(label))
        h = p.min_node_height
        if is_meta:
            w += 12
            h += 6
        if path in piled_nodes:
            w += 2 * p.pile_offset
            h += 2 * p.pile_offset
        return (w, h)

    seed_orders: dict[str, dict[str, tuple[float, float]]] = {}
    if previous is not None:
        for scope, childs in scope_children.items():
            seen = {c: previous.boxes[c] for c in childs if c in previous.boxes}
            if seen:
                seed_orders[scope] = {c: (b.y, b.x) for c, b in seen.items()}

    layouts: dict[str, _ScopeLayout] = {}
    for scope in ordered_scopes:
        childs = scope_children[scope]
        for c in childs:
            if c not in sizes:
                node = graph.by_path[c]
                sizes[c] = leaf_size(c, node.is_meta)
        sl = _ScopeLayout(scope, childs, sizes, scope_edges.get(scope, []), p, seed_orders.get(scope))
        sl.run()
        layouts[scope] = sl
        if scope != "/":
            sizes[scope] = sl.size

    # absolute assembly, outside-in
    boxes: dict[str, Box] = {}
    dummy_abs: dict[str, tuple[float, float]] = {}

    def place(scope: str, ox: float, oy: float) -> None:
        sl = layouts[scope]
        for n, (lx, ly) in sl.pos.items():
            w, h = sizes[n]
            boxes[n] = Box(ox + lx, oy + ly, w, h)
        for d, (dx, dy) in sl.dummy_pos.items():
            dummy_abs[d] = (ox + dx, oy + dy)
        for n in sl.pos:
            if n in layouts:  # expanded child scope
                b = boxes[n]
                place(n, b.x, b.y)

    place("/", 0.0, 0.0)

    # port anchors: stacked by level, inputs left, outputs right
    ports_by_owner: dict[tuple[str, str], list[dict]] = {}
    for port in visible.ports:
        ports_by_owner.setdefault((port["owner"], port["side"]), []).append(port)
    port_anchors: dict[str, tuple[float, float]] = {}
    for (owner, side), plist in sorted(ports_by_owner.items()):
        box = boxes.get(owner)
        if box is None:
            continue
        plist.sort(key=lambda q: q["level"])
        x = box.x if side == "in" else box.x + box.w
        start = box.y + min(HEADER_HEIGHT, box.h / 4.0)
        for i, q in enumerate(plist):
            y = min(start + i * p.port_spacing, box.y + box.h - 4.0)
            port_anchors[q["id"]] = (x, y)

    # routes
    routes: dict[str, Route] = {}
    edge_lookup = {e.id: e for e in visible.edges}
    for scope, sl in layouts.items():
        for se in sl.edges:
            edge = edge_lookup[se.edge_id]
            src_box = boxes[se.src_owner]
            dst_box = boxes[se.dst_owner]
            if se.src_port is not None and se.src_port in port_anchors:
                start = port_anchors[se.src_port]
            else:
                start = (src_box.x + src_box.w, src_box.y + src_box.h / 2.0)
            if se.dst_port is not None and se.dst_port in port_anchors:
                end = port_anchors[se.dst_port]
            else:
                end = (dst_box.x, dst_box.y + dst_box.h / 2.0)
            vias = [start] + [dummy_abs[d] for d in se.dummies] + [end]
            points = _orthogonal(vias)
            routes[se.edge_id] = Route(edge_id=se.edge_id, points=points, arcs=_arcs(points, p.arc_radius))

    # attachment badges: constants bottom-left, parameters bottom-right
    badges: dict[str, dict] = {}
    for entry in visible.nodes:
        att = entry.get("attachments")
        if not att:
            continue
        box = boxes[entry["path"]]
        for i, cid in enumerate(att.get("constants", [])):
            badges[cid] = {
                "op": entry["path"],
                "corner": "bottom-left",
                "index": i,
                "point": [round(box.x + 6 + i * 10.0, 2), round(box.y + box.h, 2)],
            }
        for i, pid in enumerate(att.get("parameters", [])):
            badges[pid] = {
                "op": entry["path"],
                "corner": "bottom-right",
                "index": i,
                "point": [round(box.x + box.w - 6 - i * 10.0, 2), round(box.y + box.h, 2)],
            }

    # pile echoes and count badges
    pile_marks: dict[str, dict] = {}
    for pile in visible.piles:
        rep_boxes = [boxes[n] for n in pile.representative.nodes if n in boxes]
        if not rep_boxes:
            continue
        x0 = min(b.x for b in rep_boxes)
        y0 = min(b.y for b in rep_boxes)
        x1 = max(b.x + b.w for b in rep_boxes)
        pile_marks[pile.id] = {
            "repeat": pile.repeat,
            "offset": p.pile_offset,
            "badge": [round(x1, 2), round(y0, 2)],
            "nodes": [n for n in pile.representative.nodes if n in boxes],
        }

    debug = {
        "input_sig": signature,
        "scopes": {
            s: {
                "layers": dict(sl.layer_of),
                "dummies": {e.edge_id: len(e.dummies) for e in sl.edges},
                "feedback": [e.edge_id for e in sl.edges if e.feedback],
            }
            for s, sl in layouts.items()
        },
    }

    correspondence = {}
    if previous is not None:
        correspondence = {k: k for k in previous.boxes.keys() & boxes.keys()}

    result = LayoutResult(
        boxes=boxes,
        port_anchors=port_anchors,
        routes=routes,
        badges=badges,
        pile_marks=pile_marks,
        correspondence=correspondence,
        debug=debug,
    )
    if p.flow == FLOW_TOP_DOWN:
        _transpose(result)
    return result


def stable_relayout(previous: LayoutResult, graph: ProcessedGraph, visible,
                    expanded: set[str], params: LayoutParams | None = None) -> LayoutResult:
    """Relayout seeded by the previous result: surviving nodes keep their
    relative order; the correspondence map carries shared node identities."""
    return layout_graph(graph, visible, expanded, params, previous=previous)


def _orthogonal(vias: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Axis-aligned polyline through the via points (H-V-H between each pair)."""
    pts: list[tuple[float, float]] = [vias[0]]
    for (ax, ay), (bx, by) in zip(vias, vias[1:]):
        if math.isclose(ay, by, abs_tol=1e-9):
            pts.append((bx, by))
            continue
        mx = (ax + bx) / 2.0
        pts.append((mx, ay))
        pts.append((mx, by))
        pts.append((bx, by))
    # collapse repeated/collinear points
    out: list[tuple[float, float]] = []
    for q in pts:
        if out and math.isclose(out[-1][0], q[0], abs_tol=1e-9) and math.isclose(out[-1][1], q[1], abs_tol=1e-9):
            continue
        if len(out) >= 2:
            a, b = out[-2], out[-1]
            if (math.isclose(a[0], b[0], abs_tol=1e-9) and math.isclose(b[0], q[0], abs_tol=1e-9)) or (
                math.isclose(a[1], b[1], abs_tol=1e-9) and math.isclose(b[1], q[1], abs_tol=1e-9)
            ):
                out[-1] = q
                continue
        out.append(q)
    return out


def _arcs(points: list[tuple[float, float]], radius: float) -> list[Arc]:
    arcs: list[Arc] = []
    for i in range(1, len(points) - 1):
        ax, ay = points[i - 1]
        bx, by = points[i]
        cx, cy = points[i + 1]
        v_in = (bx - ax, by - ay)
        v_out = (cx - bx, cy - by)
        len_in = abs(v_in[0]) + abs(v_in[1])
        len_out = abs(v_out[0]) + abs(v_out[1])
        r = min(radius, len_in / 2.0, len_out / 2.0)
        arcs.append(
            Arc(
                x=bx,
                y=by,
                radius=r,
                d_in=(_sign(v_in[0]), _sign(v_in[1])),
                d_out=(_sign(v_out[0]), _sign(v_out[1])),
            )
        )
    return arcs


def _sign(v: float) -> float:
    if v > 1e-9:
        return 1.0
    if v < -1e-9:
        return -1.0
    return 0.0


def _transpose(result: LayoutResult) -> None:
    for box in result.boxes.values():
        box.x, box.y, box.w, box.h = box.y, box.x, box.h, box.w
    result.port_anchors = {k: (y, x) for k, (x, y) in result.port_anchors.items()}
    for route in result.routes.values():
        route.points = [(y, x) for x, y in route.points]
        for arc in route.arcs:
            arc.x, arc.y = arc.y, arc.x
            arc.d_in = (arc.d_in[1], arc.d_in[0])
            arc.d_out = (arc.d_out[1], arc.d_out[0])
