"""Session state and pipeline orchestration.

A session owns one loaded graph, its expansion state, mode options, and the
cached derived artifacts. The visible graph is derived in a fixed order:
optional concept transform, frontier from the expansion state, module-based
edge pruning, then isomorphic stacking per expanded parent.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .concept import CycleReport, build_concept_graph, frontier_rep_map
from .errors import (
    NotAMetaNodeError,
    NotExpandableError,
    UnknownNodeError,
    UnknownPileError,
)
from .model import (
    LayerClass,
    NodeKind,
    ProcessedGraph,
    RawGraph,
    TreeNode,
    build_hierarchy,
    natural_key,
    rebuild_with_assignments,
)
from .pruning import (
    DEFAULT_MODULE_THRESHOLD,
    HIDDEN_EDGE,
    PruneResult,
    VisibleEdge,
    prune_edges,
    recognize_modules,
    reveal_hidden,
)
from .stacking import (
    DEFAULT_MIN_REPEAT,
    Pile,
    StackResult,
    detect_iso_groups,
    scopes_from_visible,
    stack,
)

PATH_LIMIT = 10
_PATH_ENUM_CAP = 60
MIN_QUERY_LEN = 2


@dataclass(frozen=True)
class SessionOptions:
    cgm: bool = False
    stacking: bool = True
    module_threshold: int = DEFAULT_MODULE_THRESHOLD
    min_repeat: int = DEFAULT_MIN_REPEAT

    def __post_init__(self):
        if self.module_threshold < 1:
            raise ValueError("module_threshold must be >= 1")
        if self.min_repeat < 2:
            raise ValueError("min_repeat must be >= 2")


@dataclass
class VisibleGraph:
    nodes: list[dict]
    containers: list[dict]
    edges: list[VisibleEdge]
    ports: list[dict]
    piles: list[Pile]
    stats: dict
    prune: PruneResult = field(repr=False, default=None)
    stacks: dict[str, StackResult] = field(repr=False, default_factory=dict)
    edge_remap: dict[str, str] = field(repr=False, default_factory=dict)
    reps: dict[str, TreeNode] = field(repr=False, default_factory=dict)

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "containers": self.containers,
            "edges": [e.to_json() for e in self.edges],
            "ports": self.ports,
            "piles": [p.to_json() for p in self.piles],
            "stats": self.stats,
        }


def _path_key(path: str) -> tuple:
    return tuple(natural_key(seg) for seg in path.split("/"))


class Session:
    """Single-writer state machine over one loaded graph."""

    def __init__(self, raw: RawGraph, options: SessionOptions | None = None):
        self.options = options or SessionOptions()
        self.base = build_hierarchy(raw)
        self.report: CycleReport | None = None
        self.layer_class: dict[str, LayerClass] = {}
        if self.options.cgm:
            concept = build_concept_graph(self.base)
            self._effective_base = concept.graph
            self.report = concept.report
            self.layer_class = concept.layer_class
        else:
            self._effective_base = self.base
        self.graph: ProcessedGraph = self._effective_base
        self.expanded: set[str] = set()
        self.ungrouped: list[str] = []
        self.revision = 0
        self._visible: VisibleGraph | None = None
        self._visible_json: str | None = None
        self._last_layout = None

    def layout(self, params=None):
        """Layout of the current visible graph, seeded by the previous layout
        so interactive transitions stay stable."""
        from .layout import layout_graph

        visible = self.derive_visible()
        result = layout_graph(self.graph, visible, self.expanded, params, previous=self._last_layout)
        self._last_layout = result
        return result

    # -- expansion state ----------------------------------------------------

    def _meta(self, path: str) -> TreeNode:
        node = self.graph.by_path.get(path)
        if node is None:
            raise UnknownNodeError(f"unknown node {path!r}")
        if not node.is_meta or node.is_root:
            raise NotAMetaNodeError(f"{path!r} is not a metanode")
        return node

    def _bump(self) -> None:
        self.revision += 1
        self._visible = None
        self._visible_json = None

    def expand(self, path: str) -> None:
        node = self._meta(path)
        parent = node.parent
        if parent is not None and not parent.is_root and parent.path not in self.expanded:
            raise NotExpandableError(f"ancestor of {path!r} is collapsed")
        if path not in self.expanded:
            self.expanded.add(path)
            self._bump()

    def collapse(self, path: str) -> None:
        self._meta(path)
        dropped = {p for p in self.expanded if p == path or p.startswith(path + "/")}
        if dropped:
            self.expanded -= dropped
            self._bump()

    def expand_to_depth(self, depth: int) -> None:
        self.expanded = {
            n.path
            for n in self.graph.root.iter_subtree()
            if n.is_meta and not n.is_root and n.depth < depth
        }
        self._bump()

    def ungroup(self, path: str) -> None:
        """Splice the metanode's children into its parent's scope."""
        node = self._meta(path)
        parent = node.parent
        parent_path = "" if parent.is_root else parent.path
        sibling_names = {c.name for c in parent.children if c is not node}
        rename: dict[str, str] = {}
        for child in node.children:
            new_name = child.name
            suffix = 2
            while new_name in sibling_names:
                new_name = f"{child.name}_{suffix}"
                suffix += 1
            sibling_names.add(new_name)
            rename[child.name] = new_name
        reassign: dict[str, tuple[str, ...]] = {}
        strip = len(path.split("/"))
        for leaf in node.leaves():
            segs = leaf.path.split("/")
            new_segs = segs[: strip - 1] + [rename[segs[strip]]] + segs[strip + 1 :]
            reassign[leaf.source_id or leaf.path] = tuple(new_segs)
        self.graph = rebuild_with_assignments(self.graph, reassign)
        self.ungrouped.append(path)
        prefix = path + "/"
        base = parent_path + "/" if parent_path else ""
        remapped = set()
        for p in self.expanded:
            if p == path:
                continue
            if p.startswith(prefix):
                rest = p[len(prefix):].split("/")
                rest[0] = rename[rest[0]]
                remapped.add(base + "/".join(rest))
            else:
                remapped.add(p)
        self.expanded = {p for p in remapped if p in self.graph.by_path and self.graph.by_path[p].is_meta}
        self._bump()

    # -- frontier and derivation --------------------------------------------

    def frontier(self) -> list[TreeNode]:
        self.expanded = {
            p for p in self.expanded if p in self.graph.by_path and self.graph.by_path[p].is_meta
        }
        nodes: list[TreeNode] = []
        for meta_path in sorted(self.expanded | {"/"}, key=_path_key):
            meta = self.graph.by_path[meta_path]
            if meta_path != "/" :
                parent = meta.parent
                ok = True
                while parent is not None and not parent.is_root:
                    if parent.path not in self.expanded:
                        ok = False
                        break
                    parent = parent.parent
                if not ok:
                    continue
            for child in meta.children:
                if child.path not in self.expanded:
                    nodes.append(child)
        return nodes

    def derive_visible(self) -> VisibleGraph:
        if self._visible is not None:
            return self._visible

        pg = self.graph
        frontier = self.frontier()
        reps = frontier_rep_map(pg, frontier)
        info = recognize_modules(pg, self.options.module_threshold)
        prune = prune_edges(pg, reps, info)

        stacks: dict[str, StackResult] = {}
        removed: set[str] = set()
        pile_of_node: dict[str, str] = {}
        piles: list[Pile] = []
        node_map: dict[str, str] = {}
        if self.options.stacking:
            scopes = scopes_from_visible(pg, frontier, prune.edges)
            for parent_path in sorted(scopes, key=_path_key):
                scope = scopes[parent_path]
                groups = detect_iso_groups(pg, scope)
                if not groups:
                    continue
                result = stack(pg, scope, groups, self.options.min_repeat)
                if result.piles:
                    stacks[parent_path] = result
                    removed |= result.removed_nodes
                    pile_of_node.update(result.pile_of_node)
                    piles.extend(result.piles)
                    node_map.update(result.node_map)

        kept_edges: list[VisibleEdge] = []
        dropped_edges: list[VisibleEdge] = []
        for edge in prune.edges:
            if edge.src.node in removed or edge.dst.node in removed:
                dropped_edges.append(edge)
            else:
                kept_edges.append(edge)
        by_key = {(e.kind, e.src.node, e.src.port, e.dst.node, e.dst.port): e.id for e in kept_edges}
        edge_remap: dict[str, str] = {}
        for edge in dropped_edges:
            key = (
                edge.kind,
                node_map.get(edge.src.node, edge.src.node),
                edge.src.port,
                node_map.get(edge.dst.node, edge.dst.node),
                edge.dst.port,
            )
            mapped = by_key.get(key)
            if mapped is not None:
                edge_remap[edge.id] = mapped

        pile_by_id = {p.id: p for p in piles}
        nodes_payload: list[dict] = []
        for node in frontier:
            if node.path in removed or node.kind.is_data:
                continue
            entry: dict = {"path": node.path, "kind": node.kind.value}
            if node.is_leaf:
                entry["id"] = node.source_id or node.path
                if node.op_type:
                    entry["op_type"] = node.op_type
                att = pg.attachments.get(node.source_id or node.path)
                if att and (att.constants or att.parameters):
                    entry["attachments"] = {"constants": list(att.constants), "parameters": list(att.parameters)}
            else:
                entry["descendants"] = node.descendant_count
                if node.path in info.modules:
                    entry["module_level"] = info.module_level[node.path]
            if node.path in self.layer_class:
                entry["layer_class"] = self.layer_class[node.path].value
            pid = pile_of_node.get(node.path)
            if pid is not None:
                pile = pile_by_id[pid]
                entry["pile"] = {"id": pid, "repeat": pile.repeat, "members": list(pile.member_ids)}
            nodes_payload.append(entry)

        containers_payload: list[dict] = []
        for path in sorted(self.expanded, key=_path_key):
            node = pg.by_path[path]
            entry = {"path": path, "kind": "meta", "expanded": True, "descendants": node.descendant_count}
            if path in info.modules:
                entry["module_level"] = info.module_level[path]
            if path in self.layer_class:
                entry["layer_class"] = self.layer_class[path].value
            containers_payload.append(entry)

        visible_owner = {e["path"] for e in nodes_payload} | {c["path"] for c in containers_payload}
        ports_payload = [
            p.to_json() for pid, p in sorted(prune.ports.items()) if p.owner in visible_owner
        ]

        stats = {
            "node_count": len(nodes_payload),
            "edge_count": sum(1 for e in kept_edges if not e.hidden),
        }
        self._visible = VisibleGraph(
            nodes=nodes_payload,
            containers=containers_payload,
            edges=kept_edges,
            ports=ports_payload,
            piles=piles,
            stats=stats,
            prune=prune,
            stacks=stacks,
            edge_remap=edge_remap,
            reps=reps,
        )
        return self._visible

    def visible_json(self) -> str:
        if self._visible_json is None:
            payload = self.derive_visible().to_json()
            payload["revision"] = self.revision
            self._visible_json = json.dumps(payload, indent=1)
        return self._visible_json

    # -- queries -------------------------------------------------------------

    def reveal_hidden(self, pid: str) -> list[str]:
        return reveal_hidden(self.derive_visible().prune, pid)

    def pile_members(self, pile_id: str) -> Pile:
        for pile in self.derive_visible().piles:
            if pile.id == pile_id:
                return pile
        raise UnknownPileError(f"unknown pile {pile_id!r}")

    def _leaf_ops_under(self, path_or_id: str) -> list[str]:
        node = self.graph.resolve(path_or_id)
        if node is None:
            raise UnknownNodeError(f"unknown node {path_or_id!r}")
        leaves = node.leaves() if node.is_meta else [node]
        return [l.source_id or l.path for l in leaves if l.kind is NodeKind.OPERATION]

    def find_path(self, start: str, end: str) -> list[dict]:
        """Directed paths from start to end, decided on leaf edges, rendered as
        visible-edge chains; empty list iff no leaf-level path exists."""
        sources = set(self._leaf_ops_under(start))
        targets = set(self._leaf_ops_under(end))
        if not sources or not targets:
            return []
        if sources & targets:
            node = self.graph.resolve(start)
            rep = self.derive_visible().reps.get(next(iter(sources & targets)))
            return [{"nodes": [rep.path if rep else node.path], "edges": [], "length": 0}]

        out = self.graph.op_edges_out()
        dist: dict[str, int] = {s: 0 for s in sources}
        queue = deque(sorted(sources, key=_path_key))
        found: list[str] = []
        best = None
        while queue:
            u = queue.popleft()
            if best is not None and dist[u] >= best:
                continue
            for v in out.get(u, []):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    if v in targets:
                        if best is None:
                            best = dist[v]
                        found.append(v)
                    queue.append(v)
        if best is None:
            return []

        # enumerate shortest leaf paths over the BFS-distance DAG
        inc = self.graph.op_edges_in()
        leaf_paths: list[list[str]] = []

        def backtrack(node: str, acc: list[str]) -> None:
            if len(leaf_paths) >= _PATH_ENUM_CAP:
                return
            if dist[node] == 0:
                leaf_paths.append(list(reversed(acc + [node])))
                return
            preds = sorted(
                (u for u in inc.get(node, []) if u in dist and dist[u] == dist[node] - 1),
                key=_path_key,
            )
            for u in preds:
                backtrack(u, acc + [node])

        for t in sorted((t for t in found if dist[t] == best), key=_path_key):
            backtrack(t, [])

        visible = self.derive_visible()
        kept_ids = {e.id for e in visible.edges}
        edge_info = {e.id: e for e in visible.edges}
        rendered: dict[tuple, dict] = {}
        for lp in leaf_paths:
            chain: list[str] = []
            nodes_seq: list[str] = []
            ok = True
            for u, v in zip(lp, lp[1:]):
                for eid in visible.prune.chains.get((u, v), []):
                    eid = visible.edge_remap.get(eid, eid)
                    if eid not in kept_ids:
                        ok = False
                        break
                    if not chain or chain[-1] != eid:
                        chain.append(eid)
                if not ok:
                    break
            if not ok:
                continue
            for eid in chain:
                e = edge_info[eid]
                if not nodes_seq:
                    nodes_seq.append(e.src.node)
                if nodes_seq[-1] != e.dst.node:
                    nodes_seq.append(e.dst.node)
            key = tuple(chain)
            if key not in rendered:
                rendered[key] = {"nodes": nodes_seq, "edges": chain, "length": len(chain)}
        ordered = sorted(rendered.values(), key=lambda r: (r["length"], tuple(r["edges"])))
        return ordered[:PATH_LIMIT]

    def search(self, query: str) -> list[dict]:
        if len(query) < MIN_QUERY_LEN:
            return []
        needle = query.lower()
        visible = self.derive_visible()
        visible_paths = {e["path"] for e in visible.nodes} | {c["path"] for c in visible.containers}
        out_deg: dict[str, int] = {}
        in_deg: dict[str, int] = {}
        for s, d in self.graph.leaf_edges:
            out_deg[s] = out_deg.get(s, 0) + 1
            in_deg[d] = in_deg.get(d, 0) + 1
        results = []
        for node in self.graph.root.iter_subtree():
            if node.is_root:
                continue
            hay = node.path.lower()
            sid = (node.source_id or "").lower()
            if needle not in hay and needle not in sid:
                continue
            profile: dict = {
                "kind": node.kind.value,
                "parent": node.parent.path if node.parent and not node.parent.is_root else "/",
            }
            if node.is_leaf:
                nid = node.source_id or node.path
                profile["id"] = nid
                if node.op_type:
                    profile["op_type"] = node.op_type
                if node.attrs:
                    profile["attrs"] = dict(node.attrs)
                profile["in_degree"] = in_deg.get(nid, 0)
                profile["out_degree"] = out_deg.get(nid, 0)
            else:
                profile["descendants"] = node.descendant_count
                if node.path in self.layer_class:
                    profile["layer_class"] = self.layer_class[node.path].value
            profile["visible"] = node.path in visible_paths
            profile["ports"] = [p["id"] for p in visible.ports if p["owner"] == node.path]
            results.append({"path": node.path, "profile": profile})
        results.sort(key=lambda r: _path_key(r["path"]))
        return results

    # -- statistics ----------------------------------------------------------

    def stats_by_depth(self, max_depth: int) -> list[dict]:
        """Per-depth element counts with and without simplification."""
        rows = []
        for depth in range(1, max_depth + 1):
            probe = Session.__new__(Session)
            probe.options = self.options
            probe.base = self.base
            probe.report = self.report
            probe.layer_class = self.layer_class
            probe._effective_base = self._effective_base
            probe.graph = self.graph
            probe.ungrouped = []
            probe.revision = 0
            probe._visible = None
            probe._visible_json = None
            probe.expanded = set()
            probe.expand_to_depth(depth)

            frontier = probe.frontier()
            raw_nodes = sum(1 for n in frontier if not n.kind.is_data) + len(probe.expanded)
            reps = frontier_rep_map(probe.graph, frontier)
            raw_pairs = set()
            for s, d in probe.graph.leaf_edges:
                a, b = reps[s].path, reps[d].path
                if a != b:
                    raw_pairs.add((a, b))
            raw_edges = len(raw_pairs)

            visible = probe.derive_visible()
            vis_nodes = visible.stats["node_count"] + len(visible.containers)
            vis_edges = visible.stats["edge_count"]
            raw_total = raw_nodes + raw_edges
            vis_total = vis_nodes + vis_edges
            reduction = 100.0 * (1.0 - vis_total / raw_total) if raw_total else 0.0
            rows.append(
                {
                    "depth": depth,
                    "raw_nodes": raw_nodes,
                    "raw_edges": raw_edges,
                    "vis_nodes": vis_nodes,
                    "vis_edges": vis_edges,
                    "reduction_pct": round(reduction, 1),
                }
            )
        return rows
