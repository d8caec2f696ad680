"""Module recognition and edge update: slice cross-namespace edges at module
boundaries, assemble them behind leveled ports, and record the hidden interior
tails.

A metanode whose descendant count exceeds the threshold is a module; its level
is its hierarchy depth. Because descendant counts grow strictly upward, module
ancestry is upward-closed, so the outermost module an edge exits is always a
direct child of the endpoints' lowest common ancestor scope.

Per leaf edge u -> v with visible representatives ru, rv:
  - ru == rv: the edge is absorbed inside one visible node.
  - both u and v visible themselves: a concrete NormalEdge ru -> rv, no ports.
  - otherwise the edge is abstract (at least one true endpoint is hidden under
    a collapsed metanode): each side that crosses a module boundary attaches to
    that module's port; the interior tail from the module port to the visible
    representative is a HiddenEdge (invisible until the port is hovered); the
    middle is a ModuleEdge when both sides carry module ports.

Parallel middles with identical endpoints merge, concatenating contributors;
merging across different endpoint pairs (hence across levels) never happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UnknownPortError, UnresolvedEndpointError
from .model import ProcessedGraph, TreeNode

DEFAULT_MODULE_THRESHOLD = 20

MODULE_EDGE = "ModuleEdge"
HIDDEN_EDGE = "HiddenEdge"
NORMAL_EDGE = "NormalEdge"

IN = "in"
OUT = "out"


@dataclass
class ModuleInfo:
    modules: set[str]
    module_level: dict[str, int]

    def is_module(self, path: str) -> bool:
        return path in self.modules


def recognize_modules(pg: ProcessedGraph, threshold: int) -> ModuleInfo:
    """Metanodes with more than `threshold` descendants; level = depth."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    modules: set[str] = set()
    levels: dict[str, int] = {}
    depth_stack: list[tuple[TreeNode, int]] = [(c, 1) for c in pg.root.children]
    while depth_stack:
        node, depth = depth_stack.pop()
        if node.is_meta:
            if node.descendant_count > threshold:
                modules.add(node.path)
                levels[node.path] = depth
            depth_stack.extend((c, depth + 1) for c in node.children)
    return ModuleInfo(modules=modules, module_level=levels)


def port_id(owner: str, side: str, level: int) -> str:
    return f"{side}:{level}:{owner}"


@dataclass
class Port:
    id: str
    owner: str
    side: str
    level: int
    kind: str  # "module" | "nonmodule"
    hidden_edges: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "owner": self.owner,
            "side": self.side,
            "level": self.level,
            "kind": self.kind,
            "hidden_edges": list(self.hidden_edges),
        }


@dataclass(frozen=True)
class Endpoint:
    node: str
    port: str | None = None

    def to_json(self) -> dict:
        out: dict = {"node": self.node}
        if self.port is not None:
            out["port"] = self.port
        return out


@dataclass
class VisibleEdge:
    id: str
    kind: str
    src: Endpoint
    dst: Endpoint
    contributors: list[tuple[str, str]]
    hidden: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "src": self.src.to_json(),
            "dst": self.dst.to_json(),
            "contributors_count": len(self.contributors),
            "hidden": self.hidden,
        }


@dataclass
class PruneResult:
    edges: list[VisibleEdge]
    ports: dict[str, Port]
    absorbed: dict[str, list[tuple[str, str]]]
    chains: dict[tuple[str, str], list[str]]

    def edge_by_id(self) -> dict[str, VisibleEdge]:
        return {e.id: e for e in self.edges}


def _lca(a: TreeNode, b: TreeNode) -> TreeNode:
    da, db = a.depth, b.depth
    while da > db:
        a = a.parent
        da -= 1
    while db > da:
        b = b.parent
        db -= 1
    while a is not b:
        a = a.parent
        b = b.parent
    return a


def _branch_child(lca: TreeNode, node: TreeNode) -> TreeNode:
    """Direct child of lca on node's branch (node itself if it is that child)."""
    cur = node
    while cur.parent is not lca:
        cur = cur.parent
    return cur


class _Pruner:
    def __init__(self, pg: ProcessedGraph, reps: dict[str, TreeNode], info: ModuleInfo):
        self.pg = pg
        self.reps = reps
        self.info = info
        self.merged: dict[tuple, VisibleEdge] = {}
        self.ports: dict[str, Port] = {}
        self.absorbed: dict[str, list[tuple[str, str]]] = {}
        self.chains: dict[tuple[str, str], list[tuple]] = {}

    def port_for(self, owner: TreeNode, side: str, level: int) -> Port:
        kind = "module" if self.info.is_module(owner.path) and level == owner.depth else "nonmodule"
        pid = port_id(owner.path, side, level)
        port = self.ports.get(pid)
        if port is None:
            port = self.ports[pid] = Port(id=pid, owner=owner.path, side=side, level=level, kind=kind)
        return port

    def _merge(self, key: tuple, kind: str, src: Endpoint, dst: Endpoint, leaf_edge: tuple[str, str], hidden: bool) -> tuple:
        edge = self.merged.get(key)
        if edge is None:
            edge = self.merged[key] = VisibleEdge(
                id="", kind=kind, src=src, dst=dst, contributors=[], hidden=hidden
            )
        edge.contributors.append(leaf_edge)
        return key

    def add_leaf_edge(self, leaf_edge: tuple[str, str]) -> None:
        u, v = leaf_edge
        ru, rv = self.reps.get(u), self.reps.get(v)
        if ru is None or rv is None:
            raise UnresolvedEndpointError(f"edge endpoint not under the frontier: {leaf_edge!r}")
        if ru is rv:
            self.absorbed.setdefault(ru.path, []).append(leaf_edge)
            return
        chain: list[tuple] = []
        if ru.is_leaf and rv.is_leaf:
            # both true endpoints visible: concrete edge, no ports
            key = (NORMAL_EDGE, ru.path, None, rv.path, None)
            chain.append(self._merge(key, NORMAL_EDGE, Endpoint(ru.path), Endpoint(rv.path), leaf_edge, False))
            self.chains[leaf_edge] = chain
            return

        lca = _lca(ru, rv)
        src_branch = _branch_child(lca, ru)
        dst_branch = _branch_child(lca, rv)
        ma = src_branch if self.info.is_module(src_branch.path) else None
        mb = dst_branch if self.info.is_module(dst_branch.path) else None

        if ma is not None and ma is not ru:
            # interior tail: representative's port up to the module's out port
            ru_level = ru.depth if self.info.is_module(ru.path) else ma.depth
            src_port = self.port_for(ru, OUT, ru_level)
            ma_port = self.port_for(ma, OUT, ma.depth)
            key = (HIDDEN_EDGE, ru.path, src_port.id, ma.path, ma_port.id)
            chain.append(
                self._merge(
                    key,
                    HIDDEN_EDGE,
                    Endpoint(ru.path, src_port.id),
                    Endpoint(ma.path, ma_port.id),
                    leaf_edge,
                    True,
                )
            )

        mid_src = Endpoint(ma.path, self.port_for(ma, OUT, ma.depth).id) if ma is not None else Endpoint(ru.path)
        mid_dst = Endpoint(mb.path, self.port_for(mb, IN, mb.depth).id) if mb is not None else Endpoint(rv.path)
        mid_kind = MODULE_EDGE if (ma is not None and mb is not None) else NORMAL_EDGE
        key = (mid_kind, mid_src.node, mid_src.port, mid_dst.node, mid_dst.port)
        chain.append(self._merge(key, mid_kind, mid_src, mid_dst, leaf_edge, False))

        if mb is not None and mb is not rv:
            rv_level = rv.depth if self.info.is_module(rv.path) else mb.depth
            mb_port = self.port_for(mb, IN, mb.depth)
            dst_port = self.port_for(rv, IN, rv_level)
            key = (HIDDEN_EDGE, mb.path, mb_port.id, rv.path, dst_port.id)
            chain.append(
                self._merge(
                    key,
                    HIDDEN_EDGE,
                    Endpoint(mb.path, mb_port.id),
                    Endpoint(rv.path, dst_port.id),
                    leaf_edge,
                    True,
                )
            )
        self.chains[leaf_edge] = chain

    def finish(self) -> PruneResult:
        edges: list[VisibleEdge] = []
        key_to_id: dict[tuple, str] = {}
        for i, (key, edge) in enumerate(self.merged.items()):
            edge.id = f"e{i}"
            key_to_id[key] = edge.id
            edges.append(edge)
        for edge in edges:
            if edge.kind == HIDDEN_EDGE:
                for end in (edge.src, edge.dst):
                    if end.port is not None:
                        self.ports[end.port].hidden_edges.append(edge.id)
        chains = {le: [key_to_id[k] for k in keys] for le, keys in self.chains.items()}
        return PruneResult(edges=edges, ports=self.ports, absorbed=self.absorbed, chains=chains)


def prune_edges(pg: ProcessedGraph, reps: dict[str, TreeNode], info: ModuleInfo) -> PruneResult:
    """Represent every leaf edge as one chain of visible edges and ports.

    `reps` maps each leaf source id to its frontier representative (see
    concept.frontier_rep_map). Self-contained edges land in `absorbed`;
    contributors across middles plus absorbed reproduce the leaf edge multiset.
    """
    pruner = _Pruner(pg, reps, info)
    for leaf_edge in pg.leaf_edges:
        pruner.add_leaf_edge(leaf_edge)
    return pruner.finish()


def slice_edge(pg: ProcessedGraph, leaf_edge: tuple[str, str], reps: dict[str, TreeNode], info: ModuleInfo) -> list[VisibleEdge]:
    """Segment decomposition of one leaf edge (at most three segments)."""
    pruner = _Pruner(pg, reps, info)
    pruner.add_leaf_edge(leaf_edge)
    return pruner.finish().edges


def reveal_hidden(result: PruneResult, pid: str) -> list[str]:
    """Hidden-edge ids bound to a port; pure lookup, no state change."""
    port = result.ports.get(pid)
    if port is None:
        raise UnknownPortError(f"unknown port {pid!r}")
    return list(port.hidden_edges)
