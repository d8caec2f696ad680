"""Isomorphic sibling-subgraph detection and stacking.

Candidates live inside one expanded metanode's visible children graph and come
in three shapes: branches between a shared source and target, dangling output
branches of a shared source, and dangling input branches of a shared target.
Candidates are fingerprinted with DJB-based hashes (h_n per node over type,
neighbor types, parent id, degrees, auxiliary-node count; h_e per edge over
"srcType→dstType"; h_g = sums mod P) and grouped only when both the
fingerprint and a structural checksum agree; hash equality alone is never
trusted because P is small.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import NodeKind, ProcessedGraph, TreeNode, base_type_of_segment, natural_key
from .pruning import HIDDEN_EDGE

P = 10000019
_MASK64 = (1 << 64) - 1

CAT_SOURCE_AND_TARGET = 1
CAT_SOURCE_ONLY = 2
CAT_TARGET_ONLY = 3

DEFAULT_MIN_REPEAT = 2


def djb(data: bytes | str) -> int:
    """djb2 fold (h*33 + byte) with 64-bit wraparound."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = 5381
    for b in data:
        h = (h * 33 + b) & _MASK64
    return h


def node_hash(
    node_type: str,
    neighbor_types: list[str],
    parent_id: str,
    indegree: int,
    outdegree: int,
    aux_count: int,
) -> int:
    total = djb(f"t:{node_type}") + djb(f"p:{parent_id}")
    if neighbor_types:
        total += djb("nbr:" + ",".join(sorted(neighbor_types)))
    total += djb(f"in:{indegree}") + djb(f"out:{outdegree}") + djb(f"aux:{aux_count}")
    return total % P


def edge_hash(source_type: str, target_type: str) -> int:
    return djb(f"{source_type}→{target_type}") % P


def subgraph_hash(node_hashes: list[int], edge_hashes: list[int]) -> int:
    return (sum(node_hashes) + sum(edge_hashes)) % P


def visible_node_type(pg: ProcessedGraph, path: str) -> str:
    """Operation type for leaves; ordinal-stripped base segment for metanodes."""
    node = pg.by_path[path]
    if node.is_meta:
        return base_type_of_segment(node.name)
    if node.kind is NodeKind.OPERATION:
        return node.op_type or node.name
    return "Constant" if node.kind is NodeKind.CONSTANT else "Parameter"


def _interior_signature(pg: ProcessedGraph, node: TreeNode) -> tuple:
    """Checksum component guarding against same-named metanodes with different
    interiors (the fingerprint sees only the visible surface)."""
    if node.is_leaf:
        return ()
    ops = sorted(leaf.op_type or "" for leaf in node.leaves() if leaf.kind is NodeKind.OPERATION)
    return (node.descendant_count, tuple(ops))


def aux_count(pg: ProcessedGraph, path: str) -> int:
    node = pg.by_path[path]
    if node.is_leaf:
        att = pg.attachments.get(node.source_id or node.path)
        return att.total() if att else 0
    return 0


@dataclass
class ScopeGraph:
    """Visible children of one expanded metanode plus the edges among them."""

    parent: str
    nodes: list[str]
    out_adj: dict[str, list[str]]
    in_adj: dict[str, list[str]]
    external: set[str]

    def neighbors(self, path: str) -> list[str]:
        return self.out_adj.get(path, []) + self.in_adj.get(path, [])


@dataclass
class Member:
    id: str
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]


@dataclass
class IsoGroup:
    category: int
    source: str | None
    target: str | None
    fingerprint: int
    members: list[Member]

    @property
    def repeat(self) -> int:
        return len(self.members)


@dataclass
class Pile:
    id: str
    repeat: int
    representative: Member
    member_ids: list[str]
    member_nodes: list[list[str]]
    source: str | None
    target: str | None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "repeat": self.repeat,
            "members": list(self.member_ids),
            "member_nodes": [list(m) for m in self.member_nodes],
            "representative": list(self.representative.nodes),
        }


def _path_key(path: str) -> tuple:
    return tuple(natural_key(seg) for seg in path.split("/"))


def _candidate_fingerprint(pg: ProcessedGraph, scope: ScopeGraph, nodes: set[str]) -> tuple[int, tuple]:
    types = {n: visible_node_type(pg, n) for n in nodes}
    node_hashes = []
    internal_edges: list[tuple[str, str]] = []
    for n in sorted(nodes, key=_path_key):
        ins = [m for m in scope.in_adj.get(n, []) if m in nodes]
        outs = [m for m in scope.out_adj.get(n, []) if m in nodes]
        neighbor_types = [types[m] for m in ins + outs]
        # anchors outside the candidate still shape the node's neighborhood
        neighbor_types += [
            visible_node_type(pg, m) for m in scope.neighbors(n) if m not in nodes
        ]
        node_hashes.append(
            node_hash(types[n], neighbor_types, scope.parent, len(ins), len(outs), aux_count(pg, n))
        )
        internal_edges.extend((n, m) for m in outs)
    edge_hashes = [edge_hash(types[a], types[b]) for a, b in internal_edges]
    fingerprint = subgraph_hash(node_hashes, edge_hashes)
    checksum = (
        len(nodes),
        len(internal_edges),
        tuple(sorted(types.values())),
        tuple(sorted(_interior_signature(pg, pg.by_path[n]) for n in nodes)),
    )
    return fingerprint, checksum


def _weak_components(scope: ScopeGraph, excluded: set[str]) -> list[list[str]]:
    seen: set[str] = set()
    components: list[list[str]] = []
    for start in scope.nodes:
        if start in excluded or start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            n = stack.pop()
            comp.append(n)
            for m in scope.neighbors(n):
                if m not in excluded and m not in seen:
                    seen.add(m)
                    stack.append(m)
        components.append(sorted(comp, key=_path_key))
    return components


def _member(nodes: list[str], scope: ScopeGraph) -> Member:
    node_set = set(nodes)
    edges = tuple(
        (a, b)
        for a in nodes
        for b in scope.out_adj.get(a, [])
        if b in node_set
    )
    return Member(id=nodes[0], nodes=tuple(nodes), edges=edges)


def detect_iso_groups(pg: ProcessedGraph, scope: ScopeGraph) -> list[IsoGroup]:
    """Isomorphic candidate groups inside one scope, category 1 first."""
    claimed: set[str] = set()
    groups: list[IsoGroup] = []

    def try_group(category: int, source: str | None, target: str | None, comps: list[list[str]]) -> None:
        buckets: dict[tuple, list[list[str]]] = {}
        for comp in comps:
            if any(n in claimed for n in comp):
                continue
            fingerprint, checksum = _candidate_fingerprint(pg, scope, set(comp))
            buckets.setdefault((fingerprint, checksum), []).append(comp)
        for (fingerprint, _), comps_alike in sorted(buckets.items(), key=lambda kv: _path_key(kv[1][0][0])):
            if len(comps_alike) < 2:
                continue
            members = [_member(c, scope) for c in sorted(comps_alike, key=lambda c: _path_key(c[0]))]
            for m in members:
                claimed.update(m.nodes)
            groups.append(IsoGroup(category=category, source=source, target=target, fingerprint=fingerprint, members=members))

    ordered = sorted(scope.nodes, key=_path_key)
    type_of = {n: visible_node_type(pg, n) for n in scope.nodes}

    def has_dup(paths: list[str]) -> bool:
        seen_types: set[str] = set()
        for p in paths:
            t = type_of[p]
            if t in seen_types:
                return True
            seen_types.add(t)
        return False

    sources = [s for s in ordered if has_dup(scope.out_adj.get(s, []))]
    targets = [t for t in ordered if has_dup(scope.in_adj.get(t, []))]

    # category 1: branches between a shared source and a shared target
    for s in sources:
        for t in targets:
            if s == t:
                continue
            comps = []
            for comp in _weak_components(scope, {s, t}):
                node_set = set(comp)
                if any(n in scope.external for n in comp):
                    continue
                from_s = to_t = False
                ok = True
                for n in comp:
                    for m in scope.in_adj.get(n, []):
                        if m == s:
                            from_s = True
                        elif m not in node_set:
                            ok = False
                    for m in scope.out_adj.get(n, []):
                        if m == t:
                            to_t = True
                        elif m not in node_set:
                            ok = False
                if ok and from_s and to_t:
                    comps.append(comp)
            if comps:
                try_group(CAT_SOURCE_AND_TARGET, s, t, comps)

    # category 2: branches hanging off a shared source, no target
    for s in sources:
        comps = []
        for comp in _weak_components(scope, {s}):
            node_set = set(comp)
            if any(n in scope.external for n in comp):
                continue
            from_s = False
            ok = True
            for n in comp:
                for m in scope.in_adj.get(n, []):
                    if m == s:
                        from_s = True
                    elif m not in node_set:
                        ok = False
                for m in scope.out_adj.get(n, []):
                    if m not in node_set:
                        ok = False
            if ok and from_s:
                comps.append(comp)
        if comps:
            try_group(CAT_SOURCE_ONLY, s, None, comps)

    # category 3: branches feeding a shared target, no source
    for t in targets:
        comps = []
        for comp in _weak_components(scope, {t}):
            node_set = set(comp)
            if any(n in scope.external for n in comp):
                continue
            to_t = False
            ok = True
            for n in comp:
                for m in scope.out_adj.get(n, []):
                    if m == t:
                        to_t = True
                    elif m not in node_set:
                        ok = False
                for m in scope.in_adj.get(n, []):
                    if m not in node_set:
                        ok = False
            if ok and to_t:
                comps.append(comp)
        if comps:
            try_group(CAT_TARGET_ONLY, t, None, comps)

    return groups


def scopes_from_visible(pg: ProcessedGraph, frontier: list[TreeNode], visible_edges) -> dict[str, ScopeGraph]:
    """One ScopeGraph per expanded parent, from the pruned visible edges.

    Scope edges are the non-hidden middles whose two endpoint owners are
    children of the same parent. Nodes with any connection outside their scope
    (cross-scope middles or hidden tails to an enclosing module port) are
    marked external: they may anchor a group but never join one.
    """
    parent_of: dict[str, str] = {}
    children: dict[str, list[str]] = {}
    for node in frontier:
        parent_path = node.parent.path if node.parent is not None else "/"
        parent_of[node.path] = parent_path
        children.setdefault(parent_path, []).append(node.path)

    out_adj: dict[str, dict[str, set[str]]] = {}
    in_adj: dict[str, dict[str, set[str]]] = {}
    external: dict[str, set[str]] = {}
    for edge in visible_edges:
        a, b = edge.src.node, edge.dst.node
        pa, pb = parent_of.get(a), parent_of.get(b)
        if edge.kind != HIDDEN_EDGE and pa is not None and pa == pb and a != b:
            scope = out_adj.setdefault(pa, {})
            scope.setdefault(a, set()).add(b)
            in_adj.setdefault(pa, {}).setdefault(b, set()).add(a)
        else:
            # hidden tails and cross-scope edges pin their frontier endpoints
            for end, p in ((a, pa), (b, pb)):
                if p is not None:
                    external.setdefault(p, set()).add(end)

    scopes: dict[str, ScopeGraph] = {}
    for parent_path, paths in children.items():
        scopes[parent_path] = ScopeGraph(
            parent=parent_path,
            nodes=sorted(paths, key=_path_key),
            out_adj={k: sorted(v, key=_path_key) for k, v in sorted(out_adj.get(parent_path, {}).items())},
            in_adj={k: sorted(v, key=_path_key) for k, v in sorted(in_adj.get(parent_path, {}).items())},
            external=external.get(parent_path, set()),
        )
    return scopes


@dataclass
class StackResult:
    piles: list[Pile]
    removed_nodes: set[str]
    pile_of_node: dict[str, str] = field(default_factory=dict)
    node_map: dict[str, str] = field(default_factory=dict)

    def pile_by_id(self) -> dict[str, Pile]:
        return {p.id: p for p in self.piles}


def _canonical_order(pg: ProcessedGraph, scope: ScopeGraph, member: Member) -> list[str]:
    node_set = set(member.nodes)
    def key(n: str) -> tuple:
        ins = sum(1 for m in scope.in_adj.get(n, []) if m in node_set)
        outs = sum(1 for m in scope.out_adj.get(n, []) if m in node_set)
        return (visible_node_type(pg, n), ins, outs, _path_key(n))
    return sorted(member.nodes, key=key)


def stack(pg: ProcessedGraph, scope: ScopeGraph, groups: list[IsoGroup], min_repeat: int = DEFAULT_MIN_REPEAT) -> StackResult:
    """Replace every group of >= min_repeat members by a pile: the first member
    stays as the representative, the rest disappear; node_map sends removed
    nodes to their representative counterparts."""
    piles: list[Pile] = []
    removed: set[str] = set()
    pile_of_node: dict[str, str] = {}
    node_map: dict[str, str] = {}
    for group in groups:
        if group.repeat < min_repeat:
            continue
        rep = group.members[0]
        pile = Pile(
            id=f"pile:{rep.id}",
            repeat=group.repeat,
            representative=rep,
            member_ids=[m.id for m in group.members],
            member_nodes=[list(m.nodes) for m in group.members],
            source=group.source,
            target=group.target,
        )
        piles.append(pile)
        rep_order = _canonical_order(pg, scope, rep)
        for node in rep.nodes:
            pile_of_node[node] = pile.id
            node_map[node] = node
        for other in group.members[1:]:
            removed.update(other.nodes)
            other_order = _canonical_order(pg, scope, other)
            for a, b in zip(other_order, rep_order):
                node_map[a] = b
    return StackResult(piles=piles, removed_nodes=removed, pile_of_node=pile_of_node, node_map=node_map)
