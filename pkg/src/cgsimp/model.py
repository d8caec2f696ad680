"""Core domain types: raw graphs, the namespace hierarchy tree, processed graphs.

Node names are slash-delimited scoped paths ("Main/network_train/softmax/Softmax-op42");
the hierarchy tree is derived purely from those prefixes. Leaves keep their original
path as a stable *source id* even when later transformations (cycle splits, ungroup)
move them to a different position in the tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DanglingEdgeError,
    DataToDataEdgeError,
    DuplicateEdgeError,
    DuplicatePathError,
    NotAMetaNodeError,
    SemanticError,
    UnattachedDataNodeError,
)

ROOT_PATH = "/"
PATH_SEP = "/"


class NodeKind(str, Enum):
    OPERATION = "operation"
    CONSTANT = "constant"
    PARAMETER = "parameter"
    META = "meta"

    @property
    def is_data(self) -> bool:
        return self in (NodeKind.CONSTANT, NodeKind.PARAMETER)

    @property
    def is_leaf(self) -> bool:
        return self is not NodeKind.META


class LayerClass(str, Enum):
    CNN = "CNNLayer"
    RNN = "RNNLayer"
    FC = "FCLayer"
    NORMAL = "NormalLayer"


@dataclass(frozen=True)
class RawNode:
    path: str
    kind: NodeKind
    op_type: str | None = None
    attrs: dict[str, str] = field(default_factory=dict, hash=False)


@dataclass
class RawGraph:
    name: str
    nodes: list[RawNode]
    edges: list[tuple[str, str]]

    def node_map(self) -> dict[str, RawNode]:
        return {n.path: n for n in self.nodes}


_NUM_SPLIT = re.compile(r"(\d+)")
_NUM_PREFIX = re.compile(r"^\d+_")


def natural_key(segment: str) -> tuple:
    """Sort key treating digit runs numerically, so "2_Features" < "10_Features"."""
    return tuple(
        (0, int(part)) if part.isdigit() else (1, part)
        for part in _NUM_SPLIT.split(segment)
        if part
    )


def path_key(path: str) -> tuple:
    return tuple(natural_key(seg) for seg in path.split(PATH_SEP))


def split_path(path: str) -> list[str]:
    if not path or path == ROOT_PATH:
        raise SemanticError(f"invalid node path {path!r}")
    segments = path.split(PATH_SEP)
    if any(not seg for seg in segments):
        raise SemanticError(f"empty segment in node path {path!r}")
    return segments


def base_type_of_segment(segment: str) -> str:
    """Segment with its ordinal prefix stripped: "0_SeqCell" -> "SeqCell"."""
    stripped = _NUM_PREFIX.sub("", segment)
    return stripped or segment


@dataclass
class TreeNode:
    name: str
    path: str
    kind: NodeKind
    op_type: str | None = None
    attrs: dict[str, str] = field(default_factory=dict)
    source_id: str | None = None
    parent: TreeNode | None = field(default=None, repr=False)
    children: list[TreeNode] = field(default_factory=list, repr=False)
    descendant_count: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.kind is not NodeKind.META

    @property
    def is_meta(self) -> bool:
        return self.kind is NodeKind.META

    @property
    def is_root(self) -> bool:
        return self.parent is None

    @property
    def depth(self) -> int:
        depth, node = 0, self
        while node.parent is not None:
            depth += 1
            node = node.parent
        return depth

    def ancestors(self) -> list[TreeNode]:
        """Strict ancestors, innermost first, excluding the root."""
        out: list[TreeNode] = []
        node = self.parent
        while node is not None and node.parent is not None:
            out.append(node)
            node = node.parent
        return out

    def iter_subtree(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[TreeNode]:
        return [n for n in self.iter_subtree() if n.is_leaf]


@dataclass
class Attachment:
    constants: list[str] = field(default_factory=list)
    parameters: list[str] = field(default_factory=list)

    def total(self) -> int:
        return len(self.constants) + len(self.parameters)


@dataclass
class ProcessedGraph:
    """Immutable-after-construction hierarchy + leaf-level op edges + data attachments."""

    name: str
    root: TreeNode
    by_path: dict[str, TreeNode]
    leaf_by_id: dict[str, TreeNode]
    leaf_edges: list[tuple[str, str]]
    attachments: dict[str, Attachment]
    data_kinds: dict[str, NodeKind]

    def node(self, path: str) -> TreeNode:
        return self.by_path[path]

    def resolve(self, path_or_id: str) -> TreeNode | None:
        if path_or_id in self.by_path:
            return self.by_path[path_or_id]
        return self.leaf_by_id.get(path_or_id)

    def op_edges_out(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for src, dst in self.leaf_edges:
            out.setdefault(src, []).append(dst)
        return out

    def op_edges_in(self) -> dict[str, list[str]]:
        inc: dict[str, list[str]] = {}
        for src, dst in self.leaf_edges:
            inc.setdefault(dst, []).append(src)
        return inc


LeafAssignment = tuple[tuple[str, ...], RawNode]


def build_tree(name: str, assignments: list[LeafAssignment]) -> tuple[TreeNode, dict[str, TreeNode], dict[str, TreeNode]]:
    """Build a hierarchy tree from (segments, leaf payload) pairs.

    Shared by initial construction and by tree rewrites (cycle splits, ungroup),
    which only ever reassign leaf segment tuples. Children are ordered by the
    numeric-aware natural key, so identical assignments yield identical trees.
    """
    root = TreeNode(name="", path=ROOT_PATH, kind=NodeKind.META)
    by_path: dict[str, TreeNode] = {ROOT_PATH: root}
    leaf_by_id: dict[str, TreeNode] = {}
    for segments, payload in sorted(assignments, key=lambda a: tuple(natural_key(s) for s in a[0])):
        node = root
        prefix: list[str] = []
        for seg in segments[:-1]:
            prefix.append(seg)
            path = PATH_SEP.join(prefix)
            child = by_path.get(path)
            if child is None:
                child = TreeNode(name=seg, path=path, kind=NodeKind.META, parent=node)
                node.children.append(child)
                by_path[path] = child
            elif child.is_leaf:
                raise DuplicatePathError(f"{path!r} is both a leaf node and a namespace")
            node = child
        leaf_path = PATH_SEP.join(prefix + [segments[-1]])
        if leaf_path in by_path:
            raise DuplicatePathError(f"duplicate node path {leaf_path!r}")
        leaf = TreeNode(
            name=segments[-1],
            path=leaf_path,
            kind=payload.kind,
            op_type=payload.op_type,
            attrs=dict(payload.attrs),
            source_id=payload.path,
            parent=node,
        )
        node.children.append(leaf)
        by_path[leaf_path] = leaf
        leaf_by_id[payload.path] = leaf
    _recount(root)
    return root, by_path, leaf_by_id


def _recount(node: TreeNode) -> int:
    total = 0
    for child in node.children:
        total += 1 + _recount(child)
    node.descendant_count = total
    return total


def build_hierarchy(raw: RawGraph) -> ProcessedGraph:
    """Derive the ProcessedGraph: prefix tree, op->op leaf edges, data-node attachments."""
    seen: set[str] = set()
    kinds: dict[str, NodeKind] = {}
    assignments: list[LeafAssignment] = []
    for rn in raw.nodes:
        if rn.kind is NodeKind.META:
            raise SemanticError(f"raw node {rn.path!r} cannot be a metanode; metanodes are derived")
        if rn.path in seen:
            raise DuplicatePathError(f"duplicate node path {rn.path!r}")
        seen.add(rn.path)
        kinds[rn.path] = rn.kind
        assignments.append((tuple(split_path(rn.path)), rn))

    edge_seen: set[tuple[str, str]] = set()
    op_edges: list[tuple[str, str]] = []
    incident_data: dict[str, list[tuple[str, NodeKind]]] = {}
    for src, dst in raw.edges:
        for end in (src, dst):
            if end not in kinds:
                raise DanglingEdgeError(f"edge endpoint {end!r} is not a node")
        if (src, dst) in edge_seen:
            raise DuplicateEdgeError(f"duplicate edge {src!r} -> {dst!r}")
        edge_seen.add((src, dst))
        sk, dk = kinds[src], kinds[dst]
        if sk.is_data and dk.is_data:
            raise DataToDataEdgeError(f"edge between two data nodes {src!r} -> {dst!r}")
        if sk.is_data:
            if dk is not NodeKind.OPERATION:
                raise SemanticError(f"data node {src!r} must target an operation, not {dst!r}")
            incident_data.setdefault(dst, []).append((src, sk))
        elif dk.is_data:
            incident_data.setdefault(src, []).append((dst, dk))
        else:
            op_edges.append((src, dst))

    root, by_path, leaf_by_id = build_tree(raw.name, assignments)

    attachments: dict[str, Attachment] = {}
    attached: set[str] = set()
    for op_path, data in incident_data.items():
        att = attachments.setdefault(op_path, Attachment())
        for data_path, kind in sorted(data, key=lambda d: path_key(d[0])):
            side = att.constants if kind is NodeKind.CONSTANT else att.parameters
            if data_path not in side:
                side.append(data_path)
            attached.add(data_path)

    data_kinds = {p: k for p, k in kinds.items() if k.is_data}
    for data_path in data_kinds:
        if data_path not in attached:
            raise UnattachedDataNodeError(f"data node {data_path!r} has no operation edge")

    op_edges.sort(key=lambda e: (path_key(e[0]), path_key(e[1])))
    return ProcessedGraph(
        name=raw.name,
        root=root,
        by_path=by_path,
        leaf_by_id=leaf_by_id,
        leaf_edges=op_edges,
        attachments=attachments,
        data_kinds=data_kinds,
    )


def descendants(pg: ProcessedGraph, meta_path: str) -> int:
    """Count of all nodes strictly below the metanode (metanodes included)."""
    node = pg.by_path.get(meta_path)
    if node is None or node.is_leaf:
        raise NotAMetaNodeError(f"{meta_path!r} is not a metanode")
    return node.descendant_count


def rebuild_with_assignments(pg: ProcessedGraph, reassign: dict[str, tuple[str, ...]]) -> ProcessedGraph:
    """New ProcessedGraph with some leaves moved to new segment tuples.

    Leaf source ids, leaf edges, and attachments are untouched; only the grouping
    changes. Used by cycle splitting and ungroup.
    """
    assignments: list[LeafAssignment] = []
    for leaf in pg.root.leaves():
        payload = RawNode(path=leaf.source_id or leaf.path, kind=leaf.kind, op_type=leaf.op_type, attrs=leaf.attrs)
        segments = reassign.get(payload.path, tuple(leaf.path.split(PATH_SEP)))
        assignments.append((segments, payload))
    root, by_path, leaf_by_id = build_tree(pg.name, assignments)
    return ProcessedGraph(
        name=pg.name,
        root=root,
        by_path=by_path,
        leaf_by_id=leaf_by_id,
        leaf_edges=pg.leaf_edges,
        attachments=pg.attachments,
        data_kinds=pg.data_kinds,
    )
