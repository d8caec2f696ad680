"""GraphFile parsing/emission and synthetic corpus generation.

The on-disk format is UTF-8 JSON:

    {
      "format_version": "1",
      "name": "lenet",
      "nodes": [{"name": "backbone/Conv1/Conv2D-op207", "kind": "operation",
                 "op_type": "Conv2D", "attrs": {"precision": "FP16"}}, ...],
      "edges": [{"src": "...", "dst": "..."}, ...]
    }

Emission is canonical (nodes sorted by path, edges by (src, dst), fixed field
order, 2-space indent) so emit is byte-stable and parse(emit(g)) == g.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import GraphSyntaxError, InvalidSpecError, SchemaError
from .model import NodeKind, RawGraph, RawNode, path_key

FORMAT_VERSION = "1"

_TOP_FIELDS = {"format_version", "name", "nodes", "edges"}
_NODE_FIELDS = {"name", "kind", "op_type", "attrs"}
_EDGE_FIELDS = {"src", "dst"}
_KINDS = {"operation": NodeKind.OPERATION, "constant": NodeKind.CONSTANT, "parameter": NodeKind.PARAMETER}


def parse_graph_file(data: bytes | str) -> RawGraph:
    """Parse and validate a GraphFile document into a RawGraph."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphSyntaxError(exc.msg, exc.lineno, exc.colno) from exc

    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise SchemaError(sorted(unknown)[0], "unknown top-level field")
    if doc.get("format_version") != FORMAT_VERSION:
        raise SchemaError("format_version", f"expected {FORMAT_VERSION!r}")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise SchemaError("name", "must be a non-empty string")

    nodes_raw = doc.get("nodes")
    if not isinstance(nodes_raw, list):
        raise SchemaError("nodes", "must be an array")
    nodes: list[RawNode] = []
    for i, item in enumerate(nodes_raw):
        where = f"nodes[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(where, "must be an object")
        if set(item) - _NODE_FIELDS:
            raise SchemaError(where, f"unknown field {sorted(set(item) - _NODE_FIELDS)[0]!r}")
        node_name = item.get("name")
        if not isinstance(node_name, str) or not node_name:
            raise SchemaError(f"{where}.name", "must be a non-empty string")
        kind_str = item.get("kind")
        if kind_str not in _KINDS:
            raise SchemaError(f"{where}.kind", f"must be one of {sorted(_KINDS)}")
        kind = _KINDS[kind_str]
        op_type = item.get("op_type")
        if kind is NodeKind.OPERATION:
            if not isinstance(op_type, str) or not op_type:
                raise SchemaError("op_type", f"required for operation node {node_name!r}")
        elif op_type is not None:
            raise SchemaError("op_type", f"not allowed on {kind_str} node {node_name!r}")
        attrs = item.get("attrs", {})
        if not isinstance(attrs, dict) or any(
            not isinstance(k, str) or not isinstance(v, str) for k, v in attrs.items()
        ):
            raise SchemaError(f"{where}.attrs", "must be a string-to-string map")
        nodes.append(RawNode(path=node_name, kind=kind, op_type=op_type, attrs=dict(attrs)))

    edges_raw = doc.get("edges")
    if not isinstance(edges_raw, list):
        raise SchemaError("edges", "must be an array")
    edges: list[tuple[str, str]] = []
    for i, item in enumerate(edges_raw):
        where = f"edges[{i}]"
        if not isinstance(item, dict) or set(item) != _EDGE_FIELDS:
            raise SchemaError(where, "must be an object with exactly src and dst")
        src, dst = item["src"], item["dst"]
        if not isinstance(src, str) or not isinstance(dst, str):
            raise SchemaError(where, "src and dst must be strings")
        edges.append((src, dst))

    return RawGraph(name=name, nodes=nodes, edges=edges)


def emit_graph_file(raw: RawGraph) -> bytes:
    """Serialize a RawGraph canonically; two emits of equal graphs are byte-identical."""
    nodes = []
    for n in sorted(raw.nodes, key=lambda n: path_key(n.path)):
        item: dict[str, object] = {"name": n.path, "kind": n.kind.value}
        if n.op_type is not None:
            item["op_type"] = n.op_type
        if n.attrs:
            item["attrs"] = {k: n.attrs[k] for k in sorted(n.attrs)}
        nodes.append(item)
    edges = [
        {"src": s, "dst": d}
        for s, d in sorted(raw.edges, key=lambda e: (path_key(e[0]), path_key(e[1])))
    ]
    doc = {"format_version": FORMAT_VERSION, "name": raw.name, "nodes": nodes, "edges": edges}
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


@dataclass(frozen=True)
class BlockSpec:
    """Template subgraph duplicated by generate_synthetic.

    ops are (local name, op_type); edges reference local names; input/output name
    the block's entry and exit operations.
    """

    ops: tuple[tuple[str, str], ...]
    edges: tuple[tuple[str, str], ...]
    input: str
    output: str

    def validate(self) -> None:
        names = {n for n, _ in self.ops}
        if len(names) != len(self.ops):
            raise InvalidSpecError("duplicate op names in block")
        if self.input not in names or self.output not in names:
            raise InvalidSpecError("block input/output must be block ops")
        for s, d in self.edges:
            if s not in names or d not in names:
                raise InvalidSpecError(f"block edge references unknown op {s!r}->{d!r}")


WIRINGS = ("chain", "parallel-same-endpoints", "fan-out", "fan-in")


@dataclass(frozen=True)
class SyntheticSpec:
    block: BlockSpec
    repeats: int
    wiring: str
    depth: int = 1
    name: str = "synthetic"
    group: str = "blocks"

    def block_namespace(self, index: int) -> str:
        segs = [self.group] * max(self.depth - 1, 0) + [f"{index}_{self.group}"]
        return "/".join(segs)


def chain_block(length: int = 3, op_type: str = "Conv2D") -> BlockSpec:
    ops = tuple((f"n{i}", op_type if i % 2 == 0 else "ReLU") for i in range(length))
    edges = tuple((f"n{i}", f"n{i+1}") for i in range(length - 1))
    return BlockSpec(ops=ops, edges=edges, input="n0", output=f"n{length-1}")


def generate_synthetic(spec: SyntheticSpec) -> RawGraph:
    """k structurally identical block copies wired per spec, plus endpoint ops."""
    if spec.repeats < 1:
        raise InvalidSpecError("repeats must be >= 1")
    if spec.wiring not in WIRINGS:
        raise InvalidSpecError(f"wiring must be one of {WIRINGS}")
    if spec.depth < 1:
        raise InvalidSpecError("depth must be >= 1")
    spec.block.validate()

    nodes: list[RawNode] = []
    edges: list[tuple[str, str]] = []
    entries: list[str] = []
    exits: list[str] = []
    for i in range(spec.repeats):
        ns = spec.block_namespace(i)
        for local, op_type in spec.block.ops:
            nodes.append(RawNode(path=f"{ns}/{local}", kind=NodeKind.OPERATION, op_type=op_type))
        for s, d in spec.block.edges:
            edges.append((f"{ns}/{s}", f"{ns}/{d}"))
        entries.append(f"{ns}/{spec.block.input}")
        exits.append(f"{ns}/{spec.block.output}")

    def endpoint(name: str, op_type: str) -> str:
        path = f"{name}/{op_type}-op0"
        nodes.append(RawNode(path=path, kind=NodeKind.OPERATION, op_type=op_type))
        return path

    if spec.wiring == "chain":
        source = endpoint("input", "Source")
        sink = endpoint("output", "Sink")
        edges.append((source, entries[0]))
        for i in range(spec.repeats - 1):
            edges.append((exits[i], entries[i + 1]))
        edges.append((exits[-1], sink))
    elif spec.wiring == "parallel-same-endpoints":
        source = endpoint("input", "Source")
        sink = endpoint("output", "Sink")
        for i in range(spec.repeats):
            edges.append((source, entries[i]))
            edges.append((exits[i], sink))
    elif spec.wiring == "fan-out":
        source = endpoint("input", "Source")
        for i in range(spec.repeats):
            edges.append((source, entries[i]))
    else:  # fan-in
        sink = endpoint("output", "Sink")
        for i in range(spec.repeats):
            edges.append((exits[i], sink))

    return RawGraph(name=spec.name, nodes=nodes, edges=edges)
