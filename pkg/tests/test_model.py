from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgsimp import fixtures
from cgsimp.errors import (
    DanglingEdgeError,
    DataToDataEdgeError,
    DuplicateEdgeError,
    DuplicatePathError,
    NotAMetaNodeError,
    UnattachedDataNodeError,
)
from cgsimp.model import (
    NodeKind,
    RawGraph,
    RawNode,
    build_hierarchy,
    descendants,
    natural_key,
)


def op(path, op_type="Op"):
    return RawNode(path=path, kind=NodeKind.OPERATION, op_type=op_type)


def test_prefix_grouping():
    raw = RawGraph(
        name="g",
        nodes=[op("A/x"), op("A/y"), op("B/z")],
        edges=[("A/x", "B/z")],
    )
    pg = build_hierarchy(raw)
    assert descendants(pg, "A") == 2
    assert descendants(pg, "B") == 1
    assert pg.leaf_edges == [("A/x", "B/z")]


def test_attachment_rule():
    raw = RawGraph(
        name="g",
        nodes=[op("M/op1"), RawNode(path="M/c1", kind=NodeKind.CONSTANT)],
        edges=[("M/c1", "M/op1")],
    )
    pg = build_hierarchy(raw)
    assert pg.attachments["M/op1"].constants == ["M/c1"]
    assert pg.attachments["M/op1"].parameters == []
    assert pg.leaf_edges == []


def test_data_to_data_edge_rejected():
    raw = RawGraph(
        name="g",
        nodes=[
            RawNode(path="M/c1", kind=NodeKind.CONSTANT),
            RawNode(path="M/c2", kind=NodeKind.CONSTANT),
            op("M/op1"),
        ],
        edges=[("M/c1", "M/c2"), ("M/c2", "M/op1")],
    )
    with pytest.raises(DataToDataEdgeError):
        build_hierarchy(raw)


def test_duplicate_path_rejected():
    with pytest.raises(DuplicatePathError):
        build_hierarchy(RawGraph(name="g", nodes=[op("A/x"), op("A/x")], edges=[]))


def test_path_also_namespace_rejected():
    with pytest.raises(DuplicatePathError):
        build_hierarchy(RawGraph(name="g", nodes=[op("A"), op("A/x")], edges=[]))


def test_dangling_edge_rejected():
    with pytest.raises(DanglingEdgeError):
        build_hierarchy(RawGraph(name="g", nodes=[op("A/x")], edges=[("A/x", "A/y")]))


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateEdgeError):
        build_hierarchy(
            RawGraph(name="g", nodes=[op("A/x"), op("A/y")], edges=[("A/x", "A/y"), ("A/x", "A/y")])
        )


def test_unattached_data_node_rejected():
    with pytest.raises(UnattachedDataNodeError):
        build_hierarchy(
            RawGraph(name="g", nodes=[op("A/x"), RawNode(path="A/c", kind=NodeKind.CONSTANT)], edges=[])
        )


def test_descendants_counts_metanodes():
    raw = RawGraph(name="g", nodes=[op("A/B/x"), op("A/B/y"), op("A/z")], edges=[])
    pg = build_hierarchy(raw)
    assert descendants(pg, "A") == 4  # B, x, y, z
    assert descendants(pg, "/") == 5  # A too


def test_descendants_root_of_n_node_tree():
    raw = RawGraph(name="g", nodes=[op(f"G/x{i}") for i in range(5)], edges=[])
    pg = build_hierarchy(raw)
    total_nodes = sum(1 for _ in pg.root.iter_subtree())
    assert descendants(pg, "/") == total_nodes - 1


def test_descendants_rejects_leaf():
    pg = build_hierarchy(RawGraph(name="g", nodes=[op("A/x")], edges=[]))
    with pytest.raises(NotAMetaNodeError):
        descendants(pg, "A/x")


def test_natural_child_ordering():
    raw = RawGraph(name="g", nodes=[op("M/10_Features/a"), op("M/2_Features/a")], edges=[])
    pg = build_hierarchy(raw)
    names = [c.name for c in pg.node("M").children]
    assert names == ["2_Features", "10_Features"]
    assert natural_key("2_Features") < natural_key("10_Features")


def test_leaf_roundtrip_and_descendant_recurrence():
    pg = build_hierarchy(fixtures.bert_like())
    leaf_ids = {leaf.source_id for leaf in pg.root.leaves()}
    assert leaf_ids == {n.path for n in fixtures.bert_like().nodes}
    for node in pg.root.iter_subtree():
        if node.is_meta:
            assert node.descendant_count == sum(1 + c.descendant_count for c in node.children)
        else:
            assert node.descendant_count == 0


def test_attachment_totality():
    pg = build_hierarchy(fixtures.lenet())
    attached = set()
    for att in pg.attachments.values():
        attached.update(att.constants)
        attached.update(att.parameters)
    assert attached == set(pg.data_kinds)


def test_build_is_deterministic():
    a = build_hierarchy(fixtures.bert_like())
    b = build_hierarchy(fixtures.bert_like())

    def shape(node):
        return (node.path, node.kind.value, [shape(c) for c in node.children])

    assert shape(a.root) == shape(b.root)
    assert a.leaf_edges == b.leaf_edges


@st.composite
def raw_graphs(draw):
    n = draw(st.integers(min_value=1, max_value=24))
    depth_choices = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    groups = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    nodes = []
    for i, (d, g) in enumerate(zip(depth_choices, groups)):
        segs = [f"g{g}"] * (d - 1) + [f"op{i}"]
        nodes.append(op("/".join(segs)))
    n_edges = draw(st.integers(0, min(3 * n, 40)))
    edges = set()
    for _ in range(n_edges):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i != j:
            edges.add((nodes[i].path, nodes[j].path))
    return RawGraph(name="prop", nodes=nodes, edges=sorted(edges))


@settings(max_examples=60, deadline=None)
@given(raw_graphs())
def test_property_roundtrip_and_counts(raw):
    pg = build_hierarchy(raw)
    assert {leaf.source_id for leaf in pg.root.leaves()} == {n.path for n in raw.nodes}
    for node in pg.root.iter_subtree():
        if node.is_meta:
            assert node.descendant_count == sum(1 + c.descendant_count for c in node.children)
