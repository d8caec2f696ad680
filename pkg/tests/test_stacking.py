from __future__ import annotations

import random

import networkx as nx

from cgsimp import fixtures
from cgsimp.concept import frontier_rep_map
from cgsimp.model import NodeKind, RawGraph, RawNode, build_hierarchy
from cgsimp.pruning import prune_edges, recognize_modules
from cgsimp.stacking import (
    CAT_SOURCE_AND_TARGET,
    CAT_SOURCE_ONLY,
    P,
    detect_iso_groups,
    djb,
    edge_hash,
    node_hash,
    scopes_from_visible,
    stack,
    subgraph_hash,
    visible_node_type,
)


def op(path, op_type="Op"):
    return RawNode(path=path, kind=NodeKind.OPERATION, op_type=op_type)


def frontier_for(pg, expanded):
    nodes = []
    for meta_path in set(expanded) | {"/"}:
        for child in pg.by_path[meta_path].children:
            if child.path not in expanded:
                nodes.append(child)
    return nodes


def scope_of(raw, expanded, parent, threshold=1000):
    pg = build_hierarchy(raw)
    frontier = frontier_for(pg, expanded)
    reps = frontier_rep_map(pg, frontier)
    result = prune_edges(pg, reps, recognize_modules(pg, threshold))
    scopes = scopes_from_visible(pg, frontier, result.edges)
    return pg, scopes[parent]


# Frozen oracle values: direct evaluation of h = 5381; h <- h*33 + byte (mod 2^64).
def test_djb_frozen_values():
    assert djb("") == 5381
    assert djb("a") == 177670  # 5381*33 + 97
    assert djb("ab") == 5863208  # 177670*33 + 98
    assert djb(b"ab") == djb("ab")


def test_node_hash_composition():
    expected = (djb("t:ReLU") + djb("p:M") + djb("in:0") + djb("out:0") + djb("aux:0")) % P
    assert node_hash("ReLU", [], "M", 0, 0, 0) == expected == 5942044
    # equality is a pure function of the component strings
    assert node_hash("ReLU", [], "M", 0, 0, 0) == node_hash("ReLU", [], "M", 0, 0, 0)
    # one attached data node changes the aux string, hence the hash
    assert node_hash("ReLU", [], "M", 0, 0, 1) == 5942045
    assert node_hash("ReLU", [], "M", 0, 0, 1) != node_hash("ReLU", [], "M", 0, 0, 0)


def test_neighbor_types_sorted_into_single_string():
    a = node_hash("Add", ["Mul", "Conv2D"], "M", 1, 1, 0)
    b = node_hash("Add", ["Conv2D", "Mul"], "M", 1, 1, 0)
    assert a == b
    expected = (
        djb("t:Add") + djb("p:M") + djb("nbr:Conv2D,Mul") + djb("in:1") + djb("out:1") + djb("aux:0")
    ) % P
    assert a == expected


def test_edge_hash_direction_and_frozen_values():
    assert edge_hash("Conv2D", "ReLU") == 3582150
    assert edge_hash("ReLU", "Conv2D") == 7781955
    assert edge_hash("ReLU", "ReLU") == edge_hash("ReLU", "ReLU")


def test_subgraph_hash_order_invariance():
    ns = [5942044, 123, 999999]
    es = [3582150, 42]
    assert subgraph_hash(ns, es) == subgraph_hash(list(reversed(ns)), list(reversed(es)))
    assert subgraph_hash([], []) == 0


def test_metanode_type_strips_ordinal_prefix():
    raw = RawGraph(
        name="g",
        nodes=[op("m/0_SeqCell/x"), op("m/1_SeqCell/y")],
        edges=[],
    )
    pg = build_hierarchy(raw)
    assert visible_node_type(pg, "m/0_SeqCell") == "SeqCell"
    assert visible_node_type(pg, "m/1_SeqCell") == "SeqCell"


def test_iso_branches_groups_two_and_three():
    raw = fixtures.iso_branches()
    pg, scope = scope_of(raw, {"block"}, "block")
    groups = detect_iso_groups(pg, scope)
    assert [g.category for g in groups] == [CAT_SOURCE_AND_TARGET, CAT_SOURCE_AND_TARGET]
    sizes = sorted(g.repeat for g in groups)
    assert sizes == [2, 3]
    grouped = {n for g in groups for m in g.members for n in m.nodes}
    assert "block/odd/Sub" not in grouped
    for g in groups:
        assert g.source == "block/A"
        assert g.target == "block/B"


def test_all_distinct_types_no_groups():
    raw = RawGraph(
        name="g",
        nodes=[op("m/a", "A"), op("m/b", "B"), op("m/c", "C"), op("m/d", "D")],
        edges=[("m/a", "m/b"), ("m/a", "m/c"), ("m/b", "m/d"), ("m/c", "m/d")],
    )
    pg, scope = scope_of(raw, {"m"}, "m")
    assert detect_iso_groups(pg, scope) == []


def test_five_dangling_chains_category_two():
    nodes = [op("m/src", "Split")]
    edges = []
    for i in range(5):
        nodes += [op(f"m/{i}_tail/Mul", "Mul"), op(f"m/{i}_tail/Add", "Add")]
        edges += [("m/src", f"m/{i}_tail/Mul"), (f"m/{i}_tail/Mul", f"m/{i}_tail/Add")]
    raw = RawGraph(name="g", nodes=nodes, edges=edges)
    pg, scope = scope_of(raw, {"m"}, "m")
    groups = detect_iso_groups(pg, scope)
    assert len(groups) == 1
    assert groups[0].category == CAT_SOURCE_ONLY
    assert groups[0].repeat == 5
    # brute-force isomorphism oracle: all members pairwise isomorphic
    _assert_members_isomorphic(pg, scope, groups[0])


def _member_digraph(pg, member):
    g = nx.DiGraph()
    for n in member.nodes:
        g.add_node(n, t=visible_node_type(pg, n))
    g.add_edges_from(member.edges)
    return g


def _assert_members_isomorphic(pg, scope, group):
    rep = _member_digraph(pg, group.members[0])
    for other in group.members[1:]:
        g2 = _member_digraph(pg, other)
        matcher = nx.algorithms.isomorphism.DiGraphMatcher(
            rep, g2, node_match=lambda a, b: a["t"] == b["t"]
        )
        assert matcher.is_isomorphic()


def test_groups_agree_with_vf2_oracle_on_fixtures():
    cases = [
        (fixtures.iso_branches(), {"block"}, "block"),
        (fixtures.resnet_like((4, 3, 5, 2)), {"net", "net/1_stage", "net/2_stage", "net/3_stage", "net/4_stage"}, "net/1_stage"),
    ]
    for raw, expanded, parent in cases:
        pg, scope = scope_of(raw, expanded, parent)
        for group in detect_iso_groups(pg, scope):
            if all(len(m.nodes) <= 8 for m in group.members):
                _assert_members_isomorphic(pg, scope, group)


def test_no_false_merges_on_lookalike_metanodes():
    # same basename, same surface, different interiors: must NOT group
    nodes = [op("m/src", "Split"), op("m/dst", "Concat")]
    nodes += [op("m/0_cell/Conv2D", "Conv2D"), op("m/0_cell/ReLU", "ReLU")]
    nodes += [op("m/1_cell/MatMul", "MatMul"), op("m/1_cell/Softmax", "Softmax")]
    edges = [
        ("m/src", "m/0_cell/Conv2D"), ("m/0_cell/Conv2D", "m/0_cell/ReLU"), ("m/0_cell/ReLU", "m/dst"),
        ("m/src", "m/1_cell/MatMul"), ("m/1_cell/MatMul", "m/1_cell/Softmax"), ("m/1_cell/Softmax", "m/dst"),
    ]
    raw = RawGraph(name="g", nodes=nodes, edges=edges)
    pg, scope = scope_of(raw, {"m"}, "m")  # cells stay collapsed
    groups = detect_iso_groups(pg, scope)
    assert groups == []


def test_resnet_stage_blocks_form_one_pile_family():
    raw = fixtures.resnet_like((6, 4, 3, 2))
    expanded = {"net", "net/1_stage"}
    pg, scope = scope_of(raw, expanded, "net/1_stage")
    groups = detect_iso_groups(pg, scope)
    assert len(groups) == 1
    assert groups[0].repeat == 6
    assert groups[0].category == CAT_SOURCE_AND_TARGET


def test_stack_piles_and_thresholds():
    raw = fixtures.iso_branches()
    pg, scope = scope_of(raw, {"block"}, "block")
    groups = detect_iso_groups(pg, scope)
    result = stack(pg, scope, groups, min_repeat=2)
    assert sorted(p.repeat for p in result.piles) == [2, 3]
    # min_repeat above the group sizes stacks nothing
    untouched = stack(pg, scope, groups, min_repeat=4)
    assert untouched.piles == [] and untouched.removed_nodes == set()


def test_stack_conservation():
    raw = fixtures.iso_branches()
    pg, scope = scope_of(raw, {"block"}, "block")
    groups = detect_iso_groups(pg, scope)
    result = stack(pg, scope, groups, min_repeat=2)
    pre_nodes = len(scope.nodes)
    visible_after = [n for n in scope.nodes if n not in result.removed_nodes]
    stacked_total = 0
    for pile in result.piles:
        member_size = len(pile.representative.nodes)
        assert all(len(m) == member_size for m in pile.member_nodes)
        stacked_total += pile.repeat * member_size
    unstacked = len([n for n in visible_after if n not in result.pile_of_node])
    assert stacked_total + unstacked == pre_nodes
    # node_map sends every removed node onto a surviving representative node
    for removed in result.removed_nodes:
        assert result.node_map[removed] not in result.removed_nodes


def test_determinism_across_runs():
    raw = fixtures.resnet_like((5, 3, 2, 2))
    expanded = {"net", "net/2_stage"}
    pg1, scope1 = scope_of(raw, expanded, "net/2_stage")
    pg2, scope2 = scope_of(raw, expanded, "net/2_stage")
    g1 = detect_iso_groups(pg1, scope1)
    g2 = detect_iso_groups(pg2, scope2)
    assert [(g.category, g.fingerprint, [m.id for m in g.members]) for g in g1] == [
        (g.category, g.fingerprint, [m.id for m in g.members]) for g in g2
    ]


def test_permutation_invariance_of_group_fingerprints():
    # relabeling that preserves structure and types yields identical fingerprints
    def build(order):
        nodes = [op("m/s", "Split"), op("m/t", "Concat")]
        edges = []
        for slot, i in enumerate(order):
            nodes += [op(f"m/conv{i}", "Conv2D"), op(f"m/relu{i}", "ReLU")]
            edges += [("m/s", f"m/conv{i}"), (f"m/conv{i}", f"m/relu{i}"), (f"m/relu{i}", "m/t")]
        return RawGraph(name="g", nodes=nodes, edges=edges)

    pg1, scope1 = scope_of(build([0, 1, 2]), {"m"}, "m")
    pg2, scope2 = scope_of(build([2, 0, 1]), {"m"}, "m")
    f1 = {g.fingerprint for g in detect_iso_groups(pg1, scope1)}
    f2 = {g.fingerprint for g in detect_iso_groups(pg2, scope2)}
    assert f1 == f2 and len(f1) == 1


def test_members_pairwise_disjoint_property():
    rng = random.Random(11)
    for _ in range(25):
        raw = fixtures.random_hier_dag(rng, max_leaves=40, max_depth=2)
        pg = build_hierarchy(raw)
        frontier = frontier_for(pg, set())
        reps = frontier_rep_map(pg, frontier)
        result = prune_edges(pg, reps, recognize_modules(pg, 1000))
        scopes = scopes_from_visible(pg, frontier, result.edges)
        for scope in scopes.values():
            seen = set()
            for group in detect_iso_groups(pg, scope):
                for m in group.members:
                    assert not (set(m.nodes) & seen)
                    seen.update(m.nodes)
