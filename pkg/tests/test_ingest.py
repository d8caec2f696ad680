from __future__ import annotations

import json
import random

import pytest

from cgsimp import fixtures
from cgsimp.errors import GraphError, GraphSyntaxError, InvalidSpecError, SchemaError
from cgsimp.ingest import (
    BlockSpec,
    SyntheticSpec,
    chain_block,
    emit_graph_file,
    generate_synthetic,
    parse_graph_file,
)
from cgsimp.model import NodeKind, build_hierarchy, descendants


def test_minimal_valid_file():
    doc = {
        "format_version": "1",
        "name": "tiny",
        "nodes": [{"name": "a/x", "kind": "operation", "op_type": "Add"}],
        "edges": [],
    }
    raw = parse_graph_file(json.dumps(doc))
    assert len(raw.nodes) == 1
    assert raw.nodes[0].op_type == "Add"
    assert raw.edges == []


def test_missing_op_type_is_schema_error():
    doc = {
        "format_version": "1",
        "name": "bad",
        "nodes": [{"name": "a/x", "kind": "operation"}],
        "edges": [],
    }
    with pytest.raises(SchemaError) as err:
        parse_graph_file(json.dumps(doc))
    assert err.value.field == "op_type"


def test_syntax_error_is_positioned():
    with pytest.raises(GraphSyntaxError) as err:
        parse_graph_file(b'{"format_version": "1",\n  "name": }')
    assert err.value.line == 2
    assert err.value.col > 0


def test_unknown_top_level_field_rejected():
    doc = {"format_version": "1", "name": "g", "nodes": [], "edges": [], "extra": 1}
    with pytest.raises(SchemaError):
        parse_graph_file(json.dumps(doc))


def test_unknown_attrs_preserved():
    doc = {
        "format_version": "1",
        "name": "g",
        "nodes": [{"name": "a/x", "kind": "operation", "op_type": "Add", "attrs": {"custom_key": "v"}}],
        "edges": [],
    }
    raw = parse_graph_file(json.dumps(doc))
    assert raw.nodes[0].attrs == {"custom_key": "v"}


def test_lenet_fixture_backbone_grouping():
    pg = build_hierarchy(fixtures.lenet())
    backbone = pg.node("backbone")
    child_names = {c.name for c in backbone.children}
    assert {"Conv1", "Conv2"} <= child_names
    assert "backbone/Conv2/Conv2D-op211" in pg.leaf_by_id


def test_empty_graph_round_trip():
    from cgsimp.model import RawGraph

    raw = RawGraph(name="empty", nodes=[], edges=[])
    data = emit_graph_file(raw)
    doc = json.loads(data)
    assert doc["nodes"] == [] and doc["edges"] == []
    again = parse_graph_file(data)
    assert again.nodes == [] and again.edges == []


@pytest.mark.parametrize("name", sorted(set(fixtures.BUILTIN) - {"resnet_like"}))
def test_round_trip_fixtures(name):
    raw = fixtures.load(name)
    once = emit_graph_file(raw)
    again = parse_graph_file(once)
    assert emit_graph_file(again) == once
    assert {n.path: (n.kind, n.op_type, tuple(sorted(n.attrs.items()))) for n in again.nodes} == {
        n.path: (n.kind, n.op_type, tuple(sorted(n.attrs.items()))) for n in raw.nodes
    }
    assert sorted(again.edges) == sorted(raw.edges)


def test_emit_is_byte_stable_under_reordering():
    raw = fixtures.lenet()
    shuffled = type(raw)(name=raw.name, nodes=list(reversed(raw.nodes)), edges=list(reversed(raw.edges)))
    assert emit_graph_file(raw) == emit_graph_file(shuffled)


def test_fuzz_mutations_never_crash():
    rng = random.Random(20240817)
    base = emit_graph_file(fixtures.lenet()).decode("utf-8")
    outcomes = {"ok": 0, "error": 0}
    for _ in range(300):
        text = list(base)
        for _ in range(rng.randint(1, 6)):
            pos = rng.randrange(len(text))
            action = rng.random()
            if action < 0.4:
                text[pos] = chr(rng.randint(32, 126))
            elif action < 0.7:
                del text[pos]
            else:
                text.insert(pos, chr(rng.randint(32, 126)))
        mutated = "".join(text)
        try:
            parsed = parse_graph_file(mutated)
            build_hierarchy(parsed)
            outcomes["ok"] += 1
        except GraphError:
            outcomes["error"] += 1
    assert outcomes["ok"] + outcomes["error"] == 300


def test_synthetic_parallel_counts():
    spec = SyntheticSpec(block=chain_block(3), repeats=3, wiring="parallel-same-endpoints")
    raw = generate_synthetic(spec)
    ops = [n for n in raw.nodes if n.kind is NodeKind.OPERATION]
    assert len(ops) == 9 + 2
    pg = build_hierarchy(raw)
    assert descendants(pg, "/") >= 11


def test_synthetic_repeats_one():
    spec = SyntheticSpec(block=chain_block(2), repeats=1, wiring="chain")
    raw = generate_synthetic(spec)
    assert len(raw.nodes) == 2 + 2
    assert len(raw.edges) == 1 + 2


def test_synthetic_invalid_spec():
    with pytest.raises(InvalidSpecError):
        generate_synthetic(SyntheticSpec(block=chain_block(3), repeats=0, wiring="chain"))
    with pytest.raises(InvalidSpecError):
        generate_synthetic(SyntheticSpec(block=chain_block(3), repeats=2, wiring="ring"))
    bad = BlockSpec(ops=(("a", "A"),), edges=(("a", "b"),), input="a", output="a")
    with pytest.raises(InvalidSpecError):
        generate_synthetic(SyntheticSpec(block=bad, repeats=2, wiring="chain"))


def test_resnet_like_matches_analytic_counts():
    plan = (4, 3, 5, 2)
    raw = fixtures.resnet_like(plan)
    expected = fixtures.resnet_like_expected_counts(plan)
    ops = [n for n in raw.nodes if n.kind is NodeKind.OPERATION]
    assert len(ops) == expected["operators"]
    assert len(raw.edges) == expected["edges"]


def test_resnet_default_corpus_is_large():
    expected = fixtures.resnet_like_expected_counts()
    assert expected["operators"] >= 1000
    assert expected["families"] == 4
