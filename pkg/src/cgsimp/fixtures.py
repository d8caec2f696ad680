"""Built-in graphs: small reconstructions of the reference figures, plus corpus
generators (ResNet-style stacked stages, random DNN-shaped hierarchies) used by
the demos and the verification suite.
"""

from __future__ import annotations

import random

from .ingest import BlockSpec, SyntheticSpec, generate_synthetic
from .model import NodeKind, RawGraph, RawNode


def _op(path: str, op_type: str, **attrs: str) -> RawNode:
    return RawNode(path=path, kind=NodeKind.OPERATION, op_type=op_type, attrs=dict(attrs))


def _param(path: str) -> RawNode:
    return RawNode(path=path, kind=NodeKind.PARAMETER)


def _const(path: str) -> RawNode:
    return RawNode(path=path, kind=NodeKind.CONSTANT)


def fig_cycle() -> RawGraph:
    """Two groups whose collapse yields a 2-cycle: G1{A,B}, G2{C,D}, A->C->B->D."""
    return RawGraph(
        name="fig_cycle",
        nodes=[
            _op("G1/A", "Load"),
            _op("G1/B", "ReLU"),
            _op("G2/C", "Conv2D"),
            _op("G2/D", "Store"),
        ],
        edges=[("G1/A", "G2/C"), ("G2/C", "G1/B"), ("G1/B", "G2/D")],
    )


def port_design() -> RawGraph:
    """Two level-1 modules (Main, Gradients) and two level-2 modules
    (network_train, loss_scale) with a softmax feeding one of each; use a
    module threshold of 3 to reproduce the intended module set.
    """
    nt = "Main/network_train"
    ls = "Main/loss_scale"
    nodes = [
        _op(f"{nt}/pre/Mul-op3", "Mul"),
        _op(f"{nt}/pre/Add-op2", "Add"),
        _op(f"{nt}/softmax/Softmax-op1", "Softmax"),
        _op(f"{ls}/scale/Mul-op4", "Mul"),
        _op(f"{ls}/scale/Cast-op5", "Cast"),
        _op(f"{ls}/out/Add-op6", "Add"),
        _op("Gradients/grad_net/MatMul-op7", "MatMul"),
        _op("Gradients/grad_net/Mul-op8", "Mul"),
        _op("Gradients/acc/AddN-op9", "AddN"),
        _op("Gradients/acc/Assign-op10", "Assign"),
    ]
    edges = [
        (f"{nt}/pre/Mul-op3", f"{nt}/pre/Add-op2"),
        (f"{nt}/pre/Add-op2", f"{nt}/softmax/Softmax-op1"),
        (f"{nt}/softmax/Softmax-op1", "Gradients/grad_net/MatMul-op7"),
        (f"{nt}/softmax/Softmax-op1", f"{ls}/scale/Mul-op4"),
        (f"{ls}/scale/Mul-op4", f"{ls}/scale/Cast-op5"),
        (f"{ls}/scale/Cast-op5", f"{ls}/out/Add-op6"),
        ("Gradients/grad_net/MatMul-op7", "Gradients/grad_net/Mul-op8"),
        ("Gradients/grad_net/Mul-op8", "Gradients/acc/AddN-op9"),
        ("Gradients/acc/AddN-op9", "Gradients/acc/Assign-op10"),
    ]
    return RawGraph(name="port_design", nodes=nodes, edges=edges)


PORT_DESIGN_THRESHOLD = 3


def lenet() -> RawGraph:
    """LeNet-style training graph with the profiler's operator names."""
    bb = "backbone"
    nodes = [
        _op("data/GetNext-op1", "GetNext"),
        _op(f"{bb}/Conv1/Conv2D-op207", "Conv2D", precision="FP16"),
        _param(f"{bb}/Conv1/weight"),
        _op(f"{bb}/relu1/ReLU-op208", "ReLU"),
        _op(f"{bb}/pool1/MaxPool-op209", "MaxPool"),
        _op(f"{bb}/Conv2/Conv2D-op211", "Conv2D", precision="FP32"),
        _param(f"{bb}/Conv2/weight"),
        _op(f"{bb}/relu2/ReLU-op212", "ReLU"),
        _op(f"{bb}/pool2/MaxPool-op213", "MaxPool"),
        _op(f"{bb}/flatten/Flatten-op214", "Flatten"),
        _op(f"{bb}/FC3-Dense/FusedMatMulBiasAdd-op298", "FusedMatMulBiasAdd"),
        _param(f"{bb}/FC3-Dense/weight"),
        _param(f"{bb}/FC3-Dense/bias"),
        _op("loss/SoftmaxCrossEntropyWithLogits-op300", "SoftmaxCrossEntropyWithLogits"),
        _const("loss/onehot_depth"),
    ]
    edges = [
        ("data/GetNext-op1", f"{bb}/Conv1/Conv2D-op207"),
        (f"{bb}/Conv1/weight", f"{bb}/Conv1/Conv2D-op207"),
        (f"{bb}/Conv1/Conv2D-op207", f"{bb}/relu1/ReLU-op208"),
        (f"{bb}/relu1/ReLU-op208", f"{bb}/pool1/MaxPool-op209"),
        (f"{bb}/pool1/MaxPool-op209", f"{bb}/Conv2/Conv2D-op211"),
        (f"{bb}/Conv2/weight", f"{bb}/Conv2/Conv2D-op211"),
        (f"{bb}/Conv2/Conv2D-op211", f"{bb}/relu2/ReLU-op212"),
        (f"{bb}/relu2/ReLU-op212", f"{bb}/pool2/MaxPool-op213"),
        (f"{bb}/pool2/MaxPool-op213", f"{bb}/flatten/Flatten-op214"),
        (f"{bb}/flatten/Flatten-op214", f"{bb}/FC3-Dense/FusedMatMulBiasAdd-op298"),
        (f"{bb}/FC3-Dense/weight", f"{bb}/FC3-Dense/FusedMatMulBiasAdd-op298"),
        (f"{bb}/FC3-Dense/bias", f"{bb}/FC3-Dense/FusedMatMulBiasAdd-op298"),
        (f"{bb}/FC3-Dense/FusedMatMulBiasAdd-op298", "loss/SoftmaxCrossEntropyWithLogits-op300"),
        ("loss/onehot_depth", "loss/SoftmaxCrossEntropyWithLogits-op300"),
    ]
    return RawGraph(name="lenet", nodes=nodes, edges=edges)


def iso_branches() -> RawGraph:
    """Six branches between a shared source and target: 2 + 3 isomorphic, 1 odd."""
    g = "block"
    nodes = [_op(f"{g}/A", "Split")]
    edges: list[tuple[str, str]] = []
    for i in range(2):
        nodes += [_op(f"{g}/{i}_ma/Mul", "Mul"), _op(f"{g}/{i}_ma/Add", "Add")]
        edges += [
            (f"{g}/A", f"{g}/{i}_ma/Mul"),
            (f"{g}/{i}_ma/Mul", f"{g}/{i}_ma/Add"),
            (f"{g}/{i}_ma/Add", f"{g}/B"),
        ]
    for i in range(3):
        nodes += [_op(f"{g}/{i}_cr/Conv2D", "Conv2D"), _op(f"{g}/{i}_cr/ReLU", "ReLU")]
        edges += [
            (f"{g}/A", f"{g}/{i}_cr/Conv2D"),
            (f"{g}/{i}_cr/Conv2D", f"{g}/{i}_cr/ReLU"),
            (f"{g}/{i}_cr/ReLU", f"{g}/B"),
        ]
    nodes += [_op(f"{g}/odd/Sub", "Sub"), _op(f"{g}/B", "Concat")]
    edges += [(f"{g}/A", f"{g}/odd/Sub"), (f"{g}/odd/Sub", f"{g}/B")]
    return RawGraph(name="iso_branches", nodes=nodes, edges=edges)


def bert_like(layers: int = 12) -> RawGraph:
    """Namespace shape of a BERT training graph: Main/Gradients at the top,
    an encoder of identical attention layers, and a clip_gradients scope.
    """
    nodes: list[RawNode] = []
    edges: list[tuple[str, str]] = []
    emb = "Main/network_train/bert/embeddings"
    nodes += [
        _op(f"{emb}/GatherV2-op11", "GatherV2"),
        _param(f"{emb}/word_table"),
        _op(f"{emb}/Add-op12", "Add"),
    ]
    edges += [(f"{emb}/word_table", f"{emb}/GatherV2-op11"), (f"{emb}/GatherV2-op11", f"{emb}/Add-op12")]
    prev = f"{emb}/Add-op12"
    for i in range(layers):
        ly = f"Main/network_train/bert/encoder/{i}_layer"
        nodes += [
            _op(f"{ly}/attention/MatMul_q-op{20+i*10}", "MatMul"),
            _op(f"{ly}/attention/MatMul_k-op{21+i*10}", "MatMul"),
            _op(f"{ly}/attention/Softmax-op{22+i*10}", "Softmax"),
            _op(f"{ly}/attention/MatMul_v-op{23+i*10}", "MatMul"),
            _op(f"{ly}/ffn/dense/MatMul-op{24+i*10}", "MatMul"),
            _op(f"{ly}/ffn/gelu/Gelu-op{25+i*10}", "Gelu"),
            _op(f"{ly}/Add-op{26+i*10}", "Add"),
        ]
        edges += [
            (prev, f"{ly}/attention/MatMul_q-op{20+i*10}"),
            (prev, f"{ly}/attention/MatMul_k-op{21+i*10}"),
            (f"{ly}/attention/MatMul_q-op{20+i*10}", f"{ly}/attention/Softmax-op{22+i*10}"),
            (f"{ly}/attention/MatMul_k-op{21+i*10}", f"{ly}/attention/Softmax-op{22+i*10}"),
            (f"{ly}/attention/Softmax-op{22+i*10}", f"{ly}/attention/MatMul_v-op{23+i*10}"),
            (f"{ly}/attention/MatMul_v-op{23+i*10}", f"{ly}/ffn/dense/MatMul-op{24+i*10}"),
            (f"{ly}/ffn/dense/MatMul-op{24+i*10}", f"{ly}/ffn/gelu/Gelu-op{25+i*10}"),
            (f"{ly}/ffn/gelu/Gelu-op{25+i*10}", f"{ly}/Add-op{26+i*10}"),
        ]
        prev = f"{ly}/Add-op{26+i*10}"
    pool = "Main/network_train/bert/pooler/dense/MatMul-op900"
    nodes.append(_op(pool, "MatMul"))
    edges.append((prev, pool))
    clip = "Main/clip_gradients/ClipGradients-op950"
    nodes.append(_op(clip, "ClipByNorm"))
    grad = "Gradients/grad_reducer/AllReduce-op960"
    nodes.append(_op(grad, "AllReduce"))
    edges += [(pool, grad), (grad, clip)]
    return RawGraph(name="bert_like", nodes=nodes, edges=edges)


RESNET_FAMILIES: tuple[BlockSpec, ...] = (
    BlockSpec(
        ops=(("Conv2D-a", "Conv2D"), ("BatchNorm-a", "BatchNorm"), ("ReLU-a", "ReLU"),
             ("Conv2D-b", "Conv2D"), ("BatchNorm-b", "BatchNorm"), ("Add-out", "Add")),
        edges=(("Conv2D-a", "BatchNorm-a"), ("BatchNorm-a", "ReLU-a"), ("ReLU-a", "Conv2D-b"),
               ("Conv2D-b", "BatchNorm-b"), ("BatchNorm-b", "Add-out")),
        input="Conv2D-a",
        output="Add-out",
    ),
    BlockSpec(
        ops=(("Conv2D-a", "Conv2D"), ("BatchNorm-a", "BatchNorm"), ("ReLU-a", "ReLU"),
             ("Conv2D-b", "Conv2D"), ("BatchNorm-b", "BatchNorm"), ("ReLU-b", "ReLU"),
             ("Add-out", "Add")),
        edges=(("Conv2D-a", "BatchNorm-a"), ("BatchNorm-a", "ReLU-a"), ("ReLU-a", "Conv2D-b"),
               ("Conv2D-b", "BatchNorm-b"), ("BatchNorm-b", "ReLU-b"), ("ReLU-b", "Add-out")),
        input="Conv2D-a",
        output="Add-out",
    ),
    BlockSpec(
        ops=(("Conv2D-a", "Conv2D"), ("BatchNorm-a", "BatchNorm"), ("ReLU-a", "ReLU"),
             ("Conv2D-b", "Conv2D"), ("BatchNorm-b", "BatchNorm"), ("Conv2D-c", "Conv2D"),
             ("BatchNorm-c", "BatchNorm"), ("Add-out", "Add")),
        edges=(("Conv2D-a", "BatchNorm-a"), ("BatchNorm-a", "ReLU-a"), ("ReLU-a", "Conv2D-b"),
               ("Conv2D-b", "BatchNorm-b"), ("BatchNorm-b", "Conv2D-c"), ("Conv2D-c", "BatchNorm-c"),
               ("BatchNorm-c", "Add-out")),
        input="Conv2D-a",
        output="Add-out",
    ),
    BlockSpec(
        ops=(("DepthwiseConv2D-a", "DepthwiseConv2D"), ("BatchNorm-a", "BatchNorm"),
             ("ReLU6-a", "ReLU6"), ("Conv2D-b", "Conv2D"), ("BatchNorm-b", "BatchNorm"),
             ("Add-out", "Add")),
        edges=(("DepthwiseConv2D-a", "BatchNorm-a"), ("BatchNorm-a", "ReLU6-a"),
               ("ReLU6-a", "Conv2D-b"), ("Conv2D-b", "BatchNorm-b"), ("BatchNorm-b", "Add-out")),
        input="DepthwiseConv2D-a",
        output="Add-out",
    ),
)


def resnet_like(blocks_per_stage: tuple[int, ...] = (40, 40, 40, 40), name: str = "resnet_like") -> RawGraph:
    """Stacked-stage corpus: each stage holds one repeated block family wired in
    parallel between a stage entry and exit, stages chained. Four stages with 40
    six-to-eight-op blocks each give >1000 operators and four pile families.
    """
    nodes: list[RawNode] = []
    edges: list[tuple[str, str]] = []
    nodes.append(_op("input/GetNext-op0", "GetNext"))
    prev_out = "input/GetNext-op0"
    for s, repeats in enumerate(blocks_per_stage):
        family = RESNET_FAMILIES[s % len(RESNET_FAMILIES)]
        stage = f"net/{s+1}_stage"
        entry = f"{stage}/entry/Conv2D-op{s}00"
        exit_ = f"{stage}/exit/AddN-op{s}99"
        nodes += [_op(entry, "Conv2D"), _op(exit_, "AddN")]
        edges.append((prev_out, entry))
        for b in range(repeats):
            ns = f"{stage}/{b}_block"
            for local, op_type in family.ops:
                nodes.append(_op(f"{ns}/{local}", op_type))
            for e_src, e_dst in family.edges:
                edges.append((f"{ns}/{e_src}", f"{ns}/{e_dst}"))
            edges.append((entry, f"{ns}/{family.input}"))
            edges.append((f"{ns}/{family.output}", exit_))
        prev_out = exit_
    nodes.append(_op("head/Dense-op990", "MatMul"))
    edges.append((prev_out, "head/Dense-op990"))
    return RawGraph(name=name, nodes=nodes, edges=edges)


def resnet_like_expected_counts(blocks_per_stage: tuple[int, ...] = (40, 40, 40, 40)) -> dict[str, int]:
    """Analytic element counts for resnet_like, derived from the generator spec."""
    ops = 1 + 1  # input + head
    edge_count = 1 + 1  # input->stage1 entry, last exit->head
    for s, repeats in enumerate(blocks_per_stage):
        family = RESNET_FAMILIES[s % len(RESNET_FAMILIES)]
        ops += 2 + repeats * len(family.ops)
        edge_count += repeats * (len(family.edges) + 2)
        if s > 0:
            edge_count += 1
    return {"operators": ops, "edges": edge_count, "families": len(blocks_per_stage)}


def big_synthetic(target_nodes: int = 10_000, name: str = "big_synthetic") -> RawGraph:
    """Scale fixture: enough stacked stages to reach the requested node count."""
    family_size = len(RESNET_FAMILIES[0].ops)  # stages cycle families; sizes 6..8
    sizes = [len(f.ops) for f in RESNET_FAMILIES]
    stages: list[int] = []
    total = 2
    s = 0
    while total < target_nodes:
        per_block = sizes[s % len(sizes)]
        repeats = max(1, min(300, (target_nodes - total - 2) // per_block))
        stages.append(repeats)
        total += 2 + repeats * per_block
        s += 1
    _ = family_size
    return resnet_like(tuple(stages), name=name)


def random_dnn(rng: random.Random, max_leaves: int = 200) -> RawGraph:
    """Random DNN-shaped hierarchical graph whose leaf graph is a DAG.

    Stages hold topologically coherent runs of operators; a few leaves are then
    deliberately assigned to an *earlier* stage's namespace, reproducing the
    grouping-induced false cycles that collapse creates.
    """
    n_stages = rng.randint(3, 7)
    n_leaves = rng.randint(n_stages * 4, max_leaves)
    op_types = ["Conv2D", "ReLU", "MatMul", "Add", "Mul", "BatchNorm", "Softmax", "Cast"]

    stage_of: list[int] = []
    for i in range(n_leaves):
        stage_of.append(min(n_stages - 1, i * n_stages // n_leaves))

    # Grouping-induced cycle motifs: late operators filed under an early
    # namespace (the Main/Gradients pattern: gradient and optimizer operators
    # consume outputs of much earlier namespaces and emit only parameter
    # updates). One or two per graph; each stray is sink-like in the operator
    # graph, which is what namespace grouping actually produces.
    n_motifs = rng.randint(1, 2)
    strays: set[int] = set()
    for _ in range(n_motifs):
        early = rng.randint(0, n_stages - 2)
        late_candidates = [i for i in range(n_leaves) if stage_of[i] > early and i not in strays]
        if late_candidates:
            pick = rng.choice(late_candidates)
            stage_of[pick] = early
            strays.add(pick)

    def leaf_path(i: int) -> str:
        stage = stage_of[i]
        if rng.random() < 0.5:
            return f"{stage}_stage/{i}_sub/op{i}"
        return f"{stage}_stage/op{i}"

    paths = [leaf_path(i) for i in range(n_leaves)]
    nodes = [_op(paths[i], rng.choice(op_types)) for i in range(n_leaves)]

    def backbone_pred(i: int) -> int:
        # nearest non-stray predecessor so strays stay sinks
        p = i - 1
        while p in strays and p > 0:
            p -= 1
        return p

    edges: set[tuple[int, int]] = set()
    for i in range(1, n_leaves):
        if rng.random() < 0.85 or i in strays:
            edges.add((backbone_pred(i), i))
        else:
            lo = max(0, i - 6)
            choices = [p for p in range(lo, i) if p not in strays] or [backbone_pred(i)]
            edges.add((rng.choice(choices), i))
    for _ in range(n_leaves // 4):
        j = rng.randint(1, n_leaves - 1)
        lo = max(0, j - 12)
        choices = [p for p in range(lo, j) if p not in strays] or [backbone_pred(j)]
        edges.add((rng.choice(choices), j))
    # strays keep their incoming edges but never feed forward
    edges = {(i, j) for i, j in edges if i not in strays}
    for s in sorted(strays):
        lo = max(0, s - 6)
        ins = [p for p in range(lo, s) if p not in strays]
        if ins:
            edges.add((rng.choice(ins), s))
            edges.add((max(ins), s))
    edge_list = sorted((paths[i], paths[j]) for i, j in edges)
    return RawGraph(name="random_dnn", nodes=nodes, edges=edge_list)


def random_hier_dag(rng: random.Random, max_leaves: int = 60, max_depth: int = 3) -> RawGraph:
    """Uniformly random namespace tree over a random DAG; for property tests."""
    n_leaves = rng.randint(2, max_leaves)
    paths: list[str] = []
    used: set[str] = set()
    for i in range(n_leaves):
        depth = rng.randint(1, max_depth)
        segs = [f"g{rng.randint(0, 3)}" for _ in range(depth - 1)] + [f"op{i}"]
        path = "/".join(segs)
        while path in used:
            path += "x"
        used.add(path)
        paths.append(path)
    nodes = [_op(p, rng.choice(["A", "B", "C", "D"])) for p in paths]
    edges: set[tuple[str, str]] = set()
    for j in range(1, n_leaves):
        for _ in range(rng.randint(0, 3)):
            i = rng.randint(0, j - 1)
            edges.add((paths[i], paths[j]))
    return RawGraph(name="random_hier_dag", nodes=nodes, edges=sorted(edges))


BUILTIN = {
    "fig_cycle": fig_cycle,
    "port_design": port_design,
    "lenet": lenet,
    "iso_branches": iso_branches,
    "bert_like": bert_like,
    "resnet_like": resnet_like,
}


def load(name: str) -> RawGraph:
    return BUILTIN[name]()
