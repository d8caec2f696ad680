"""Concept Graph Mode: split metanodes that close grouping-induced directed
cycles at the top level, then classify metanodes into DNN layer kinds.

Collapsing namespaces can turn an acyclic operator graph into a cyclic group
graph (a group holding both early and late operators is entered, exited, and
re-entered by the data flow). One traversal of the operator graph records, per
top-level group, when it was first exited and when it was re-entered; each
strongly connected component of the induced group graph is then broken by
splitting its latest re-entered member in two along the first-exit boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidFrontierError
from .model import LayerClass, NodeKind, ProcessedGraph, TreeNode, natural_key, rebuild_with_assignments

MAX_SPLIT_PASSES = 2


@dataclass
class InducedEdge:
    src: str
    dst: str
    contributors: list[tuple[str, str]]


@dataclass
class Split:
    original: str
    parts: list[str]
    partition: list[list[str]]

    def to_json(self) -> dict:
        return {"original": self.original, "parts": list(self.parts), "partition": [list(p) for p in self.partition]}


@dataclass
class CycleReport:
    cycles_found: int = 0
    splits: list[Split] = field(default_factory=list)
    residual_sccs: list[list[str]] = field(default_factory=list)
    passes: int = 0
    capped: bool = False

    def to_json(self) -> dict:
        return {
            "cycles_found": self.cycles_found,
            "splits": [s.to_json() for s in self.splits],
            "residual_sccs": [list(s) for s in self.residual_sccs],
            "passes": self.passes,
            "capped": self.capped,
        }


@dataclass
class ConceptGraph:
    graph: ProcessedGraph
    layer_class: dict[str, LayerClass]
    report: CycleReport


def _frontier_nodes(pg: ProcessedGraph, level_or_frontier) -> list[TreeNode]:
    if isinstance(level_or_frontier, int):
        level = level_or_frontier
        if level < 1:
            raise InvalidFrontierError("level must be >= 1")
        out = []
        for node in pg.root.iter_subtree():
            if node.is_root:
                continue
            if node.depth == level or (node.is_leaf and node.depth < level):
                out.append(node)
        return out
    nodes = []
    for path in level_or_frontier:
        node = pg.by_path.get(path)
        if node is None or node.is_root:
            raise InvalidFrontierError(f"unknown frontier node {path!r}")
        nodes.append(node)
    return nodes


def frontier_rep_map(pg: ProcessedGraph, frontier: list[TreeNode]) -> dict[str, TreeNode]:
    """Map each leaf source id to its frontier representative; validates the
    frontier is an antichain covering all leaves."""
    marked = {n.path for n in frontier}
    for node in frontier:
        for anc in node.ancestors():
            if anc.path in marked:
                raise InvalidFrontierError(f"{node.path!r} is below frontier node {anc.path!r}")
    reps: dict[str, TreeNode] = {}
    for node in frontier:
        for leaf in node.leaves() if node.is_meta else [node]:
            reps[leaf.source_id or leaf.path] = node
    missing = set(pg.leaf_by_id) - set(reps)
    if missing:
        raise InvalidFrontierError(f"frontier does not cover leaves, e.g. {sorted(missing)[0]!r}")
    return reps


def induced_edges(pg: ProcessedGraph, level_or_frontier) -> list[InducedEdge]:
    """Leaf op edges lifted to the frontier, deduplicated, with contributors."""
    frontier = _frontier_nodes(pg, level_or_frontier)
    reps = frontier_rep_map(pg, frontier)
    lifted: dict[tuple[str, str], InducedEdge] = {}
    for src, dst in pg.leaf_edges:
        ru, rv = reps[src], reps[dst]
        if ru.path == rv.path:
            continue
        key = (ru.path, rv.path)
        edge = lifted.get(key)
        if edge is None:
            edge = lifted[key] = InducedEdge(src=ru.path, dst=rv.path, contributors=[])
        edge.contributors.append((src, dst))
    return [lifted[k] for k in sorted(lifted)]


def strongly_connected_components(adj: dict[str, list[str]]) -> list[list[str]]:
    """Iterative Tarjan over a deterministic adjacency mapping."""
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[list[str]] = []
    counter = 0

    for start in adj:
        if start in index:
            continue
        work: list[tuple[str, int]] = [(start, 0)]
        while work:
            node, succ_i = work[-1]
            if succ_i == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            successors = adj.get(node, [])
            while succ_i < len(successors):
                succ = successors[succ_i]
                succ_i += 1
                if succ not in index:
                    work[-1] = (node, succ_i)
                    work.append((succ, 0))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index[succ])
            if advanced:
                continue
            work.pop()
            if lowlink[node] == index[node]:
                component = []
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    component.append(top)
                    if top == node:
                        break
                sccs.append(sorted(component))
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
    return sccs


def _path_key(path: str) -> tuple:
    return tuple(natural_key(s) for s in path.split("/"))


def _op_traversal_order(pg: ProcessedGraph) -> list[str]:
    """Deterministic group-coherent topological order over the operator graph.

    Starts from operations whose only inputs are attached data nodes (or
    nothing) and keeps consuming ready operations of the current top-level
    group before moving to another group, so a group is "exited" only once
    nothing in it can run without outside input. The first-exit boundary then
    separates a group's early operators from the late ones responsible for
    grouping-induced cycles.
    """
    import heapq

    out = pg.op_edges_out()
    op_ids = [leaf.source_id or leaf.path for leaf in pg.root.leaves() if leaf.kind is NodeKind.OPERATION]
    indeg = {op: 0 for op in op_ids}
    for _, dst in pg.leaf_edges:
        indeg[dst] = indeg.get(dst, 0) + 1

    def group_of(op: str) -> str | None:
        top = _top_group_of(pg, op)
        return top.path if top is not None else None

    ready: dict[str | None, list[tuple]] = {}
    for op in op_ids:
        if indeg[op] == 0:
            heapq.heappush(ready.setdefault(group_of(op), []), (_path_key(op), op))

    order: list[str] = []
    visited: set[str] = set()
    current: str | None = None
    remaining = len(op_ids)
    while len(order) < remaining:
        heap = ready.get(current)
        if not heap:
            ready = {g: h for g, h in ready.items() if h}
            if not ready:
                # leaf-level cycle or disconnection: release the smallest
                # unvisited op regardless of pending inputs
                leftover = min((op for op in op_ids if op not in visited), key=_path_key)
                indeg[leftover] = 0
                heapq.heappush(ready.setdefault(group_of(leftover), []), (_path_key(leftover), leftover))
            current = min(ready, key=lambda g: ready[g][0][0])
            heap = ready[current]
        _, node = heapq.heappop(heap)
        if node in visited:
            continue
        visited.add(node)
        order.append(node)
        for succ in out.get(node, []):
            indeg[succ] -= 1
            if indeg[succ] == 0 and succ not in visited:
                heapq.heappush(ready.setdefault(group_of(succ), []), (_path_key(succ), succ))
    return order


def _top_group_of(pg: ProcessedGraph, leaf_id: str) -> TreeNode | None:
    node = pg.leaf_by_id[leaf_id]
    top = None
    cur = node
    while cur.parent is not None:
        top = cur
        cur = cur.parent
    return top if top is not None and top.is_meta else None


def _one_split_pass(pg: ProcessedGraph, report: CycleReport) -> ProcessedGraph | None:
    """Detect top-level SCCs and split one member per SCC. Returns the rewritten
    graph, or None when the top level is already acyclic."""
    top = [c.path for c in pg.root.children]
    adj: dict[str, list[str]] = {p: [] for p in top}
    for edge in induced_edges(pg, 1):
        adj[edge.src].append(edge.dst)
    sccs = [s for s in strongly_connected_components(adj) if len(s) > 1]
    if not sccs:
        return None
    report.cycles_found += len(sccs)

    order = _op_traversal_order(pg)
    first_visit: dict[str, int] = {}
    first_exit: dict[str, int] = {}
    re_entry: dict[str, int] = {}
    exited: set[str] = set()
    leaf_first_visit: dict[str, int] = {}
    current: str | None = None
    for t, leaf_id in enumerate(order):
        leaf_first_visit.setdefault(leaf_id, t)
        group = _top_group_of(pg, leaf_id)
        gpath = group.path if group is not None else None
        if gpath != current:
            if current is not None:
                first_exit.setdefault(current, t)
                exited.add(current)
            if gpath is not None:
                if gpath in exited:
                    re_entry[gpath] = t
                first_visit.setdefault(gpath, t)
            current = gpath

    def child_fv(child: TreeNode) -> int:
        times = [
            leaf_first_visit[leaf.source_id or leaf.path]
            for leaf in (child.leaves() if child.is_meta else [child])
            if (leaf.source_id or leaf.path) in leaf_first_visit
        ]
        return min(times) if times else len(order) + 1

    def partition_preview(path: str) -> tuple[list[TreeNode], list[TreeNode], bool]:
        node = pg.by_path[path]
        ranked = sorted(node.children, key=lambda c: (child_fv(c), natural_key(c.name)))
        cut = first_exit.get(path)
        if cut is not None:
            part1 = [c for c in ranked if child_fv(c) < cut]
            part2 = [c for c in ranked if child_fv(c) >= cut]
            if part1 and part2:
                return part1, part2, True
        return ranked[:1], ranked[1:], False

    reassign: dict[str, tuple[str, ...]] = {}
    taken_names = {c.name for c in pg.root.children}
    for scc in sccs:
        # The group causing the cycle holds a small run of late-visited
        # children (stray operators grouped with much earlier ones); prefer
        # the re-entered member whose post-exit side is smallest, breaking
        # ties toward the latest re-entry.
        candidates = []
        for p in scc:
            node = pg.by_path[p]
            if not node.is_meta or len(node.children) < 2 or p not in re_entry:
                continue
            _, part2, clean = partition_preview(p)
            candidates.append((0 if clean else 1, len(part2), -re_entry[p], p))
        if not candidates:
            candidates = [
                (2, 0, -first_visit.get(p, -1), p)
                for p in scc
                if pg.by_path[p].is_meta and len(pg.by_path[p].children) >= 2
            ]
        if not candidates:
            report.residual_sccs.append(list(scc))
            continue
        chosen = min(candidates)[-1]
        node = pg.by_path[chosen]
        part1, part2, _ = partition_preview(chosen)

        parts = []
        partition = []
        for group_children in (part1, part2):
            name = f"{node.name}_{group_children[0].name}"
            suffix = 2
            while name in taken_names:
                name = f"{node.name}_{group_children[0].name}_{suffix}"
                suffix += 1
            taken_names.add(name)
            member_ids = []
            for child in group_children:
                for leaf in child.leaves() if child.is_meta else [child]:
                    leaf_id = leaf.source_id or leaf.path
                    segments = tuple(leaf.path.split("/"))
                    reassign[leaf_id] = (name,) + segments[1:]
                    member_ids.append(leaf_id)
            parts.append(name)
            partition.append(sorted(member_ids))
        report.splits.append(Split(original=chosen, parts=parts, partition=partition))

    if not reassign:
        return pg
    return rebuild_with_assignments(pg, reassign)


def detect_and_split_cycles(pg: ProcessedGraph, max_passes: int = MAX_SPLIT_PASSES) -> tuple[ProcessedGraph, CycleReport]:
    report = CycleReport()
    current = pg
    for _ in range(max_passes):
        report.residual_sccs = []
        result = _one_split_pass(current, report)
        if result is None:
            return current, report
        report.passes += 1
        if result is current:
            break
        current = result
    top = [c.path for c in current.root.children]
    adj: dict[str, list[str]] = {p: [] for p in top}
    for edge in induced_edges(current, 1):
        adj[edge.src].append(edge.dst)
    leftovers = [s for s in strongly_connected_components(adj) if len(s) > 1]
    if leftovers:
        report.capped = True
        report.residual_sccs = leftovers
    return current, report


_RNN_MARKERS = ("LSTM", "GRU", "RNN")
_FC_MARKERS = ("MatMul", "Dense", "Gemm")


def classify_layers(pg: ProcessedGraph) -> dict[str, LayerClass]:
    """Layer kind per metanode, a pure function of descendant operator types."""
    classes: dict[str, LayerClass] = {}
    for node in pg.root.iter_subtree():
        if node.is_root or node.is_leaf:
            continue
        op_types = [leaf.op_type or "" for leaf in node.leaves() if leaf.kind is NodeKind.OPERATION]
        if any("Conv" in t for t in op_types):
            classes[node.path] = LayerClass.CNN
        elif any(m in t for t in op_types for m in _RNN_MARKERS):
            classes[node.path] = LayerClass.RNN
        elif any(m in t for t in op_types for m in _FC_MARKERS):
            classes[node.path] = LayerClass.FC
        else:
            classes[node.path] = LayerClass.NORMAL
    return classes


def build_concept_graph(pg: ProcessedGraph) -> ConceptGraph:
    graph, report = detect_and_split_cycles(pg)
    return ConceptGraph(graph=graph, layer_class=classify_layers(graph), report=report)
