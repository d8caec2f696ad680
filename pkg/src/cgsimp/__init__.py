"""cgsimp: visual simplification engine for hierarchical DNN computational graphs.

Pipeline: raw graph -> processed graph (namespace hierarchy) -> optional concept
graph (cycle removal + layer classes) -> visible graph (edge pruning with ports,
isomorphic subgraph stacking) -> port-constrained orthogonal layout.
"""

from .model import (
    LayerClass,
    NodeKind,
    ProcessedGraph,
    RawGraph,
    RawNode,
    build_hierarchy,
    descendants,
)
from .ingest import (
    BlockSpec,
    SyntheticSpec,
    emit_graph_file,
    generate_synthetic,
    parse_graph_file,
)
from .concept import (
    ConceptGraph,
    CycleReport,
    build_concept_graph,
    classify_layers,
    detect_and_split_cycles,
    induced_edges,
)
from .pruning import ModuleInfo, Port, VisibleEdge, prune_edges, recognize_modules, reveal_hidden
from .stacking import IsoGroup, Pile, detect_iso_groups, djb, edge_hash, node_hash, stack, subgraph_hash
from .session import Session, SessionOptions, VisibleGraph
from .layout import LayoutParams, LayoutResult, layout_graph, layout_subgraph, stable_relayout
from .svg import render_svg

__all__ = [
    "ModuleInfo",
    "Port",
    "VisibleEdge",
    "prune_edges",
    "recognize_modules",
    "reveal_hidden",
    "IsoGroup",
    "Pile",
    "detect_iso_groups",
    "djb",
    "edge_hash",
    "node_hash",
    "stack",
    "subgraph_hash",
    "Session",
    "SessionOptions",
    "VisibleGraph",
    "LayoutParams",
    "LayoutResult",
    "layout_graph",
    "layout_subgraph",
    "stable_relayout",
    "render_svg",
    "LayerClass",
    "NodeKind",
    "ProcessedGraph",
    "RawGraph",
    "RawNode",
    "build_hierarchy",
    "descendants",
    "BlockSpec",
    "SyntheticSpec",
    "emit_graph_file",
    "generate_synthetic",
    "parse_graph_file",
    "ConceptGraph",
    "CycleReport",
    "build_concept_graph",
    "classify_layers",
    "detect_and_split_cycles",
    "induced_edges",
]

__version__ = "0.1.0"
