"""Walkthrough: grouping-induced cycles and how splitting removes them.

The operator graph is a DAG, yet collapsing namespaces can create directed
cycles between the groups (a namespace holding both early and late operators
gets entered, left, and re-entered by the data flow). The concept-graph pass
splits such a group in two along the traversal's first-exit boundary.
"""

from cgsimp import build_concept_graph, build_hierarchy, induced_edges
from cgsimp import fixtures

pg = build_hierarchy(fixtures.fig_cycle())
print("collapsed top-level edges before treatment:")
for e in induced_edges(pg, 1):
    print(f"  {e.src} -> {e.dst}   (from {e.contributors})")

concept = build_concept_graph(pg)
print(f"\npasses: {concept.report.passes}, cycles found: {concept.report.cycles_found}")
for split in concept.report.splits:
    print(f"  split {split.original} -> {split.parts}  partition={split.partition}")

print("\ncollapsed top-level edges after treatment (acyclic):")
for e in induced_edges(concept.graph, 1):
    print(f"  {e.src} -> {e.dst}")

# The classic real-world case: the gradient namespace feeds the optimizer
# inside Main, closing a Main <-> Gradients cycle.
bert = build_hierarchy(fixtures.bert_like())
concept = build_concept_graph(bert)
print("\nbert-like training graph:")
for split in concept.report.splits:
    print(f"  split {split.original} -> {split.parts}")
print("  layer classes of the split parts:")
for part in concept.report.splits[0].parts:
    print(f"    {part}: {concept.layer_class[part].value}")
