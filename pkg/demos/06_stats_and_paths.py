"""Walkthrough: per-depth element statistics and path finding.

The stats table compares the raw frontier (what an unsimplified viewer would
draw) against the simplified visible graph at the same depth; path finding
decides existence on the leaf edges and renders chains of visible edges.
"""

from cgsimp import Session, SessionOptions
from cgsimp import fixtures

session = Session(fixtures.resnet_like())
print("depth,raw_nodes,raw_edges,vis_nodes,vis_edges,reduction_pct")
for row in session.stats_by_depth(3):
    print(
        f"{row['depth']},{row['raw_nodes']},{row['raw_edges']},"
        f"{row['vis_nodes']},{row['vis_edges']},{row['reduction_pct']}"
    )

# the profiler names two convolutions; which runs first?
session = Session(fixtures.lenet())
session.expand("backbone")
paths = session.find_path("backbone/Conv1", "backbone/Conv2")
print(f"\nConv1 -> Conv2: {len(paths)} path(s)")
for p in paths:
    print("  " + " -> ".join(p["nodes"]))
print("Conv2 -> Conv1:", session.find_path("backbone/Conv2", "backbone/Conv1"))

print("\nsearch 'conv':")
for hit in session.search("conv"):
    print(f"  {hit['path']}  ({hit['profile']['kind']})")
