"""Walkthrough: graph files, the namespace hierarchy, and descendant counts.

Node names are slash-delimited scoped paths; the hierarchy tree falls straight
out of those prefixes. Data nodes (constants/parameters) never float free:
they attach to the operation they feed.
"""

from cgsimp import build_hierarchy, descendants, emit_graph_file, parse_graph_file
from cgsimp import fixtures

raw = fixtures.lenet()
print(f"fixture {raw.name!r}: {len(raw.nodes)} nodes, {len(raw.edges)} edges")

# canonical round trip: emit is byte-stable, parse(emit(g)) == g
blob = emit_graph_file(raw)
again = parse_graph_file(blob)
assert emit_graph_file(again) == blob
print(f"canonical file: {len(blob)} bytes, round-trips byte-identically")

pg = build_hierarchy(raw)
print("\nhierarchy (top two levels):")
for top in pg.root.children:
    print(f"  {top.path:12s} kind={top.kind.value:9s} descendants={top.descendant_count}")
    if top.is_meta:
        for child in top.children:
            print(f"      {child.path}")

print("\ndescendants('backbone') =", descendants(pg, "backbone"))

print("\nop -> op leaf edges (data-node edges became attachments):")
for src, dst in pg.leaf_edges[:5]:
    print(f"  {src} -> {dst}")
print(f"  ... {len(pg.leaf_edges)} total")

print("\nattachments:")
for op, att in sorted(pg.attachments.items()):
    sides = []
    if att.constants:
        sides.append(f"constants={att.constants}")
    if att.parameters:
        sides.append(f"parameters={att.parameters}")
    print(f"  {op}: {', '.join(sides)}")
