"""Walkthrough: fingerprinting and stacking of repeated sibling subgraphs.

Six branches run between a shared source A and target B: two Mul->Add chains,
three Conv2D->ReLU chains, and one odd Sub. The repeated ones collapse into
piles carrying their repeat count; the odd branch stays as is.
"""

from cgsimp import Session, djb, node_hash, subgraph_hash
from cgsimp import fixtures

# the DJB primitive everything is built from
print("djb('')  =", djb(""))
print("djb('a') =", djb("a"))
print("node_hash(ReLU, parent M, deg 0/0, aux 0) =", node_hash("ReLU", [], "M", 0, 0, 0))

session = Session(fixtures.iso_branches())
session.expand("block")
visible = session.derive_visible()

print("\npiles:")
for pile in visible.piles:
    print(f"  {pile.id}: repeat={pile.repeat} members={pile.member_ids}")
    print(f"    representative nodes: {list(pile.representative.nodes)}")

print("\nvisible nodes after stacking:")
for n in visible.nodes:
    marker = f"  [pile x{n['pile']['repeat']}]" if "pile" in n else ""
    print(f"  {n['path']}{marker}")

print("\nstats:", visible.stats)

# a ResNet-style corpus: each stage is one repeated block family
session = Session(fixtures.resnet_like((8, 6, 5, 4)))
session.expand_to_depth(3)
visible = session.derive_visible()
print("\nresnet-like corpus at depth 3:")
print("  piles:", [(p.id, p.repeat) for p in visible.piles])
print("  stats:", visible.stats)
