"""Walkthrough: module recognition and edge pruning with leveled ports.

Two level-1 modules (Main, Gradients) and two level-2 modules (network_train,
loss_scale). The softmax inside network_train feeds something deep inside each
of a level-1 and a level-2 module, so it carries one output port per level;
the bundled middles run between module ports and the interior tails stay
hidden until a port is hovered.
"""

from cgsimp import Session, SessionOptions
from cgsimp import fixtures

session = Session(fixtures.port_design(), SessionOptions(module_threshold=3))
session.expand("Main")
session.expand("Main/network_train")

visible = session.derive_visible()
print("visible nodes:", [n["path"] for n in visible.nodes])
print("containers:   ", [c["path"] for c in visible.containers])

print("\nports (side:level:owner):")
for port in visible.ports:
    print(f"  {port['id']:45s} kind={port['kind']}")

print("\nedges:")
for edge in visible.edges:
    vis = "hidden " if edge.hidden else "visible"
    print(f"  [{vis}] {edge.kind:10s} {edge.src.node} -> {edge.dst.node}  ({len(edge.contributors)} leaf edge(s))")

softmax_out = [p for p in visible.ports if p["owner"] == "Main/network_train/softmax"]
print("\nsoftmax output ports, one per far-module level:", [(p["side"], p["level"]) for p in softmax_out])

pid = softmax_out[0]["id"]
print(f"hovering {pid} reveals hidden edges:", session.reveal_hidden(pid))
