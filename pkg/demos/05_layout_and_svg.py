"""Walkthrough: port-constrained orthogonal layout and SVG export.

Writes demos/out/*.svg: boxes, axis-aligned routes with circular-arc bends,
leveled port rings, attachment badges, and pile echoes with repeat counts.
"""

import os

from cgsimp import Session, SessionOptions, render_svg
from cgsimp import fixtures

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)


def export(name, session):
    result = session.layout()
    svg = render_svg(session.derive_visible(), result)
    path = os.path.join(OUT, f"{name}.svg")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"{path}: {len(result.boxes)} boxes, {len(result.routes)} routes, {len(result.port_anchors)} ports")


s = Session(fixtures.lenet())
s.expand("backbone")
export("lenet", s)

s = Session(fixtures.port_design(), SessionOptions(module_threshold=3))
s.expand("Main")
s.expand("Main/network_train")
export("port_design", s)

s = Session(fixtures.iso_branches())
s.expand("block")
export("iso_branches", s)

s = Session(fixtures.resnet_like((8, 6, 5, 4)))
s.expand_to_depth(3)
export("resnet_like_depth3", s)

# stability: expanding one metanode keeps untouched siblings in place
s = Session(fixtures.bert_like())
s.expand("Main")
first = s.layout()
s.expand("Main/network_train")
second = s.layout()
moved = [p for p in first.boxes if p in second.boxes and first.boxes[p].y != second.boxes[p].y]
print(f"after expanding Main/network_train, {len(second.correspondence)} nodes kept their identity")
