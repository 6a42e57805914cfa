"""The regular octagon with angles pi/4 and the gluing a b a^-1 b^-1 c d c^-1 d^-1.

Checks the hypotheses, develops two shells of tiles around the octagon and
writes a Poincare-disk drawing to genus2.svg.

Run: python3 demos/02_genus2_surface.py [output.svg]
"""

import sys

import numpy as np

from tessella import load, verify_all
from tessella.develop import covering_check, enumerate_translates, export_svg, overlap_check, presentation

out = sys.argv[1] if len(sys.argv) > 1 else "genus2.svg"
prob = load("octagon_genus2")
P, fp = prob.polyhedron, prob.pairing

R = P.space.distance(P.space.origin(), P.vertices[0])
print(f"circumradius {R:.6f}  (cosh R = cot^2(pi/8) = {1 / np.tan(np.pi / 8) ** 2:.6f})")

report = verify_all(P, fp)
for c in report.components():
    print(f"  {c.name:<11} {c.status}")
(cycle,) = report.family
print(f"all eight vertices form one cycle, total angle {report.condition2.details[0]['total'] / np.pi:.6f} pi")

# the group has exponential growth: 9, 65, 457 ... tiles
for depth in (1, 2, 3):
    print(f"depth {depth}: {len(enumerate_translates(P, fp, depth))} tiles")

dev = enumerate_translates(P, fp, 2)
print("overlap:", overlap_check(dev, P, 32).status)
print("covering:", covering_check(dev, P, samples=128, family=report.family).message)
export_svg(dev, P, out, "poincare-disk")
print("drawing written to", out)

pres = presentation(P, fp, report.family)
print("presentation:", pres)
