"""Walk through the flat torus: one vertex cycle, four right angles, a lattice of tiles.

Run: python3 demos/01_square_torus.py
"""

import numpy as np

from tessella import load, verify_all
from tessella.develop import enumerate_translates, format_word, presentation
from tessella.verify import angle_terms

prob = load("square_torus")
P, fp = prob.polyhedron, prob.pairing

report = verify_all(P, fp)
print("verdict:", report.verdict)

# the four corners are glued into a single point of the torus
(cycle,) = report.family
print(f"vertex cycle: n={cycle.n}, k={cycle.multiplicity}")
print("  " + cycle.arrow())
for term, t in zip(cycle.terms, angle_terms(P, fp, cycle, P.edge(cycle.base_edge).point)):
    print(f"  angle between {t.faces[0]} and {t.faces[1]} at {term.edge}: {t.alpha / np.pi:.3f} pi")

# translates by words of length <= 2 are the 13 lattice points with |i| + |j| <= 2
dev = enumerate_translates(P, fp, 2)
print(f"{len(dev)} translates at depth 2:")
print("  " + ", ".join(format_word(fp, t.word) or "1" for t in dev.translates))

print("presentation:", presentation(P, fp, report.family))
