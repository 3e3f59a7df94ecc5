"""Planon mobility in 3D: a lone B excitation only moves along z cleanly."""

from collections import Counter

from orthoplex.dynamics import mobility_survey
from orthoplex.lattice import LatticeShape
from orthoplex.model import build_model

m = build_model(LatticeShape((4, 4, 4)))
tally = Counter()
for cell in m.z_cells:
    for out in mobility_survey(m, cell):
        tally["xyz"[out.axis], out.clean] += 1
for axis in "xyz":
    print(f"{axis}: clean {tally[axis, True]:4d}   dirty {tally[axis, False]:4d}")
