"""Excitations in four dimensions: points, membranes and fragmentation.

A single X flips six B terms.  A membrane leaves a closed loop built from
diagonal and vertical segments.  Sliding each loop cell by a random amount
along the extra axis never breaks the loop apart once projected.
"""

import numpy as np

from orthoplex.dynamics import (
    MembraneSpec,
    fragment_loop,
    membrane_operator,
    project_and_classify,
    segment_profile,
    single_x_syndrome,
    syndrome,
)
from orthoplex.lattice import LatticeShape
from orthoplex.model import build_model

m4 = build_model(LatticeShape((4, 4, 4, 4)))
print("single X at (1,0,0,0) flips:", sorted(single_x_syndrome(m4, (1, 0, 0, 0)).violated_z))

big = build_model(LatticeShape((6, 6, 6, 2)))
loop = syndrome(big, membrane_operator(big, MembraneSpec.rectangle("x+y", 2, 3)))
prof = segment_profile(big, loop)
print(f"2x3 membrane: {loop.size} flipped cells, segments {prof.counts}")

spec = MembraneSpec.rectangle("x+y", 1, 1)
cells = sorted(fragment_loop(m4, spec, {}).original.violated_z)
rng = np.random.default_rng(7)
for trial in range(5):
    offsets = dict(zip(cells, (int(k) for k in rng.integers(0, 4, len(cells)))))
    res = fragment_loop(m4, spec, offsets)
    rep = project_and_classify(res.syndrome, 3, m4.shape.sizes)
    print(f"trial {trial}: size {res.syndrome.size}, components {rep.components}, "
          f"closed {rep.all_degree_two}")
