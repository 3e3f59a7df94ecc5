"""Braiding a planon around a dislocation on the open 6x6x6 lattice.

One trip around the cut turns an electric planon into a magnetic one; a
second trip undoes it.  A loop that misses the cut changes nothing.
"""

import json

from orthoplex.defect import braid_planon, build_dislocation, loop_path
from orthoplex.lattice import LatticeShape

dm = build_dislocation(LatticeShape((6, 6, 6), False))
rep = dm.report()
print(f"removed {len(rep['removed_qubits'])} qubits, all generators commute: {dm.all_commute()}")
print(f"extra zero modes: {rep['zero_mode_count']}")

for label, path in [
    ("around once", loop_path(-4, 2, -2, 1, 1)),
    ("around twice", loop_path(-4, 2, -2, 1, 2)),
    ("away from cut", loop_path(0, 2, 1, 2, 1)),
]:
    v = braid_planon(dm, path)
    print(f"{label:>14}: {v.type_before} -> {v.type_after}  crossings {v.crossings}")

print(json.dumps(braid_planon(dm, loop_path(-4, 2, -2, 1, 1)).to_json(), indent=1)[:400])
