"""Ground-state degeneracy of the 3D orthoplex code.

The number of logical qubits depends on the two in-plane sizes only
through their gcd, so it jumps up and down as Lx grows.
"""

from math import gcd

from orthoplex.analysis import gsd_scan
from orthoplex.lattice import LatticeShape

shapes = [LatticeShape((lx, ly, lz)) for lx in range(2, 9) for ly in (4, 6) for lz in (2, 3)]
print(f"{'shape':>12}  {'n':>5}  {'k':>3}  4*gcd")
for r in gsd_scan(shapes, workers=4):
    lx, ly, _ = r.sizes
    print(f"{str(r.sizes):>12}  {r.n:5d}  {r.k:3d}  {4 * gcd(lx, ly):5d}")
