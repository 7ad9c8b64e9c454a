#!/usr/bin/env python3
"""Tour of the 16-function benchmark registry.

Prints each function's box, dimensionality class, known global minimum, and
hardness percentage, then verifies the minimum at a published minimizer.
"""

import numpy as np

from bsalab import registry

print(f"{'id':<4} {'name':<15} {'box':<16} {'dim':<4} {'hardness':<9} "
      f"{'min':>13}  check at a known minimizer")
for f in registry():
    dims = "n" if f.scalable else "2"
    pt = f.min_points(2)[0]
    val = float(f(pt[None, :])[0])
    err = abs(val - f.min_value(2))
    print(f"{f.id:<4} {f.name:<15} [{f.low:g}, {f.up:g}]".ljust(42)
          + f"{dims:<4} {f.hardness_pct:<9.2f} {f.min_value(2):>13.6g}  "
          f"f({np.array2string(pt, precision=4)}) off by {err:.1e}")

# scalable functions keep their minimum at any dimensionality
print("\nRastrigin minimum across dimensions:")
ras = next(f for f in registry() if f.name == "Rastrigin")
for d in (2, 10, 30, 60):
    print(f"  D={d:<3} f(0,...,0) = {float(ras(np.zeros((1, d)))[0]):g}")
