"""A short tour of the two weights and the bounds the estimates rely on.

Run:  python demos/weights_tour.py
"""

import math

import numpy as np

from eulerblowup.bessel_reference import k0_reference
from eulerblowup.radial import RadialGrid, integrate_weighted
from eulerblowup.weights import LARGE_R_DECAY_CONSTANT, k0, k0_prime, k0_second, w3, w3_prime, w3_second

# K0 from its cosh integral, next to an independent series/asymptotic evaluation.
print("   r        K0(r) integral     K0(r) series       rel diff")
for r in (0.01, 0.1, 1.0, 5.0, 20.0):
    a, b = k0(r), k0_reference(r)
    print(f"{r:6.2f}  {a:.15e}  {b:.15e}  {abs(a / b - 1):.1e}")

# Both weights satisfy Delta w = w away from the origin.
r = np.linspace(0.05, 30.0, 7)
print("\nradial Laplacian minus weight (should vanish):")
print("  3D:", np.abs(w3_second(r) + 2 / r * w3_prime(r) - w3(r)).max())
print("  2D:", np.abs(k0_second(r) + k0_prime(r) / r - k0(r)).max())

# Small-r and large-r control of K0 and K0'.
small = np.geomspace(1e-5, 0.5, 400, endpoint=False)
large = np.linspace(1.0, 50.0, 400)[1:]
print("\nmax r K0(r) / 3 on (0, 1/2):     ", (small * k0(small) / 3).max())
print("max r^2 |K0'(r)| on (0, 1/2):      ", (small**2 * np.abs(k0_prime(small))).max())
print("max r^2 K0, r^2 |K0'| on (1, 50): ",
      (large**2 * k0(large)).max(), (large**2 * np.abs(k0_prime(large))).max(),
      f"(bound {LARGE_R_DECAY_CONSTANT})")

# The normalizations entering the convexity constants.
grid = RadialGrid(40.0, 4000)
ones = np.ones(grid.n_cells)
print("\nint exp(-r)/r dx over R^3 / 4 pi =", integrate_weighted(ones, w3, grid, 3) / (4 * math.pi))
print("int K0 dx over R^2 / 2 pi        =", integrate_weighted(ones, k0, grid, 2) / (2 * math.pi))
