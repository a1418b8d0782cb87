"""Functional-inequality checks on random smooth fields.

Three flavors:

* the constant-1 interpolation inequality (a pure Hoelder estimate, so the
  discrete ratio must never exceed 1),
* the weighted Poincare inequality with the ((p+1)/p)^2 constant, whose pass
  threshold depends on the kernel normalization c_d (the ratio scales
  exactly as 1/c_d),
* the sup-bound homogeneity ratios, invariant under mass scaling by exact
  exponent algebra.
"""

import numpy as np

from landaulab.functionals import (check_interpolation_star,
                                   check_poincare_gks, lemma21_ratios)
from landaulab.grid import gaussian, make_grid, random_bumps
from landaulab.kernel import build_kernel_table, compute_A, compute_divA

grid = make_grid(48, 16.0)
table = build_kernel_table(grid)

print("interpolation with constant exactly 1 (d=3, p=2, q=3):")
worst = 0.0
for seed in range(25):
    g = random_bumps(grid, seed=seed)
    worst = max(worst, check_interpolation_star(grid, g, 2.0, 3.0).ratio)
print(f"  worst ratio over 25 random fields: {worst:.4f}  (must be <= 1)")

print("weighted Poincare sweep (Gaussian, mass 10):")
u = gaussian(grid, 10.0, 1.0)
A = compute_A(u, table)
sweep = (1.0 / (4 * np.pi), 1.0 / (8 * np.pi), 1.0)
rep = check_poincare_gks(grid, u, 2.0, A, table.c_d, sweep)
for c, r in rep.extra["sweep"].items():
    print(f"  c_d = {float(c):.5f}  ratio = {r:.4f}")
print(f"  smallest c_d with ratio <= 1: {rep.extra['c_d_star']:.5f}")

print("sup-bound ratios, mass-scaling invariance (p=4):")
divA = compute_divA(u, table)
base = lemma21_ratios(grid, u, 4.0, A, divA)
scaled = lemma21_ratios(grid, 3.0 * u, 4.0, 3.0 * A, 3.0 * divA)
for key in ("A", "divA"):
    print(f"  {key}: ratio {base[key].ratio:.4f} -> scaled "
          f"{scaled[key].ratio:.4f}")
