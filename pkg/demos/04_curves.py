"""Curves attached to p: y^2 = p(x), roots against eigenvalues, p(0) = 0 in the (g, Delta) plane."""

import numpy as np

from rabisym import solve_Q0
from rabisym.curves import eigen_overlay, param_curve, sample_hyperelliptic
from rabisym.fock import _lowest

p = solve_Q0("3/2").p

# y^2 = p(x; 1, 1) sampled on a grid, both branches
hyper = sample_hyperelliptic(p, 1, 1, x_range=(-6, 2), steps=9)
print("branch points:", hyper.metadata["branch_points"])
print(hyper.to_csv(), end="")

# real roots of p(.; g, 1) next to the lowest eigenvalues of H
overlay = eigen_overlay(p, 1, [4.0], E_range=(-40, 10))
print("roots at g = 4:", [round(float(E), 6) for _, E in overlay.points])
print("levels at g = 4:", np.round(_lowest("3/2", 4.0, 1.0, 300, 3), 6))

# zero set of the constant term of p for l = 4 in the (g, Delta) plane
curve = param_curve(4, alpha=0, g_range=(0, 2), delta_range=(0, 2), resolution=80)
print(f"param curve: {len(curve.points)} points, {len(curve.segments)} segments")
print(curve.to_csv().splitlines()[:4])
