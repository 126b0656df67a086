"""The symmetry in a truncated Fock space: [H, J] = 0 and mu^2 = p(lambda)."""

import numpy as np

from rabisym import solve_Q0
from rabisym.fock import (
    commutator_norm_interior,
    find_level_crossings,
    joint_spectrum,
    represent_H,
    represent_J,
    spectral_sweep,
)

g, delta, N = 1.0, 1.0, 300
sol = solve_Q0("1/2")
H = represent_H(sol.eps, g, delta, N)
J = represent_J(sol, g, delta, N)
rep = commutator_norm_interior(H, J, margin=10)
print(f"interior ||[H, J]|| / (||H|| ||J||) = {rep.relative:.2e}")

# joint eigenpairs; mu^2 should equal p(lambda)
print("lambda            mu                |mu^2 - p(lambda)|")
for e in joint_spectrum(sol, g, delta, N, count=8):
    print(f"{e.lam:16.12f}  {e.mu:16.12f}  {e.p_residual:.1e}")

# lowest levels across g, with an N -> 2N check
table = spectral_sweep("1/2", delta, np.linspace(0, 2, 5), N=150, k=4)
print(table.to_csv(), end="")
print("N -> 2N max change:", table.metadata["convergence_max_abs_diff"])

# half-integer bias allows level crossings
best = min(find_level_crossings("1/2", delta, np.linspace(0.3, 0.7, 9), N=150, k=6), key=lambda c: c.gap)
print(f"crossing of levels {best.level + 1} and {best.level + 2} near g = {best.g:.6f}, gap {best.gap:.1e}")
