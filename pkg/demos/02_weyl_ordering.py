"""Canonical ordering in the Weyl algebra, checked against Fock matrices."""

from rabisym.fock import reorder_oracle
from rabisym.weyl import AD, NUMBER, A, WeylPoly, parity_conj, reorder, weyl_mul

print("a^dagger a       =", weyl_mul(AD, A))  # stored as a a^dagger - 1
print("a a^dagger       =", weyl_mul(A, AD))
print("(a^dagger)^2 a^2 =", reorder(2, 2))
print("n^2              =", weyl_mul(NUMBER, NUMBER))
print("P (a + a^dagger) P =", parity_conj(A + AD))

x = WeylPoly.parse("2*g^2 - 2*g*A")
print("parsed:", x, "| times a^dagger:", weyl_mul(x, AD))

# every reorder(m, p) against exact products of truncated matrices
checks = reorder_oracle(max_power=6, N=40)
print(f"{sum(c.passed for c in checks)}/{len(checks)} ordering identities hold,",
      f"max deviation {max(c.max_dev for c in checks):.1e}")
