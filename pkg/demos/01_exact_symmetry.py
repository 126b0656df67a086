"""Hidden symmetry of the asymmetric Rabi model, solved exactly."""

from fractions import Fraction

from rabisym import commutator_residual, compute_J_squared, solution_space_dim, solve_Q0

# eps = 1/2: the smallest nontrivial case
sol = solve_Q0("1/2")
print("Q0 entries (A = a, Ad = a^dagger, d = Delta):")
for name, entry in zip(("11", "12", "21", "22"), sol.Q0.to_strings()):
    print(f"  Q[{name}] = {entry}")
print("residual Ht Q - Q H is zero:", commutator_residual(sol.Q0, sol.eps).is_zero())
print("J^2 = p(H) with p =", sol.p)

# J^2 commutes with H and is a polynomial in H of degree l
J2 = compute_J_squared(sol)
print("J^2 degree in a, a^dagger:", J2.degree())

# the solution space grows as a staircase with the degree cap
print("dims for caps 0..5:", [solution_space_dim(c, "1/2") for c in range(6)])

# larger l: degree and size of p
for k in range(2, 7):
    s = solve_Q0(Fraction(k, 2))
    print(f"eps = {s.eps}: l = {s.ell}, terms in p = {sum(len(c.terms) for c in s.p.coeffs)}")

# eps = -eps gives the same p
print("p_{-3/2} == p_{3/2}:", solve_Q0("-3/2").p == solve_Q0("3/2").p)

# non half-integer bias: no polynomial solution
try:
    solve_Q0("1/3")
except ValueError as exc:
    print("eps = 1/3:", exc)
