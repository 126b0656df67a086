"""y^2 = p_{3/2}(x) is an elliptic curve; compare with a Weierstrass model."""

from rabisym.curves import WeierstrassMismatch, weierstrass_check

report = weierstrass_check(1, 1)
print(report.summary())

# the j-invariant ties the two models only at g = Delta = 1
try:
    weierstrass_check(2, 1, strict=True)
except WeierstrassMismatch as exc:
    print("g = 2:", exc)
