"""Hidden symmetry of the asymmetric Rabi Hamiltonian at half-integer bias.

The Hamiltonian is taken in the form

    H = adag*a + d*sigma_x + g*(a + adag)*sigma_z + eps*sigma_z

and a commuting operator is sought as ``J = P Q`` with ``P`` the boson
parity and ``Q`` a 2x2 matrix of Weyl polynomials.  ``[H, P Q] = 0`` is
equivalent to the intertwining relation ``Ht Q - Q H = 0`` where
``Ht = P H P`` flips the sign of ``a`` and ``adag``.  Matching coefficients
of ``a^n adag^m`` in that relation gives four linear recurrences in the
coefficients of the four entries of ``Q``; their solution space, at a given
degree cap, is computed as an exact kernel over Q(g, d).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactalg import ZERO, G, D, MatrixRF, PolyGD, PolyX, RatFuncGD, kernel
from .weyl import NUMBER, Matrix2Weyl, WeylPoly, mat_mul, parity_conj

__all__ = [
    "NotHalfInteger",
    "SolverDegenerate",
    "ResidualNonzero",
    "ModelParams",
    "SymmetrySolution",
    "parse_eps",
    "build_H",
    "build_Htilde",
    "coefficient_labels",
    "assemble_system",
    "solve_Q0",
    "commutator_residual",
    "solution_space_dim",
    "compute_J_squared",
    "polynomial_in_H",
    "extract_p",
    "p_constant_check",
]

COMPONENTS = ("alpha", "beta", "gamma", "delta")


class NotHalfInteger(ValueError):
    """The bias is not in (1/2)Z, so no polynomial symmetry exists."""


class SolverDegenerate(RuntimeError):
    """The degree-l solution space does not have dimension one."""


class ResidualNonzero(ArithmeticError):
    """J^2 could not be matched exactly by a polynomial in H."""


def parse_eps(value) -> Fraction:
    """Exact bias from an int, Fraction or ``"p/q"`` string; floats are refused."""
    if isinstance(value, float):
        raise TypeError("the bias must be given exactly, not as a float")
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"the bias must be an exact rational 'p/q', got {value!r}")
        return Fraction(text)
    return Fraction(value)


@dataclass(frozen=True)
class ModelParams:
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", parse_eps(self.eps))

    @property
    def is_half_integer(self) -> bool:
        return (2 * self.eps).denominator == 1

    @property
    def ell(self) -> int:
        if not self.is_half_integer:
            raise NotHalfInteger(f"eps = {self.eps} is not a half-integer")
        return int(abs(2 * self.eps))


def build_H(eps) -> Matrix2Weyl:
    eps = parse_eps(eps)
    coupling = WeylPoly({(1, 0): G, (0, 1): G})
    return Matrix2Weyl(
        NUMBER + coupling + eps,
        WeylPoly.scalar(D),
        WeylPoly.scalar(D),
        NUMBER - coupling - eps,
    )


def build_Htilde(eps) -> Matrix2Weyl:
    return build_H(eps).map(parity_conj)


def coefficient_labels(cap: int) -> list[tuple[str, int, int]]:
    """Unknowns of the degree-capped system, as ``(component, n, m)``."""
    monos = [(n, deg - n) for deg in range(cap + 1) for n in range(deg, -1, -1)]
    return [(comp, n, m) for comp in COMPONENTS for n, m in monos]


def assemble_system(ell: int, eps) -> MatrixRF:
    """Coefficient equations of ``Ht Q - Q H = 0`` for entries of degree <= ell.

    Rows run over the four equation families at every ``(n, m)`` with
    ``n + m <= ell + 1``; columns follow :func:`coefficient_labels`.
    """
    if ell < 0:
        raise ValueError("degree cap must be nonnegative")
    eps = parse_eps(eps)
    labels = coefficient_labels(ell)
    index = {lab: k for k, lab in enumerate(labels)}

    def add(row, comp, n, m, coeff):
        k = index.get((comp, n, m))
        if k is not None and coeff:
            row[k] = row.get(k, ZERO) + coeff

    rows = []
    monos = [(n, deg - n) for deg in range(ell + 2) for n in range(deg, -1, -1)]
    for n, m in monos:
        # alpha family
        r: dict = {}
        add(r, "alpha", n, m, PolyGD.const(m - n))
        add(r, "alpha", n - 1, m, -2 * G)
        add(r, "alpha", n, m - 1, -2 * G)
        add(r, "alpha", n, m + 1, (m + 1) * G)
        add(r, "alpha", n + 1, m, (n + 1) * G)
        add(r, "gamma", n, m, D)
        add(r, "beta", n, m, -D)
        rows.append(r)
        # beta family
        r = {}
        add(r, "beta", n, m, PolyGD.const(2 * eps - (n - m)))
        add(r, "beta", n, m + 1, -(m + 1) * G)
        add(r, "beta", n + 1, m, (n + 1) * G)
        add(r, "delta", n, m, D)
        add(r, "alpha", n, m, -D)
        rows.append(r)
        # gamma family
        r = {}
        add(r, "gamma", n, m, PolyGD.const(-2 * eps - (n - m)))
        add(r, "gamma", n, m + 1, (m + 1) * G)
        add(r, "gamma", n + 1, m, -(n + 1) * G)
        add(r, "alpha", n, m, D)
        add(r, "delta", n, m, -D)
        rows.append(r)
        # delta family
        r = {}
        add(r, "delta", n, m, PolyGD.const(m - n))
        add(r, "delta", n - 1, m, 2 * G)
        add(r, "delta", n, m - 1, 2 * G)
        add(r, "delta", n, m + 1, -(m + 1) * G)
        add(r, "delta", n + 1, m, -(n + 1) * G)
        add(r, "beta", n, m, D)
        add(r, "gamma", n, m, -D)
        rows.append(r)
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    rows = [r for r in rows if r]
    return MatrixRF.from_sparse(rows, len(labels), col_labels=labels)


def vector_to_matrix(vec, labels) -> Matrix2Weyl:
    parts: dict[str, dict] = {c: {} for c in COMPONENTS}
    for (comp, n, m), v in zip(labels, vec):
        if v:
            parts[comp][(n, m)] = v
    return Matrix2Weyl(*(WeylPoly(parts[c]) for c in COMPONENTS))


def solution_space_dim(ell_cap: int, eps) -> int:
    """Dimension over Q(g, d) of solutions with entries of degree <= ell_cap."""
    ModelParams(eps).ell  # raises NotHalfInteger
    return len(kernel(assemble_system(ell_cap, eps)))


def commutator_residual(Q: Matrix2Weyl, eps) -> Matrix2Weyl:
    """``Ht Q - Q H``; zero exactly when ``P Q`` commutes with ``H``."""
    return mat_mul(build_Htilde(eps), Q) - mat_mul(Q, build_H(eps))


@dataclass(frozen=True)
class SymmetrySolution:
    eps: Fraction
    ell: int
    Q0: Matrix2Weyl
    p: PolyX

    def to_json(self) -> str:
        eps = self.eps
        payload = {
            "ell": self.ell,
            "eps": f"{eps.numerator}/{eps.denominator}",
            "Q0": self.Q0.to_strings(),
            "p": str(self.p),
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SymmetrySolution":
        data = json.loads(text)
        return cls(
            eps=parse_eps(data["eps"]),
            ell=int(data["ell"]),
            Q0=Matrix2Weyl.from_strings(data["Q0"]),
            p=PolyX.parse(data["p"]),
        )


def _normalize_Q0(vec: list[PolyGD], labels, eps: Fraction, ell: int) -> Matrix2Weyl:
    # the beta entry's top monomial is a^l for eps >= 0 and adag^l for eps < 0
    key = ("beta", ell, 0) if eps >= 0 else ("beta", 0, ell)
    pivot = vec[labels.index(key)]
    if not pivot:
        raise SolverDegenerate(f"beta coefficient {key[1:]} vanishes in the kernel vector")
    target = (2 * G) ** ell
    scaled = []
    for v in vec:
        if not v:
            scaled.append(ZERO)
            continue
        r = RatFuncGD(v * target, pivot)
        if not r.is_polynomial():
            raise SolverDegenerate(f"normalized coefficient {r} is not a polynomial")
        scaled.append(r.as_poly())
    return vector_to_matrix(scaled, labels)


@lru_cache(maxsize=32)
def _solve_cached(eps: Fraction) -> SymmetrySolution:
    ell = ModelParams(eps).ell
    M = assemble_system(ell, eps)
    basis = kernel(M)
    if len(basis) != 1:
        raise SolverDegenerate(f"expected a one-dimensional solution space, found {len(basis)}")
    Q0 = _normalize_Q0(basis[0], M.col_labels, eps, ell)
    p = extract_p_from(Q0, eps, ell)
    return SymmetrySolution(eps=eps, ell=ell, Q0=Q0, p=p)


def solve_Q0(eps) -> SymmetrySolution:
    """Minimal-degree polynomial solution, scaled so beta's top coefficient is (2g)^l."""
    return _solve_cached(parse_eps(eps))


def compute_J_squared(sol: SymmetrySolution) -> Matrix2Weyl:
    return mat_mul(sol.Q0.map(parity_conj), sol.Q0)


def _flatten(X: Matrix2Weyl) -> dict:
    out = {}
    for pos, e in enumerate(X.entries()):
        for (n, m), c in e.terms.items():
            out[(pos, n, m)] = c
    return out


def polynomial_in_H(X: Matrix2Weyl, eps, max_power: int) -> PolyX | None:
    """Exact ``c_k`` with ``X = sum_k c_k H^k``, or ``None`` if no such c_k exist.

    Coefficients of every entry and monomial are matched, which is a linear
    system over Q(g, d) in the unknowns ``c_0..c_max_power``.
    """
    H = build_H(eps)
    powers = [Matrix2Weyl.identity()]
    for _ in range(max_power):
        powers.append(mat_mul(powers[-1], H))
    columns = [_flatten(P) for P in powers] + [_flatten(X)]
    keys = sorted(set().union(*columns))
    rows = []
    for key in keys:
        rows.append({c: col[key] for c, col in enumerate(columns) if key in col})
    M = MatrixRF.from_sparse(rows, len(columns))
    basis = kernel(M)
    # at most one kernel vector: the H^k are linearly independent
    if len(basis) != 1 or not basis[0][-1]:
        return None
    v = basis[0]
    last = v[-1]
    coeffs = []
    for c in v[:-1]:
        r = RatFuncGD(-c, last)
        if not r.is_polynomial():
            # coefficient in Q(g, d) but not Q[g, d]; surfaced to the caller
            raise ResidualNonzero(f"coefficient {r} is not a polynomial in g, d")
        coeffs.append(r.as_poly())
    return PolyX(coeffs)


def extract_p_from(Q0: Matrix2Weyl, eps, ell: int) -> PolyX:
    J2 = mat_mul(Q0.map(parity_conj), Q0)
    p = polynomial_in_H(J2, eps, ell)
    if p is None:
        raise ResidualNonzero("J^2 is not a polynomial in H of degree <= l")
    H = build_H(eps)
    acc = Matrix2Weyl.of()
    power = Matrix2Weyl.identity()
    for c in p.coeffs:
        acc = acc + power.scale(c)
        power = mat_mul(power, H)
    if not (acc - J2).is_zero():
        raise ResidualNonzero("reconstructed polynomial does not reproduce J^2")
    return p


def extract_p(sol: SymmetrySolution) -> PolyX:
    return extract_p_from(sol.Q0, sol.eps, sol.ell)


def p_constant_check(sol: SymmetrySolution, alpha) -> PolyGD:
    """``p(alpha; g, d)`` as an element of Q[g, d]."""
    return sol.p.at_x(alpha)


