"""Exact hidden-symmetry operators of the asymmetric quantum Rabi model."""

from .exactalg import D, G, MatrixRF, PolyGD, PolyX, RatFuncGD, Rational, kernel, poly_arith, poly_gcd
from .weyl import Matrix2Weyl, WeylPoly, adjoint, mat_mul, parity_conj, reorder, weyl_mul
from .symmetry import (
    ModelParams,
    NotHalfInteger,
    ResidualNonzero,
    SolverDegenerate,
    SymmetrySolution,
    assemble_system,
    build_H,
    build_Htilde,
    commutator_residual,
    compute_J_squared,
    extract_p,
    p_constant_check,
    solution_space_dim,
    solve_Q0,
)

__version__ = "0.1.0"

__all__ = [
    "D",
    "G",
    "MatrixRF",
    "PolyGD",
    "PolyX",
    "RatFuncGD",
    "Rational",
    "kernel",
    "poly_arith",
    "poly_gcd",
    "Matrix2Weyl",
    "WeylPoly",
    "adjoint",
    "mat_mul",
    "parity_conj",
    "reorder",
    "weyl_mul",
    "ModelParams",
    "NotHalfInteger",
    "ResidualNonzero",
    "SolverDegenerate",
    "SymmetrySolution",
    "assemble_system",
    "build_H",
    "build_Htilde",
    "commutator_residual",
    "compute_J_squared",
    "extract_p",
    "p_constant_check",
    "solution_space_dim",
    "solve_Q0",
]
