"""Truncated Fock-space numerics.

Operators are represented on the states |0>, ..., |N-1>; a 2x2 operator
matrix becomes a 2N x 2N block matrix ``[[X11, X12], [X21, X22]]``.  A
Weyl monomial of degree k is exact on the block of Fock indices below
``N - k``; every identity checked here is checked on such an interior block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .exactalg import PolyGD, PolyX
from .symmetry import SymmetrySolution, build_H, parse_eps
from .weyl import Matrix2Weyl, WeylPoly

__all__ = [
    "FockRep",
    "lowering_matrix",
    "represent",
    "represent_H",
    "represent_J",
    "parity_matrix",
    "interior_indices",
    "commutator_norm_interior",
    "CommutatorReport",
    "PairEntry",
    "joint_spectrum",
    "SpectralTable",
    "spectral_sweep",
    "LevelCrossing",
    "find_level_crossings",
    "EIGENSOLVER",
    "ReorderCheck",
    "reorder_oracle",
    "p_numeric",
]

EIGENSOLVER = f"scipy.linalg.eigh (LAPACK syevr), scipy {scipy.__version__}"
DEGENERACY_RTOL = 1e-8
EDGE_TOL = 1e-8


@dataclass(frozen=True)
class FockRep:
    """Numeric parameters of a truncated representation."""

    N: int
    g: float
    delta: float
    eps: float = 0.0

    def check_degree(self, degree: int) -> None:
        if self.N < 4 * (degree + 2):
            raise ValueError(f"N = {self.N} leaves no interior for degree {degree}")


def lowering_matrix(N: int) -> np.ndarray:
    if N < 2:
        raise ValueError("N must be at least 2")
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), k=1)


def parity_matrix(N: int) -> np.ndarray:
    """Boson parity diag((-1)^n) acting on both spin components."""
    p = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)
    return np.diag(np.concatenate([p, p]))


def _weyl_numeric(W: WeylPoly, g: float, delta: float, N: int, powers) -> np.ndarray:
    a_pow, ad_pow = powers
    out = np.zeros((N, N))
    for (n, m), c in W.terms.items():
        out += c.evaluate(g, delta) * (a_pow(n) @ ad_pow(m))
    return out


def _power_cache(N: int):
    a = lowering_matrix(N)
    ad = a.T.copy()
    cache_a = {0: np.eye(N)}
    cache_ad = {0: np.eye(N)}

    def a_pow(k):
        if k not in cache_a:
            cache_a[k] = a_pow(k - 1) @ a
        return cache_a[k]

    def ad_pow(k):
        if k not in cache_ad:
            cache_ad[k] = ad_pow(k - 1) @ ad
        return cache_ad[k]

    return a_pow, ad_pow


def represent(W, g: float, delta: float, N: int) -> np.ndarray:
    """Dense matrix of a WeylPoly (N x N) or Matrix2Weyl (2N x 2N)."""
    powers = _power_cache(N)
    if isinstance(W, PolyGD):
        W = WeylPoly.scalar(W)
    if isinstance(W, WeylPoly):
        return _weyl_numeric(W, g, delta, N, powers)
    if isinstance(W, Matrix2Weyl):
        blocks = [_weyl_numeric(e, g, delta, N, powers) for e in W.entries()]
        return np.block([[blocks[0], blocks[1]], [blocks[2], blocks[3]]])
    raise TypeError(f"cannot represent {type(W).__name__}")


def represent_H(eps, g: float, delta: float, N: int) -> np.ndarray:
    return represent(build_H(parse_eps(eps)), g, delta, N)


def represent_J(sol: SymmetrySolution, g: float, delta: float, N: int) -> np.ndarray:
    return parity_matrix(N) @ represent(sol.Q0, g, delta, N)


def interior_indices(N: int, margin: int) -> np.ndarray:
    """Indices of the 2N-dimensional space whose Fock label is below N - margin."""
    keep = np.arange(max(N - margin, 0))
    return np.concatenate([keep, keep + N])


@dataclass(frozen=True)
class CommutatorReport:
    absolute: float
    relative: float
    norm: str = "spectral"


def commutator_norm_interior(H: np.ndarray, J: np.ndarray, margin: int) -> CommutatorReport:
    """Spectral norm of [H, J] on the truncation interior, absolute and relative."""
    N = H.shape[0] // 2
    idx = interior_indices(N, margin)
    C = (H @ J - J @ H)[np.ix_(idx, idx)]
    absolute = float(np.linalg.norm(C, 2))
    scale = float(np.linalg.norm(H[np.ix_(idx, idx)], 2) * np.linalg.norm(J[np.ix_(idx, idx)], 2))
    return CommutatorReport(absolute, absolute / scale if scale else math.inf)


@dataclass(frozen=True)
class PairEntry:
    lam: float
    mu: float
    defect: float
    p_residual: float
    degenerate: bool = False


def _degenerate_groups(lam: np.ndarray) -> list[list[int]]:
    groups = []
    start = 0
    for k in range(1, len(lam) + 1):
        if k == len(lam) or abs(lam[k] - lam[k - 1]) >= DEGENERACY_RTOL * (1 + abs(lam[k - 1])):
            groups.append(list(range(start, k)))
            start = k
    return groups


def _interior_basis(V: np.ndarray, N: int, margin: int, tol: float) -> np.ndarray:
    """Orthonormal combinations of the columns of V that vanish near the cutoff.

    An interior level can be exactly degenerate with a spurious state living
    on the top Fock states; the eigensolver may then return any mixture of
    the two, so the group is rotated before the tail test.
    """
    tail = np.r_[V[N - margin : N], V[2 * N - margin :]]
    if V.shape[1] == 1:
        return V if np.linalg.norm(tail) <= tol else V[:, :0]
    _, s, vt = np.linalg.svd(tail)
    rank = int(np.sum(s > tol))
    return V @ vt[rank:].T


def joint_spectrum(
    sol: SymmetrySolution,
    g: float,
    delta: float,
    N: int,
    count: int = 50,
    margin: int | None = None,
    tail_tol: float = 1e-12,
    defect_tol: float = 1e-6,
) -> list[PairEntry]:
    """Common eigenpairs (lambda, mu) of H and J for the lowest interior levels.

    Eigenvalues of H that agree to ``DEGENERACY_RTOL`` are grouped and J is
    diagonalized inside the group, since there the eigenvectors returned
    by the eigensolver need not be eigenvectors of J.
    """
    if margin is None:
        margin = sol.Q0.degree() + 8
    H = represent_H(sol.eps, g, delta, N)
    J = represent_J(sol, g, delta, N)
    p_coeffs = sol.p.numeric(g, delta)[::-1]
    want = count + 40
    while True:
        hi = min(want, 2 * N)
        lam, vecs = scipy.linalg.eigh(H, subset_by_index=[0, hi - 1])
        groups = _degenerate_groups(lam)
        if hi < 2 * N:
            groups = groups[:-1]  # its partners may lie beyond the window
        entries = _pairs(groups, lam, vecs, H, J, N, margin, tail_tol, defect_tol, p_coeffs, count)
        if len(entries) >= count or hi == 2 * N:
            return entries[:count]
        want *= 2


def _pairs(groups, lam, vecs, H, J, N, margin, tail_tol, defect_tol, p_coeffs, count):
    entries = []
    for group in groups:
        V = _interior_basis(vecs[:, group], N, margin, tail_tol)
        degenerate = len(group) > 1
        if degenerate and V.shape[1] > 1:
            small = V.T @ J @ V
            _, rot = np.linalg.eigh(0.5 * (small + small.T))
            V = V @ rot
        for col in range(V.shape[1]):
            v = V[:, col]
            Jv = J @ v
            mu = float(v @ Jv)
            defect = float(np.linalg.norm(Jv - mu * v))
            if defect > defect_tol:
                continue
            lam_k = float(lam[group[0]] if not degenerate else v @ H @ v)
            pval = float(np.polyval(p_coeffs, lam_k))
            entries.append(
                PairEntry(lam_k, mu, defect, abs(mu * mu - pval) / (1 + abs(pval)), degenerate)
            )
        if len(entries) >= count:
            break
    return entries


@dataclass
class SpectralTable:
    g: np.ndarray
    levels: np.ndarray  # shape (len(g), k)
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        k = self.levels.shape[1]
        header = ",".join(["g"] + [f"lambda_{i + 1}" for i in range(k)])
        lines = [header]
        for gv, row in zip(self.g, self.levels):
            lines.append(",".join(format(float(x), ".17g") for x in (gv, *row)))
        return "\n".join(lines) + "\n"


def _lowest(eps, g: float, delta: float, N: int, k: int, margin: int = 10) -> np.ndarray:
    """k lowest eigenvalues whose eigenvectors do not reach the cutoff.

    At strong coupling the truncated matrix has spurious low-lying states
    living on the top Fock states; they are discarded by tail weight.
    """
    H = represent_H(eps, g, delta, N)
    want = k + 16
    while True:
        hi = min(want, 2 * N)
        lam, vecs = scipy.linalg.eigh(H, subset_by_index=[0, hi - 1])
        keep = []
        for group in _degenerate_groups(lam):
            V = _interior_basis(vecs[:, group], N, margin, EDGE_TOL)
            if V.shape[1] == len(group):
                keep += list(lam[group])
            elif V.shape[1]:
                # Rayleigh-Ritz on the interior part keeps the true splitting
                keep += list(np.linalg.eigvalsh(V.T @ H @ V))
        if len(keep) >= k:
            return np.sort(np.array(keep))[:k]
        if hi == 2 * N:
            raise ValueError(f"only {len(keep)} interior levels available at N = {N}")
        want *= 2


def spectral_sweep(
    eps, delta: float, g_grid, N: int = 300, k: int = 10, check_convergence: bool = True
) -> SpectralTable:
    """k lowest eigenvalues of H at every g, with an N -> 2N convergence probe."""
    eps = parse_eps(eps)
    g_grid = np.asarray(list(g_grid), dtype=float)
    levels = np.array([_lowest(eps, gv, delta, N, k) for gv in g_grid])
    meta = {
        "eps": f"{eps.numerator}/{eps.denominator}",
        "delta": delta,
        "N": N,
        "k": k,
        "eigensolver": EIGENSOLVER,
    }
    if check_convergence and len(g_grid):
        probe = sorted({0, len(g_grid) // 2, len(g_grid) - 1})
        diffs = [
            float(np.max(np.abs(_lowest(eps, g_grid[i], delta, 2 * N, k) - levels[i])))
            for i in probe
        ]
        meta["convergence_probe_g"] = [float(g_grid[i]) for i in probe]
        meta["convergence_max_abs_diff"] = max(diffs)
    return SpectralTable(g_grid, levels, meta)


@dataclass(frozen=True)
class LevelCrossing:
    level: int  # crossing between sorted levels `level` and `level + 1` (0-based)
    g: float
    gap: float


def find_level_crossings(
    eps, delta: float, g_grid, N: int = 300, k: int = 10, table: SpectralTable | None = None
) -> list[LevelCrossing]:
    """Local gap minima between adjacent levels, refined by bounded Brent search."""
    if table is None:
        table = spectral_sweep(eps, delta, g_grid, N=N, k=k, check_convergence=False)
    gs, levels = table.g, table.levels
    found = []
    for i in range(levels.shape[1] - 1):
        gap = levels[:, i + 1] - levels[:, i]
        for j in range(1, len(gs) - 1):
            if gap[j] <= gap[j - 1] and gap[j] <= gap[j + 1]:

                def f(gv, i=i):
                    ev = _lowest(eps, gv, delta, N, i + 2)
                    return ev[i + 1] - ev[i]

                res = minimize_scalar(
                    f, bounds=(gs[j - 1], gs[j + 1]), method="bounded", options={"xatol": 1e-13}
                )
                found.append(LevelCrossing(i, float(res.x), float(res.fun)))
    return found


def p_numeric(p: PolyX, g: float, delta: float):
    """Callable x -> p(x; g, delta) in double precision."""
    coeffs = p.numeric(g, delta)[::-1]
    return lambda x: np.polyval(coeffs, x)


@dataclass(frozen=True)
class ReorderCheck:
    m: int
    p: int
    max_dev: float
    passed: bool


def _int_power(M, k: int):
    out = np.eye(M.shape[0], dtype=object) * 1
    for _ in range(k):
        out = out.dot(M)
    return out


def reorder_oracle(max_power: int = 6, N: int = 40, tol: float = 1e-10) -> list[ReorderCheck]:
    """Compare reorder(m, p) with the product (adag)^m a^p of truncated Fock matrices.

    The products are formed exactly in the unnormalized basis x^n, where a
    is d/dx and adag is multiplication by x, so every entry is an integer.
    The basis change to |n> = x^n / sqrt(n!) is diagonal and commutes with
    truncation; deviations are reported in the orthonormal basis on the
    leading (N - m - p) block.
    """
    from .weyl import reorder

    a = np.zeros((N, N), dtype=object)
    ad = np.zeros((N, N), dtype=object)
    for n in range(1, N):
        a[n - 1, n] = n
        ad[n, n - 1] = 1
    a_pow = {k: _int_power(a, k) for k in range(max_power + 1)}
    ad_pow = {k: _int_power(ad, k) for k in range(max_power + 1)}
    fact = [math.factorial(n) for n in range(N)]
    out = []
    for m in range(max_power + 1):
        for p in range(max_power + 1):
            brute = ad_pow[m].dot(a_pow[p])
            canon = np.zeros((N, N), dtype=object)
            for (n1, m1), c in reorder(m, p).terms.items():
                canon = canon + int(c.constant_value()) * a_pow[n1].dot(ad_pow[m1])
            k = N - m - p
            dev = 0.0
            for i in range(max(k, 0)):
                for j in range(max(k, 0)):
                    diff = brute[i, j] - canon[i, j]
                    if diff:
                        dev = max(dev, abs(diff) * math.sqrt(fact[i] / fact[j]))
            out.append(ReorderCheck(m, p, dev, dev < tol))
    return out
