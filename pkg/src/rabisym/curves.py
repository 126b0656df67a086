"""Sampling the curves attached to p(x; g, d).

Three kinds of point sets are produced:

* ``hyper``: the curve y^2 = p(x; g, d) at fixed g, d;
* ``eigen_overlay``: real roots E of p(E; g, d) as g varies, for overlay on
  spectral graphs;
* ``param_curve``: the zero set of p(alpha; g, d) in the (g, d) plane.

Real roots are isolated with Sturm sequences in exact rational arithmetic,
then polished in floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .exactalg import PolyX
from .symmetry import solve_Q0

__all__ = [
    "CurveSamples",
    "sturm_sequence",
    "count_real_roots",
    "real_roots",
    "sample_hyperelliptic",
    "eigen_overlay",
    "param_curve",
    "WeierstrassMismatch",
    "WeierstrassReport",
    "depressed_model",
    "j_invariant",
    "weierstrass_check",
]


@dataclass
class CurveSamples:
    mode: str
    points: np.ndarray
    metadata: dict = field(default_factory=dict)
    segments: np.ndarray | None = None

    _HEADERS = {"hyper": "x,y", "eigen_overlay": "g,E", "param_curve": "g,delta"}

    def to_csv(self) -> str:
        lines = [self._HEADERS[self.mode]]
        for a, b in self.points:
            lines.append(f"{float(a):.17g},{float(b):.17g}")
        return "\n".join(lines) + "\n"

    def metadata_json(self) -> str:
        return json.dumps({"mode": self.mode, **self.metadata}, indent=2, sort_keys=True)


# --------------------------------------------------------------------------
# exact univariate root isolation (coefficient lists low -> high)


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _rem(a, b):
    r = list(a)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / b[-1]
        for i, y in enumerate(b):
            r[i + k] -= c * y
        r = _trim(r)
    return r


def _horner(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def sturm_sequence(coeffs) -> list[list[Fraction]]:
    p0 = _trim(Fraction(c) for c in coeffs)
    if not p0:
        raise ValueError("zero polynomial")
    seq = [p0]
    p1 = _trim(k * c for k, c in enumerate(p0) if k)
    if not p1:
        return seq
    seq.append(p1)
    while True:
        r = _rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _variations(seq, x) -> int:
    signs = [v > 0 for v in (_horner(p, x) for p in seq) if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_real_roots(coeffs, lo, hi) -> int:
    """Distinct real roots in the half-open interval (lo, hi]."""
    seq = sturm_sequence(coeffs)
    return _variations(seq, Fraction(lo)) - _variations(seq, Fraction(hi))


def real_roots(coeffs, lo, hi, tol: float = 1e-12) -> list[float]:
    """Distinct real roots of an exact polynomial in [lo, hi], ascending."""
    coeffs = _trim(Fraction(c) for c in coeffs)
    if len(coeffs) <= 1:
        return []
    lo, hi = Fraction(lo), Fraction(hi)
    seq = sturm_sequence(coeffs)
    roots: list[float] = []
    if _horner(coeffs, lo) == 0:
        roots.append(float(lo))
    stack = [(lo, hi, _variations(seq, lo) - _variations(seq, hi))]
    isolated = []
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            isolated.append((a, b))
            continue
        m = (a + b) / 2
        vm = _variations(seq, m)
        stack.append((a, m, _variations(seq, a) - vm))
        stack.append((m, b, vm - _variations(seq, b)))
    fl = [float(c) for c in reversed(coeffs)]
    for a, b in isolated:
        fa, fb = _horner(coeffs, a), _horner(coeffs, b)
        if fb == 0:
            roots.append(float(b))
            continue
        if fa * fb < 0:
            # shrink exactly until float endpoints are distinct and bracket the root
            while float(b) - float(a) > max(1e-3, 1e-3 * abs(float(b))):
                m = (a + b) / 2
                fm = _horner(coeffs, m)
                if fm == 0:
                    a = b = m
                    break
                if (fm > 0) == (fa > 0):
                    a, fa = m, fm
                else:
                    b = m
            if a == b:
                roots.append(float(a))
                continue
            f = lambda x: float(np.polyval(fl, x))  # noqa: E731
            fa_f, fb_f = f(float(a)), f(float(b))
            if fa_f * fb_f < 0:
                roots.append(brentq(f, float(a), float(b), xtol=tol, rtol=4 * np.finfo(float).eps))
                continue
        # even multiplicity or float sign lost: exact Sturm bisection to tol
        while b - a > tol:
            m = (a + b) / 2
            if _variations(seq, a) - _variations(seq, m) > 0:
                b = m
            else:
                a = m
        roots.append(float((a + b) / 2))
    return sorted(roots)


# --------------------------------------------------------------------------


def sample_hyperelliptic(p: PolyX, g, delta, x_range=(-10.0, 10.0), steps: int = 401) -> CurveSamples:
    """Points (x, +-sqrt(p(x))) on y^2 = p(x; g, d), plus branch points on y = 0."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    coeffs = p.specialize(Fraction(g), Fraction(delta))
    fl = [float(c) for c in reversed(coeffs)]
    xs = np.linspace(x_range[0], x_range[1], steps)
    pts = []
    for x in xs:
        v = float(np.polyval(fl, x))
        if v >= 0:
            y = math.sqrt(v)
            pts.append((x, y))
            if y:
                pts.append((x, -y))
    branch = real_roots(coeffs, Fraction(x_range[0]), Fraction(x_range[1]))
    pts.extend((r, 0.0) for r in branch)
    pts.sort()
    return CurveSamples(
        "hyper",
        np.array(pts, dtype=float).reshape(-1, 2),
        {
            "degree": p.degree(),
            "g": float(g),
            "delta": float(delta),
            "x_range": [float(x_range[0]), float(x_range[1])],
            "steps": steps,
            "branch_points": branch,
            "branch_tol": 1e-12,
        },
    )


def eigen_overlay(p: PolyX, delta, g_grid, E_range=(-30.0, 10.0)) -> CurveSamples:
    """Real roots E of p(E; g, d) in E_range for each g of the grid."""
    pts = []
    for g in g_grid:
        coeffs = p.specialize(Fraction(float(g)), Fraction(delta))
        for r in real_roots(coeffs, Fraction(E_range[0]), Fraction(E_range[1])):
            pts.append((float(g), r))
    return CurveSamples(
        "eigen_overlay",
        np.array(pts, dtype=float).reshape(-1, 2),
        {
            "degree": p.degree(),
            "delta": float(delta),
            "E_range": [float(E_range[0]), float(E_range[1])],
            "n_g": len(list(g_grid)),
        },
    )


def _polish(f, a: np.ndarray, b: np.ndarray, iters: int = 60) -> np.ndarray:
    # vectorised bisection between points a and b with f(a), f(b) of opposite sign
    fa = f(a[:, 0], a[:, 1])
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(m[:, 0], m[:, 1])
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left[:, None], m, a)
        fa = np.where(left, fm, fa)
        b = np.where(left[:, None], b, m)
    return 0.5 * (a + b)


def param_curve(
    ell: int,
    alpha=0,
    g_range=(0.0, 2.0),
    delta_range=(0.0, 2.0),
    resolution=(400, 400),
) -> CurveSamples:
    """Zero set of p_{l/2}(alpha; g, d) by marching squares over a (g, d) grid.

    Each crossing on a grid edge is polished by bisection along that edge;
    ``segments`` pairs crossings that share a cell.
    """
    sol = solve_Q0(Fraction(ell, 2))
    poly = sol.p.at_x(Fraction(alpha))
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    gs = np.linspace(g_range[0], g_range[1], resolution[0])
    ds = np.linspace(delta_range[0], delta_range[1], resolution[1])
    GG, DD = np.meshgrid(gs, ds, indexing="ij")
    F = poly.evaluate_array(GG, DD)
    pos = F > 0

    # edges: horizontal (i, j)-(i+1, j) and vertical (i, j)-(i, j+1)
    h_cross = pos[:-1, :] != pos[1:, :]
    v_cross = pos[:, :-1] != pos[:, 1:]
    h_idx = np.argwhere(h_cross)
    v_idx = np.argwhere(v_cross)
    a = np.concatenate([np.c_[gs[h_idx[:, 0]], ds[h_idx[:, 1]]], np.c_[gs[v_idx[:, 0]], ds[v_idx[:, 1]]]])
    b = np.concatenate(
        [np.c_[gs[h_idx[:, 0] + 1], ds[h_idx[:, 1]]], np.c_[gs[v_idx[:, 0]], ds[v_idx[:, 1] + 1]]]
    )
    corner_values = np.concatenate(
        [
            np.c_[F[h_idx[:, 0], h_idx[:, 1]], F[h_idx[:, 0] + 1, h_idx[:, 1]]],
            np.c_[F[v_idx[:, 0], v_idx[:, 1]], F[v_idx[:, 0], v_idx[:, 1] + 1]],
        ]
    )
    points = _polish(poly.evaluate_array, a, b) if len(a) else np.zeros((0, 2))

    edge_id = {}
    for k, (i, j) in enumerate(h_idx):
        edge_id[("h", int(i), int(j))] = k
    off = len(h_idx)
    for k, (i, j) in enumerate(v_idx):
        edge_id[("v", int(i), int(j))] = off + k

    segments = []
    for i in range(len(gs) - 1):
        for j in range(len(ds) - 1):
            # cell edges in ring order: bottom, right, top, left
            ring = [("h", i, j), ("v", i + 1, j), ("h", i, j + 1), ("v", i, j)]
            hit = [edge_id[e] for e in ring if e in edge_id]
            if len(hit) == 2:
                segments.append(hit)
            elif len(hit) == 4:
                centre = 0.25 * (F[i, j] + F[i + 1, j] + F[i, j + 1] + F[i + 1, j + 1])
                # join around the corner whose sign differs from the centre
                if (centre > 0) == pos[i, j]:
                    segments += [[hit[0], hit[1]], [hit[2], hit[3]]]
                else:
                    segments += [[hit[3], hit[0]], [hit[1], hit[2]]]

    width = max((g_range[1] - g_range[0]) / (resolution[0] - 1), (delta_range[1] - delta_range[0]) / (resolution[1] - 1))
    return CurveSamples(
        "param_curve",
        points,
        {
            "ell": ell,
            "alpha": str(Fraction(alpha)),
            "g_range": [float(g_range[0]), float(g_range[1])],
            "delta_range": [float(delta_range[0]), float(delta_range[1])],
            "resolution": list(resolution),
            "polish": "bisection, 60 halvings of the grid edge",
            # bisection stops at float resolution well before 60 halvings
            "polish_width": max(width * 2.0**-60, float(np.finfo(float).eps) * max(map(abs, (*g_range, *delta_range)))),
            "corner_values": corner_values.tolist(),
        },
        np.array(segments, dtype=int).reshape(-1, 2),
    )


# --------------------------------------------------------------------------
# the l = 3 curve as an elliptic curve


class WeierstrassMismatch(ArithmeticError):
    pass


def depressed_model(cubic) -> tuple[Fraction, Fraction]:
    """(A, B) with y^2 = cubic(x) isomorphic to Y^2 = T^3 + A T + B.

    With a3 the leading coefficient, X = a3 x and Y = a3 y give a monic
    cubic in X; the shift X = T - a2/3 removes the square term.
    """
    a0, a1, a2, a3 = (Fraction(c) for c in cubic)
    if a3 == 0:
        raise ValueError("not a cubic")
    # Y^2 = X^3 + a2 X^2 + a1 a3 X + a0 a3^2
    b2, b1, b0 = a2, a1 * a3, a0 * a3 * a3
    s = b2 / 3
    A = b1 - 3 * s * s
    B = b0 - b1 * s + 2 * s**3
    return A, B


def j_invariant(A, B) -> Fraction:
    A, B = Fraction(A), Fraction(B)
    disc = 4 * A**3 + 27 * B**2
    if disc == 0:
        raise ZeroDivisionError("singular curve")
    return 1728 * 4 * A**3 / disc


@dataclass(frozen=True)
class WeierstrassReport:
    g: Fraction
    delta: Fraction
    model: tuple[Fraction, Fraction]
    target: tuple[Fraction, Fraction]
    j_model: Fraction
    j_target: Fraction
    discriminant_model: Fraction
    discriminant_target: Fraction
    coefficients_match: bool
    j_match: bool
    scale_u2: Fraction | None = None


    def summary(self) -> str:
        return (
            f"model  y^2 = x^3 + ({self.model[0]}) x + ({self.model[1]}), j = {self.j_model}\n"
            f"target y^2 = x^3 + ({self.target[0]}) x + ({self.target[1]}), j = {self.j_target}\n"
            f"coefficients match: {self.coefficients_match}; j-invariants match: {self.j_match}"
            + (f"; target = model scaled by u^2 = {self.scale_u2}" if self.scale_u2 is not None else "")
        )


def weierstrass_check(g=1, delta=1, strict: bool = False) -> WeierstrassReport:
    """Compare y^2 = p_{3/2}(x; g, d) against x^3 - 5184(4g^2 - d^2) x + 186624 d^2."""
    g, delta = Fraction(g), Fraction(delta)
    cubic = solve_Q0(Fraction(3, 2)).p.specialize(g, delta)
    A, B = depressed_model(cubic)
    At = -5184 * (4 * g**2 - delta**2)
    Bt = 186624 * delta**2
    jm, jt = j_invariant(A, B), j_invariant(At, Bt)
    # (A, B) -> (u^4 A, u^6 B) is the only freedom between short models
    u2 = None
    if jm == jt and A and B and At and Bt:
        u2 = (Bt / B) / (At / A)
    report = WeierstrassReport(
        g,
        delta,
        (A, B),
        (At, Bt),
        jm,
        jt,
        -16 * (4 * A**3 + 27 * B**2),
        -16 * (4 * At**3 + 27 * Bt**2),
        (A, B) == (At, Bt),
        jm == jt,
        u2,
    )
    if strict and not report.j_match:
        raise WeierstrassMismatch(report.summary())
    return report
