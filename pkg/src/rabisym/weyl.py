"""Weyl algebra Q[g, d][a, a+] in the ordering a^n (a+)^m.

A :class:`WeylPoly` stores ``{(n, m): PolyGD}`` where the key stands for the
operator ``a**n * adag**m`` with every annihilator to the left.  The
number operator ``adag*a`` therefore appears as ``a*adag - 1``.

Text form: ``A`` is the annihilator, ``Ad`` the creator, and terms are
sorted graded-lexicographically over ``(g, d, A, Ad)``, e.g.
``"2*g^2 - 2*g*A"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Mapping

from .exactalg import ZERO, PolyGD, format_terms, parse_terms

__all__ = [
    "WeylPoly",
    "Matrix2Weyl",
    "reorder",
    "weyl_mul",
    "adjoint",
    "parity_conj",
    "mat_mul",
]


@lru_cache(maxsize=None)
def _reorder_coeffs(m: int, p: int) -> tuple[tuple[int, int], ...]:
    # (adag)^m a^p = sum_k (-1)^k k! C(m,k) C(p,k) a^(p-k) adag^(m-k)
    return tuple(
        (k, (-1) ** k * factorial(k) * comb(m, k) * comb(p, k)) for k in range(min(m, p) + 1)
    )


class WeylPoly:
    """Immutable element of the Weyl algebra over Q[g, d]."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (n, m), c in (terms or {}).items():
            if n < 0 or m < 0:
                raise ValueError("negative power")
            c = PolyGD.coerce(c)
            if c:
                clean[(int(n), int(m))] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "WeylPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def scalar(cls, c) -> "WeylPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, n: int, m: int, c=1) -> "WeylPoly":
        return cls({(n, m): c})

    @classmethod
    def coerce(cls, x) -> "WeylPoly":
        return x if isinstance(x, WeylPoly) else cls.scalar(x)

    @property
    def terms(self) -> dict[tuple[int, int], PolyGD]:
        return dict(self._terms)

    def coeff(self, n: int, m: int) -> PolyGD:
        return self._terms.get((n, m), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        return max((n + m for n, m in self._terms), default=-1)

    def map_coeffs(self, f: Callable[[PolyGD], PolyGD]) -> "WeylPoly":
        return WeylPoly({k: f(c) for k, c in self._terms.items()})

    def __add__(self, other) -> "WeylPoly":
        other = WeylPoly.coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return WeylPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "WeylPoly":
        return WeylPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "WeylPoly":
        return self + (-WeylPoly.coerce(other))

    def __rsub__(self, other) -> "WeylPoly":
        return (-self) + other

    def __mul__(self, other) -> "WeylPoly":
        if isinstance(other, WeylPoly):
            return weyl_mul(self, other)
        c = PolyGD.coerce(other)
        return WeylPoly({k: v * c for k, v in self._terms.items()})

    def __rmul__(self, other) -> "WeylPoly":
        # scalars commute with everything
        c = PolyGD.coerce(other)
        return WeylPoly({k: c * v for k, v in self._terms.items()})

    def __pow__(self, k: int) -> "WeylPoly":
        out = WeylPoly.scalar(1)
        for _ in range(k):
            out = weyl_mul(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylPoly):
            try:
                other = WeylPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def _sorted_terms(self):
        flat = []
        for (n, m), c in self._terms.items():
            for (i, j), v in c.items():
                flat.append(((i, j, n, m), v))
        flat.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return flat

    def __str__(self) -> str:
        return format_terms(
            (v, (("g", i), ("d", j), ("A", n), ("Ad", m))) for (i, j, n, m), v in self._sorted_terms()
        )

    def __repr__(self) -> str:
        return f"WeylPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "WeylPoly":
        """Parse the canonical text form; factors must already be a-left ordered."""
        out: dict = {}
        body = text.replace(" ", "")
        for c, powers in parse_terms(text, ("g", "d", "A", "Ad")):
            key = (powers.get("A", 0), powers.get("Ad", 0))
            mono = (powers.get("g", 0), powers.get("d", 0))
            out.setdefault(key, {})
            out[key][mono] = out[key].get(mono, 0) + c
        # reject creators written left of annihilators
        for term in body.replace("-", "+").split("+"):
            factors = [f.split("^")[0] for f in term.split("*")]
            if "Ad" in factors and "A" in factors and factors.index("Ad") < factors.index("A"):
                raise ValueError(f"term {term!r} is not in a-left order")
        return cls({k: PolyGD(v) for k, v in out.items()})


A = WeylPoly.monomial(1, 0)
AD = WeylPoly.monomial(0, 1)
NUMBER = WeylPoly({(1, 1): 1, (0, 0): -1})


def reorder(m: int, p: int) -> WeylPoly:
    """Canonical form of ``adag**m * a**p``."""
    if m < 0 or p < 0:
        raise ValueError("powers must be nonnegative")
    return WeylPoly({(p - k, m - k): c for k, c in _reorder_coeffs(m, p)})


def weyl_mul(f: WeylPoly, h: WeylPoly) -> WeylPoly:
    out: dict[tuple[int, int], PolyGD] = {}
    for (n1, m1), c1 in f._terms.items():
        for (n2, m2), c2 in h._terms.items():
            c = c1 * c2
            if not c:
                continue
            for k, w in _reorder_coeffs(m1, n2):
                key = (n1 + n2 - k, m1 + m2 - k)
                term = c * w
                prev = out.get(key)
                out[key] = term if prev is None else prev + term
    return WeylPoly._raw({k: v for k, v in out.items() if v})


def adjoint(f: WeylPoly) -> WeylPoly:
    """Formal adjoint for real coefficients: c[n, m] -> c[m, n]."""
    return WeylPoly._raw({(m, n): c for (n, m), c in f._terms.items()})


def parity_conj(f: WeylPoly) -> WeylPoly:
    """Conjugation by exp(i pi adag a): a -> -a, adag -> -adag."""
    return WeylPoly._raw({(n, m): (-c if (n + m) % 2 else c) for (n, m), c in f._terms.items()})


@dataclass(frozen=True)
class Matrix2Weyl:
    """2x2 matrix with Weyl algebra entries."""

    e11: WeylPoly
    e12: WeylPoly
    e21: WeylPoly
    e22: WeylPoly

    @classmethod
    def of(cls, e11=0, e12=0, e21=0, e22=0) -> "Matrix2Weyl":
        return cls(*(WeylPoly.coerce(e) for e in (e11, e12, e21, e22)))

    @classmethod
    def identity(cls) -> "Matrix2Weyl":
        return cls.of(1, 0, 0, 1)

    @classmethod
    def sigma_x(cls) -> "Matrix2Weyl":
        return cls.of(0, 1, 1, 0)

    @classmethod
    def sigma_z(cls) -> "Matrix2Weyl":
        return cls.of(1, 0, 0, -1)

    def entries(self) -> tuple[WeylPoly, WeylPoly, WeylPoly, WeylPoly]:
        return (self.e11, self.e12, self.e21, self.e22)

    def map(self, f: Callable[[WeylPoly], WeylPoly]) -> "Matrix2Weyl":
        return Matrix2Weyl(*(f(e) for e in self.entries()))

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries())

    def degree(self) -> int:
        return max(e.degree() for e in self.entries())

    def __add__(self, other: "Matrix2Weyl") -> "Matrix2Weyl":
        return Matrix2Weyl(*(x + y for x, y in zip(self.entries(), other.entries())))

    def __sub__(self, other: "Matrix2Weyl") -> "Matrix2Weyl":
        return Matrix2Weyl(*(x - y for x, y in zip(self.entries(), other.entries())))

    def __neg__(self) -> "Matrix2Weyl":
        return self.map(lambda e: -e)

    def scale(self, c) -> "Matrix2Weyl":
        c = PolyGD.coerce(c)
        return self.map(lambda e: c * e)

    def __matmul__(self, other: "Matrix2Weyl") -> "Matrix2Weyl":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "Matrix2Weyl":
        out = Matrix2Weyl.identity()
        for _ in range(k):
            out = mat_mul(out, self)
        return out

    def to_strings(self) -> list[str]:
        return [str(e) for e in self.entries()]

    @classmethod
    def from_strings(cls, items) -> "Matrix2Weyl":
        items = list(items)
        if len(items) != 4:
            raise ValueError("expected four entries")
        return cls(*(WeylPoly.parse(s) for s in items))


def mat_mul(X: Matrix2Weyl, Y: Matrix2Weyl) -> Matrix2Weyl:
    return Matrix2Weyl(
        weyl_mul(X.e11, Y.e11) + weyl_mul(X.e12, Y.e21),
        weyl_mul(X.e11, Y.e12) + weyl_mul(X.e12, Y.e22),
        weyl_mul(X.e21, Y.e11) + weyl_mul(X.e22, Y.e21),
        weyl_mul(X.e21, Y.e12) + weyl_mul(X.e22, Y.e22),
    )


def parity_conj_matrix(X: Matrix2Weyl) -> Matrix2Weyl:
    return X.map(parity_conj)


def adjoint_matrix(X: Matrix2Weyl) -> Matrix2Weyl:
    """Operator adjoint: transpose plus entrywise adjoint."""
    return Matrix2Weyl(adjoint(X.e11), adjoint(X.e21), adjoint(X.e12), adjoint(X.e22))

