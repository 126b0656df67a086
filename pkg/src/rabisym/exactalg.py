"""Exact coefficient rings and linear algebra.

Everything symbolic in this package lives over the polynomial ring Q[g, d]
(``d`` stands for the level splitting Delta) or its fraction field.
Rationals are :class:`fractions.Fraction`; polynomials are immutable
dictionaries of exponent pairs.

Monomials are ordered graded-lexicographically with ``g > d``; this order
fixes both the leading term of a polynomial and the canonical text form
used by fixtures, e.g. ``"4*g^4 + 2*g^2 + d^2"``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Rational",
    "PolyGD",
    "RatFuncGD",
    "PolyX",
    "MatrixRF",
    "poly_gcd",
    "poly_arith",
    "evaluate",
    "kernel",
    "parse_terms",
    "format_terms",
]

Rational = Fraction

Monomial = tuple  # (i, j) exponents of (g, d)


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        # exact binary value; never used for user-facing rationals
        return Fraction(c)
    raise TypeError(f"cannot convert {type(c).__name__} to an exact rational")


def _grlex_key(mono: Sequence[int]):
    return (sum(mono), tuple(mono))


# --------------------------------------------------------------------------
# canonical text form


_FACTOR = re.compile(r"^(?:(\d+)(?:/(\d+))?|([A-Za-z]+)(?:\^(\d+))?)$")


def parse_terms(text: str, variables: Sequence[str]) -> list[tuple[Fraction, dict[str, int]]]:
    """Parse a sum of products like ``"-2*g*A + 1/2*d^2"``.

    Returns a list of ``(coefficient, {variable: exponent})`` pairs.  Only the
    flat canonical form written by :func:`format_terms` is accepted: no
    parentheses, no implicit multiplication.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    if s[0] not in "+-":
        s = "+" + s
    terms = []
    pos = 0
    for match in re.finditer(r"([+-])([^+-]+)", s):
        if match.start() != pos:
            raise ValueError(f"malformed polynomial string: {text!r}")
        pos = match.end()
        sign = -1 if match.group(1) == "-" else 1
        coeff = Fraction(sign)
        powers: dict[str, int] = {}
        for factor in match.group(2).split("*"):
            fm = _FACTOR.match(factor)
            if fm is None:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            if fm.group(1) is not None:
                coeff *= Fraction(int(fm.group(1)), int(fm.group(2) or 1))
            else:
                name = fm.group(3)
                if name not in variables:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                powers[name] = powers.get(name, 0) + int(fm.group(4) or 1)
        terms.append((coeff, powers))
    if pos != len(s):
        raise ValueError(f"malformed polynomial string: {text!r}")
    return terms


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_terms(terms: Iterable[tuple[Fraction, Sequence[tuple[str, int]]]]) -> str:
    """Render ``(coefficient, [(var, exp), ...])`` pairs, already ordered."""
    out = []
    for c, powers in terms:
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in powers if e)
        mag = abs(c)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out) if out else "0"


# --------------------------------------------------------------------------
# univariate helpers over Q (lists low -> high), used by the gcd


def _utrim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _umul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _utrim(out)


def _usub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _utrim([Fraction(x) for x in out])


def _udivmod(a: list, b: list) -> tuple[list, list]:
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lb
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] -= c * y
        _utrim(r)
    return _utrim(q), r


def _umonic(a: list) -> list:
    return [x / a[-1] for x in a] if a else []


def _ugcd(a: list, b: list) -> list:
    while b:
        a, b = b, _udivmod(a, b)[1]
    return _umonic(a)


# --------------------------------------------------------------------------


class PolyGD:
    """Polynomial in ``g`` and ``d`` with exact rational coefficients.

    Instances are immutable.  ``terms`` maps ``(i, j)`` to the coefficient of
    ``g**i * d**j``; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError("negative exponent")
                c = _frac(c)
                if c:
                    clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "PolyGD":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "PolyGD":
        c = _frac(c)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "PolyGD":
        return cls({(i, j): c})

    @classmethod
    def coerce(cls, x) -> "PolyGD":
        if isinstance(x, PolyGD):
            return x
        return cls.const(x)

    @property
    def terms(self) -> Mapping[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self):
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0, 0) in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0, 0), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def total_degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def degree_g(self) -> int:
        return max((i for i, _ in self._terms), default=-1)

    def degree_d(self) -> int:
        return max((j for _, j in self._terms), default=-1)

    def leading_term(self) -> tuple[tuple[int, int], Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self._terms, key=_grlex_key)
        return mono, self._terms[mono]

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "PolyGD":
        if not isinstance(other, PolyGD):
            try:
                other = PolyGD.const(other)
            except TypeError:
                return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v += c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return PolyGD._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "PolyGD":
        return PolyGD._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "PolyGD":
        if not isinstance(other, PolyGD):
            try:
                other = PolyGD.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PolyGD":
        return (-self) + other

    def __mul__(self, other) -> "PolyGD":
        if not isinstance(other, PolyGD):
            try:
                c = _frac(other)
            except TypeError:
                return NotImplemented
            if not c:
                return PolyGD._raw({})
            return PolyGD._raw({k: v * c for k, v in self._terms.items()})
        if len(other._terms) < len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out: dict = {}
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return PolyGD._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PolyGD":
        if n < 0:
            raise ValueError("negative power")
        result = PolyGD.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyGD):
            try:
                other = PolyGD.const(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def divexact(self, other: "PolyGD") -> "PolyGD":
        """Exact quotient ``self / other``; raises ``ArithmeticError`` otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self * (1 / other.constant_value())
        (li, lj), lc = other.leading_term()
        rem = dict(self._terms)
        quot: dict = {}
        while rem:
            (ri, rj) = max(rem, key=_grlex_key)
            if ri < li or rj < lj:
                raise ArithmeticError("polynomial division is not exact")
            c = rem[(ri, rj)] / lc
            qi, qj = ri - li, rj - lj
            quot[(qi, qj)] = c
            for (i, j), v in other._terms.items():
                k = (i + qi, j + qj)
                nv = rem.get(k, 0) - c * v
                if nv:
                    rem[k] = nv
                else:
                    rem.pop(k, None)
        return PolyGD._raw(quot)

    # -- normalization ----------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with ``self / c`` integral and primitive."""
        if not self._terms:
            return Fraction(0)
        den = 1
        for c in self._terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = 0
        for c in self._terms.values():
            num = math.gcd(num, c.numerator * (den // c.denominator))
        return Fraction(num, den)

    def normalized(self) -> "PolyGD":
        """Integer-primitive associate with positive leading coefficient."""
        if not self._terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return self * (1 / c)

    # -- evaluation -------------------------------------------------------

    def evaluate_exact(self, g, d) -> Fraction:
        g, d = _frac(g), _frac(d)
        # Horner in d over Horner-in-g coefficients
        by_d: dict[int, dict[int, Fraction]] = {}
        for (i, j), c in self._terms.items():
            by_d.setdefault(j, {})[i] = c
        total = Fraction(0)
        for j in range(self.degree_d(), -1, -1):
            row = by_d.get(j, {})
            acc = Fraction(0)
            for i in range(max(row, default=-1), -1, -1):
                acc = acc * g + row.get(i, 0)
            total = total * d + acc
        return total

    def evaluate(self, g, d) -> float:
        return float(self.evaluate_exact(g, d))

    def evaluate_array(self, g, d):
        """Vectorised double-precision evaluation (for grids)."""
        g = np.asarray(g, dtype=float)
        d = np.asarray(d, dtype=float)
        out = np.zeros(np.broadcast(g, d).shape)
        for (i, j), c in self._terms.items():
            out = out + float(c) * g**i * d**j
        return out

    def subs(self, g=None, d=None) -> "PolyGD":
        """Substitute exact values for one or both variables."""
        out: dict = {}
        for (i, j), c in self._terms.items():
            if g is not None:
                c = c * _frac(g) ** i
                i = 0
            if d is not None:
                c = c * _frac(d) ** j
                j = 0
            out[(i, j)] = out.get((i, j), 0) + c
        return PolyGD(out)

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        return format_terms((c, (("g", i), ("d", j))) for (i, j), c in self.items())

    def __repr__(self) -> str:
        return f"PolyGD({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "PolyGD":
        out: dict = {}
        for c, powers in parse_terms(text, ("g", "d")):
            k = (powers.get("g", 0), powers.get("d", 0))
            out[k] = out.get(k, 0) + c
        return cls(out)


G = PolyGD.monomial(1, 0)
D = PolyGD.monomial(0, 1)
ONE = PolyGD.const(1)
ZERO = PolyGD.const(0)


def poly_arith(p: PolyGD, q: PolyGD, op: str) -> PolyGD:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def evaluate(p: PolyGD, g, d) -> float:
    return p.evaluate(g, d)


# --------------------------------------------------------------------------
# bivariate gcd: recursive primitive PRS, viewing Q[g, d] as Q[g][d]


def _to_dmajor(p: PolyGD) -> list[list[Fraction]]:
    rows: list[list[Fraction]] = [[] for _ in range(p.degree_d() + 1)]
    for (i, j), c in p._terms.items():
        row = rows[j]
        if len(row) <= i:
            row.extend([Fraction(0)] * (i + 1 - len(row)))
        row[i] = c
    return [_utrim(r) for r in rows]


def _from_dmajor(rows: list[list[Fraction]]) -> PolyGD:
    return PolyGD({(i, j): c for j, r in enumerate(rows) for i, c in enumerate(r) if c})


def _dtrim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _dcontent(rows: list) -> list:
    c: list = []
    for r in rows:
        if r:
            c = _ugcd(c, r) if c else _umonic(r)
            if len(c) == 1:
                break
    return c


def _dprimitive(rows: list) -> list:
    c = _dcontent(rows)
    if len(c) == 1:
        return [[x / c[0] for x in r] for r in rows]
    out = []
    for r in rows:
        if r:
            q, rem = _udivmod(r, c)
            assert not rem
            out.append(q)
        else:
            out.append([])
    return out


def _dprem(a: list, b: list) -> list:
    r = [list(x) for x in a]
    lb = b[-1]
    while len(r) >= len(b):
        k = len(r) - len(b)
        lr = r[-1]
        r = [_umul(x, lb) for x in r]
        for i, y in enumerate(b):
            r[i + k] = _usub(r[i + k], _umul(lr, y))
        _dtrim(r)
        if not r:
            break
    return r


def poly_gcd(p: PolyGD, q: PolyGD) -> PolyGD:
    """Greatest common divisor, integer-primitive with positive leading coefficient."""
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    if p.is_constant() or q.is_constant():
        return ONE
    if p.is_monomial() or q.is_monomial():
        # gcd is the monomial gcd of everything
        mi = min(i for i, _ in list(p._terms) + list(q._terms))
        mj = min(j for _, j in list(p._terms) + list(q._terms))
        return PolyGD.monomial(mi, mj)
    a, b = _to_dmajor(p), _to_dmajor(q)
    ca, cb = _dcontent(a), _dcontent(b)
    c = _ugcd(ca, cb)
    a, b = _dprimitive(a), _dprimitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            a = [[Fraction(1)]]
            break
        r = _dprem(a, b)
        a, b = b, (_dprimitive(r) if r else [])
    return (_from_dmajor([[x for x in c]]) * _from_dmajor(a)).normalized()


# --------------------------------------------------------------------------


class RatFuncGD:
    """Element of the fraction field Q(g, d).

    Stored reduced, with an integer-primitive denominator whose leading
    coefficient is positive, so equal values have equal representations.
    Constant denominators are absorbed into the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = PolyGD.coerce(num)
        den = ONE if den is None else PolyGD.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = ONE
        elif den.is_constant():
            num = num * (1 / den.constant_value())
            den = ONE
        else:
            common = poly_gcd(num, den)
            if not common.is_constant():
                num = num.divexact(common)
                den = den.divexact(common)
            c = den.content()
            if den.leading_term()[1] < 0:
                c = -c
            if c != 1:
                num = num * (1 / c)
                den = den * (1 / c)
            if den.is_constant():
                num = num * (1 / den.constant_value())
                den = ONE
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: PolyGD, den: PolyGD) -> "RatFuncGD":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def coerce(cls, x) -> "RatFuncGD":
        if isinstance(x, RatFuncGD):
            return x
        return cls._raw(PolyGD.coerce(x), ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def as_poly(self) -> PolyGD:
        if not self.den.is_constant():
            raise ArithmeticError(f"{self} is not a polynomial")
        return self.num

    def size(self) -> int:
        return len(self.num._terms) + len(self.den._terms) - 1

    def __add__(self, other) -> "RatFuncGD":
        try:
            other = RatFuncGD.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            if self.den.is_constant():
                return RatFuncGD._raw(self.num + other.num, ONE)
            return RatFuncGD(self.num + other.num, self.den)
        if other.den.is_constant():
            return RatFuncGD._raw(self.num + other.num * self.den, self.den)
        if self.den.is_constant():
            return RatFuncGD._raw(self.num * other.den + other.num, other.den)
        return RatFuncGD(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFuncGD":
        return RatFuncGD._raw(-self.num, self.den)

    def __sub__(self, other) -> "RatFuncGD":
        try:
            other = RatFuncGD.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFuncGD":
        return (-self) + other

    def __mul__(self, other) -> "RatFuncGD":
        try:
            other = RatFuncGD.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den.is_constant() and other.den.is_constant():
            return RatFuncGD._raw(self.num * other.num, ONE)
        return RatFuncGD(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFuncGD":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFuncGD(self.den, self.num)

    def __truediv__(self, other) -> "RatFuncGD":
        try:
            other = RatFuncGD.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFuncGD":
        return RatFuncGD.coerce(other) / self

    def __eq__(self, other) -> bool:
        try:
            other = RatFuncGD.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def evaluate(self, g, d) -> float:
        return float(self.num.evaluate_exact(g, d) / self.den.evaluate_exact(g, d))

    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFuncGD({str(self)!r})"


# --------------------------------------------------------------------------


class PolyX:
    """Univariate polynomial in ``x`` with coefficients in Q[g, d].

    ``coeffs[k]`` is the coefficient of ``x**k``; trailing zeros are trimmed.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [PolyGD.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "PolyX":
        return cls([0, 1])

    @classmethod
    def coerce(cls, v) -> "PolyX":
        if isinstance(v, PolyX):
            return v
        return cls([v])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> PolyGD:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __add__(self, other) -> "PolyX":
        other = PolyX.coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyX(
            (self.coeffs[k] if k < len(self.coeffs) else ZERO)
            + (other.coeffs[k] if k < len(other.coeffs) else ZERO)
            for k in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "PolyX":
        return PolyX(-c for c in self.coeffs)

    def __sub__(self, other) -> "PolyX":
        return self + (-PolyX.coerce(other))

    def __rsub__(self, other) -> "PolyX":
        return (-self) + other

    def __mul__(self, other) -> "PolyX":
        other = PolyX.coerce(other)
        if not self.coeffs or not other.coeffs:
            return PolyX()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PolyX(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PolyX":
        out = PolyX([1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            other = PolyX.coerce(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def at_x(self, alpha) -> PolyGD:
        """Substitute an exact value for ``x``."""
        alpha = _frac(alpha)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * alpha + c
        return acc

    def specialize(self, g, d) -> list[Fraction]:
        """Exact univariate coefficients (low to high) at fixed ``g, d``."""
        return [c.evaluate_exact(g, d) for c in self.coeffs]

    def evaluate_exact(self, x, g, d) -> Fraction:
        x = _frac(x)
        acc = Fraction(0)
        for c in reversed(self.specialize(g, d)):
            acc = acc * x + c
        return acc

    def evaluate(self, x, g, d) -> float:
        return float(self.evaluate_exact(x, g, d))

    def numeric(self, g, d) -> np.ndarray:
        """Float coefficients, low to high, for vectorised use."""
        return np.array([float(c) for c in self.specialize(g, d)], dtype=float)

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            for (i, j), c in self.coeffs[k].items():
                terms.append((c, (("g", i), ("d", j), ("x", k))))
        return format_terms(terms)

    def __repr__(self) -> str:
        return f"PolyX({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "PolyX":
        cs: dict[int, dict] = {}
        for c, powers in parse_terms(text, ("g", "d", "x")):
            k = powers.get("x", 0)
            mono = (powers.get("g", 0), powers.get("d", 0))
            row = cs.setdefault(k, {})
            row[mono] = row.get(mono, 0) + c
        n = max(cs, default=-1) + 1
        return cls(PolyGD(cs.get(k, {})) for k in range(n))


# --------------------------------------------------------------------------


class MatrixRF:
    """Dense matrix over Q(g, d); entries may be given as ints, PolyGD or RatFuncGD."""

    __slots__ = ("rows", "cols", "entries", "col_labels")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None, col_labels=None):
        self.entries = [[RatFuncGD.coerce(x) for x in row] for row in entries]
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != cols for r in self.entries):
            raise ValueError("ragged matrix")
        self.cols = cols
        self.col_labels = list(col_labels) if col_labels is not None else None

    @classmethod
    def from_sparse(cls, rows: Sequence[Mapping[int, object]], cols: int, col_labels=None) -> "MatrixRF":
        zero = RatFuncGD.coerce(0)
        dense = []
        for r in rows:
            line = [zero] * cols
            for c, v in r.items():
                line[c] = RatFuncGD.coerce(v)
            dense.append(line)
        return cls(dense, cols=cols, col_labels=col_labels)

    def apply(self, v: Sequence) -> list[RatFuncGD]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        v = [RatFuncGD.coerce(x) for x in v]
        out = []
        for row in self.entries:
            acc = RatFuncGD.coerce(0)
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def permuted_rows(self, order: Sequence[int]) -> "MatrixRF":
        return MatrixRF([self.entries[i] for i in order], cols=self.cols, col_labels=self.col_labels)

    def __repr__(self) -> str:
        return f"MatrixRF({self.rows}x{self.cols})"


def _pivot_cost(x: RatFuncGD) -> int:
    if x.is_constant():
        return 0
    return x.size() + 1


def _clear_denominators(vec: list[RatFuncGD]) -> list[PolyGD]:
    lcm = ONE
    for x in vec:
        if not x.den.is_constant():
            lcm = (lcm * x.den).divexact(poly_gcd(lcm, x.den))
    polys = [(x.num * lcm).divexact(x.den) if x else ZERO for x in vec]
    common = ZERO
    for p in polys:
        if p:
            common = poly_gcd(common, p)
            if common.is_constant():
                break
    if not common.is_constant():
        polys = [p.divexact(common) if p else p for p in polys]
    # integer content 1, first nonzero entry with positive leading coefficient
    den = 1
    for p in polys:
        for c in p._terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
    num = 0
    for p in polys:
        for c in p._terms.values():
            num = math.gcd(num, c.numerator * (den // c.denominator))
    scale = Fraction(den, num)
    first = next(p for p in polys if p)
    if first.leading_term()[1] < 0:
        scale = -scale
    return [p * scale for p in polys]


def kernel(M: MatrixRF) -> list[list[PolyGD]]:
    """Basis of the right null space of ``M`` over Q(g, d).

    Sparse Gauss-Jordan elimination.  Pivots are chosen cheapest-first
    (rational constants before polynomials), then by Markowitz fill-in, then
    by column and row index, so results are deterministic.  Each basis
    vector is returned with polynomial entries, integer content 1 and no
    common polynomial factor.
    """
    rows: dict[int, dict[int, RatFuncGD]] = {}
    col_rows: dict[int, set[int]] = {c: set() for c in range(M.cols)}
    for r, line in enumerate(M.entries):
        sparse = {c: x for c, x in enumerate(line) if x}
        if sparse:
            rows[r] = sparse
            for c in sparse:
                col_rows[c].add(r)

    active = set(rows)
    pivots: dict[int, int] = {}  # column -> row
    while active:
        best = None
        for r in active:
            row = rows[r]
            rc = len(row) - 1
            for c, x in row.items():
                key = (_pivot_cost(x), rc * (len(col_rows[c]) - 1), c, r)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, _, pc, pr = best
        prow = rows[pr]
        inv = prow[pc].inverse()
        prow = {c: x * inv for c, x in prow.items()}
        prow[pc] = RatFuncGD.coerce(1)
        rows[pr] = prow
        active.discard(pr)
        pivots[pc] = pr
        for r in sorted(col_rows[pc] - {pr}):
            row = rows[r]
            f = row[pc]
            for c, x in prow.items():
                if c == pc:
                    continue
                nv = row.get(c)
                nv = -(f * x) if nv is None else nv - f * x
                if nv:
                    if c not in row:
                        col_rows[c].add(r)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    col_rows[c].discard(r)
            del row[pc]
            col_rows[pc].discard(r)
            if not row:
                del rows[r]
                active.discard(r)
        # drop empty active rows (dependent equations)
        for r in [r for r in active if not rows.get(r)]:
            active.discard(r)

    basis = []
    zero = RatFuncGD.coerce(0)
    for f in range(M.cols):
        if f in pivots:
            continue
        vec = [zero] * M.cols
        vec[f] = RatFuncGD.coerce(1)
        for pc, pr in pivots.items():
            x = rows[pr].get(f)
            if x:
                vec[pc] = -x
        basis.append(_clear_denominators(vec))
    return basis
