import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rabisym.exactalg import D, G, PolyGD
from rabisym.fock import represent, reorder_oracle
from rabisym.weyl import (
    AD,
    NUMBER,
    A,
    Matrix2Weyl,
    WeylPoly,
    adjoint,
    adjoint_matrix,
    mat_mul,
    parity_conj,
    reorder,
    weyl_mul,
)


@st.composite
def weyls(draw, max_deg=4, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        n = draw(st.integers(0, max_deg))
        m = draw(st.integers(0, max_deg - n))
        i = draw(st.integers(0, 2))
        terms[(n, m)] = PolyGD({(i, 0): draw(st.integers(-5, 5)), (0, 1): draw(st.integers(-3, 3))})
    return WeylPoly(terms)


def test_reorder_examples():
    assert reorder(1, 1) == WeylPoly({(1, 1): 1, (0, 0): -1})
    assert reorder(0, 3) == WeylPoly.monomial(3, 0)
    assert reorder(2, 2) == WeylPoly({(2, 2): 1, (1, 1): -4, (0, 0): 2})
    with pytest.raises(ValueError):
        reorder(-1, 0)


def test_reorder_oracle_all_pass():
    checks = reorder_oracle(6, 40)
    assert len(checks) == 49
    assert all(c.passed for c in checks)


def test_reorder_oracle_catches_wrong_formula(monkeypatch):
    import rabisym.weyl as w

    monkeypatch.setattr(w, "reorder", lambda m, p: WeylPoly.monomial(p, m))
    checks = reorder_oracle(3, 20)
    bad = {(c.m, c.p) for c in checks if not c.passed}
    assert (1, 1) in bad and (0, 3) not in bad


def test_reorder_float_fock_relative():
    N = 40
    a = represent(A, 0, 0, N)
    ad = represent(AD, 0, 0, N)
    lhs = np.linalg.matrix_power(ad, 2) @ np.linalg.matrix_power(a, 2)
    rhs = represent(reorder(2, 2), 0, 0, N)
    k = N - 4
    assert np.allclose(lhs[:k, :k], rhs[:k, :k], rtol=1e-12, atol=1e-9)


def test_weyl_mul_examples():
    assert weyl_mul(A, AD) == WeylPoly.monomial(1, 1)
    assert weyl_mul(AD, A) == NUMBER
    assert A * AD - AD * A == WeylPoly.scalar(1)


def test_number_operator_stored_canonically():
    assert str(NUMBER) == "A*Ad - 1"


def test_sigma_x_times_H0_plus_identity():
    from rabisym.symmetry import build_H

    H0 = build_H(0)
    lhs = mat_mul(Matrix2Weyl.sigma_x(), H0 + Matrix2Weyl.identity())
    coupling = WeylPoly({(1, 0): G, (0, 1): G})
    n_plus_1 = WeylPoly.monomial(1, 1)  # adag a + 1 = a adag
    expected = Matrix2Weyl(WeylPoly.scalar(D), n_plus_1 - coupling, n_plus_1 + coupling, WeylPoly.scalar(D))
    assert lhs == expected


@given(weyls(), weyls(), weyls())
@settings(max_examples=40, deadline=None)
def test_associative(f, g, h):
    assert weyl_mul(weyl_mul(f, g), h) == weyl_mul(f, weyl_mul(g, h))


@given(weyls(), weyls())
@settings(max_examples=60, deadline=None)
def test_adjoint_antihomomorphism(f, g):
    assert adjoint(weyl_mul(f, g)) == weyl_mul(adjoint(g), adjoint(f))
    assert adjoint(adjoint(f)) == f


@given(weyls(), weyls())
@settings(max_examples=60, deadline=None)
def test_parity_homomorphism(f, g):
    assert parity_conj(weyl_mul(f, g)) == weyl_mul(parity_conj(f), parity_conj(g))
    assert parity_conj(parity_conj(f)) == f


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
def test_degree_additive_on_monomials(n1, m1, n2, m2):
    f, g = WeylPoly.monomial(n1, m1), WeylPoly.monomial(n2, m2)
    assert weyl_mul(f, g).degree() == n1 + m1 + n2 + m2


def test_adjoint_examples():
    assert adjoint(A) == AD
    assert adjoint(NUMBER) == NUMBER
    beta = WeylPoly.parse("2*g^2 - 2*g*A")
    assert adjoint(beta) == WeylPoly.parse("2*g^2 - 2*g*Ad")


def test_parity_examples():
    assert parity_conj(A + AD) == -A - AD
    assert parity_conj(WeylPoly.monomial(1, 1)) == WeylPoly.monomial(1, 1)


def test_mat_mul_examples():
    X = Matrix2Weyl.of(A, G, AD, NUMBER)
    assert mat_mul(Matrix2Weyl.identity(), X) == X
    assert mat_mul(Matrix2Weyl.sigma_x(), Matrix2Weyl.sigma_x()) == Matrix2Weyl.identity()


def test_adjoint_matrix_transposes():
    X = Matrix2Weyl.of(A, G * A, D, AD)
    Y = adjoint_matrix(X)
    assert Y == Matrix2Weyl.of(AD, D, G * AD, A)


@given(weyls(3, 3), weyls(3, 3))
@settings(max_examples=25, deadline=None)
def test_represent_homomorphism(f, h):
    N = 40
    k = N - 8
    lhs = represent(weyl_mul(f, h), 0.7, -1.3, N)[:k, :k]
    rhs = (represent(f, 0.7, -1.3, N) @ represent(h, 0.7, -1.3, N))[:k, :k]
    scale = max(1.0, np.abs(rhs).max())
    assert np.abs(lhs - rhs).max() <= 1e-9 * scale


def test_text_roundtrip_and_order():
    w = WeylPoly.parse("2*g^2 - 2*g*A")
    assert str(w) == "2*g^2 - 2*g*A"
    assert WeylPoly.parse(str(NUMBER * NUMBER)) == NUMBER * NUMBER
    with pytest.raises(ValueError):
        WeylPoly.parse("Ad*A")


def test_matrix_strings_roundtrip():
    X = Matrix2Weyl.of(NUMBER + G * A, D, D, NUMBER - G * AD)
    assert Matrix2Weyl.from_strings(X.to_strings()) == X
