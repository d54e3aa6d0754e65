"""Sparse polynomial algebra: enumeration, products, anti-Laplacians,
boundary-reduced volume integrals."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvequad._antilap_table import ANTILAP_TABLE
from curvequad.cellgeom import ArcEdge, build_square
from curvequad.kressquad import build_grid
from curvequad.polyalg import (
    Poly2,
    anti_laplacian_poly,
    antilap_monomial_exact,
    index_to_mi,
    mi_to_index,
    poly_eval,
    poly_grad,
    poly_laplacian,
    poly_mul,
    poly_normal_derivative_trace,
    poly_trace,
    poly_volume_integral,
)

Z = (0.0, 0.0)


# -- multiindex enumeration ---------------------------------------------------


def test_mi_to_index_tabulated():
    assert mi_to_index((0, 0)) == 0
    assert mi_to_index((2, 3)) == 18
    assert mi_to_index((0, 9)) == 54


def test_index_to_mi_tabulated():
    assert index_to_mi(24) == (3, 3)
    assert index_to_mi(0) == (0, 0)
    assert index_to_mi(44) == (0, 8)


def test_index_round_trips():
    for a1 in range(31):
        for a2 in range(31 - a1):
            assert index_to_mi(mi_to_index((a1, a2))) == (a1, a2)
    for k in range(500):
        assert mi_to_index(index_to_mi(k)) == k


def test_bad_indices_rejected():
    with pytest.raises(ValueError):
        mi_to_index((-1, 0))
    with pytest.raises(ValueError):
        index_to_mi(-3)


# -- product and derivatives --------------------------------------------------


def test_mul_identity_and_monomials():
    one = Poly2.constant(Z, 1.0)
    q = Poly2(Z, [((2, 1), 3.0), ((0, 0), -1.0)])
    assert poly_mul(one, q) == q
    m = poly_mul(Poly2.monomial(Z, (1, 0)), Poly2.monomial(Z, (0, 1)))
    assert m.terms() == [((1, 1), 1.0)]


def test_mul_mismatched_centers_rejected():
    with pytest.raises(ValueError):
        poly_mul(Poly2.constant(Z, 1.0), Poly2.constant((1.0, 0.0), 1.0))


coeff = st.floats(min_value=-3, max_value=3, allow_nan=False)
expo = st.tuples(st.integers(0, 3), st.integers(0, 3))
sparse_terms = st.lists(st.tuples(expo, coeff), min_size=1, max_size=6)


@settings(max_examples=40, deadline=None)
@given(sparse_terms, sparse_terms)
def test_mul_matches_dense_convolution(terms_p, terms_q):
    p, q = Poly2(Z, terms_p), Poly2(Z, terms_q)
    dense = {}
    for (a1, a2), ca in p.terms():
        for (b1, b2), cb in q.terms():
            key = (a1 + b1, a2 + b2)
            dense[key] = dense.get(key, 0.0) + ca * cb
    got = dict(poly_mul(p, q).terms())
    for key, val in dense.items():
        assert abs(got.get(key, 0.0) - val) <= 1e-12 * (1 + abs(val))


def test_grad_power_rule():
    gx, gy = poly_grad(Poly2.constant(Z, 5.0))
    assert gx.is_zero and gy.is_zero
    gx, gy = poly_grad(Poly2.monomial(Z, (2, 3)))
    assert gx.terms() == [((1, 3), 2)]
    assert gy.terms() == [((2, 2), 3)]


def test_grad_matches_finite_differences():
    rng = np.random.default_rng(3)
    p = Poly2((0.2, -0.1), [((2, 1), 1.3), ((0, 3), -0.7), ((1, 0), 0.4)])
    gx, gy = poly_grad(p)
    pts = rng.uniform(-1, 1, size=(20, 2))
    h = 1e-5
    ex = np.array([1.0, 0.0])
    ey = np.array([0.0, 1.0])
    fdx = (p.eval(pts + h * ex) - p.eval(pts - h * ex)) / (2 * h)
    fdy = (p.eval(pts + h * ey) - p.eval(pts - h * ey)) / (2 * h)
    assert np.max(np.abs(fdx - gx.eval(pts))) < 1e-8
    assert np.max(np.abs(fdy - gy.eval(pts))) < 1e-8


def test_laplacian_examples():
    r2q = Poly2(Z, [((2, 0), 0.25), ((0, 2), 0.25)])
    assert poly_laplacian(r2q).terms() == [((0, 0), 1.0)]
    harm = Poly2(Z, [((1, 1), 2.0)])
    assert poly_laplacian(harm).is_zero


# -- anti-Laplacians ----------------------------------------------------------


def test_table_rows_exact_laplacian_and_alternating_sum():
    for k, (idx, nums, den) in ANTILAP_TABLE.items():
        row = Poly2(Z, [(i, Fraction(nu, den)) for i, nu in zip(idx, nums)])
        assert poly_laplacian(row).coeffs == {k: Fraction(1)}
        assert sum((-1) ** j * nu for j, nu in enumerate(nums)) == 0


def test_table_matches_spot_values():
    assert ANTILAP_TABLE[0] == ((3, 5), (1, 1), 4)
    assert ANTILAP_TABLE[18] == ((29, 31, 33, 35), (-11, 55, 63, -3), 1920)
    assert ANTILAP_TABLE[60] == ((79, 81, 83, 85, 87, 89), (3, -55, 198, 198, -55, 3), 16632)


def test_closed_formula_agrees_with_table():
    for k in ANTILAP_TABLE:
        from curvequad.polyalg import _antilap_monomial_exact

        assert antilap_monomial_exact(k) == _antilap_monomial_exact(index_to_mi(k))


def test_formula_beyond_tabulated_degree():
    for alpha in [(11, 0), (6, 6), (0, 12), (5, 7)]:
        p = Poly2(Z, [(alpha, Fraction(1))])
        P = anti_laplacian_poly(p)
        assert poly_laplacian(P).coeffs == {mi_to_index(alpha): Fraction(1)}
        assert P.degree == sum(alpha) + 2


def test_anti_laplacian_float_exactness_degree_12():
    rng = np.random.default_rng(11)
    exps = rng.integers(0, 7, size=(25, 2))
    terms = [((int(a), int(b)), float(c)) for (a, b), c in zip(exps, rng.normal(size=25))]
    p = Poly2((0.3, 0.4), terms)
    P = anti_laplacian_poly(p)
    back = poly_laplacian(P)
    for k, c in p.coeffs.items():
        assert abs(back.coeffs.get(k, 0.0) - c) <= 1e-13 * max(1.0, abs(c))


@settings(max_examples=25, deadline=None)
@given(sparse_terms, sparse_terms, coeff, coeff)
def test_anti_laplacian_linearity(tp, tq, a, b):
    p, q = Poly2(Z, tp), Poly2(Z, tq)
    lhs = anti_laplacian_poly(p.scale(a) + q.scale(b))
    rhs = anti_laplacian_poly(p).scale(a) + anti_laplacian_poly(q).scale(b)
    for k in set(lhs.coeffs) | set(rhs.coeffs):
        x, y = lhs.coeffs.get(k, 0.0), rhs.coeffs.get(k, 0.0)
        assert abs(x - y) <= 1e-12 * (1 + abs(x))


# -- boundary-reduced volume integrals ---------------------------------------


def _gauss_square(f, order=12):
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    X, Y = np.meshgrid(x, x, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel()], axis=1)
    return float(np.sum(f(pts) * np.outer(w, w).ravel()))


@pytest.fixture(scope="module")
def square_setup():
    cell = build_square()
    return cell, build_grid(cell, 32, 7)


def test_volume_integral_constants_and_odd_symmetry(square_setup):
    cell, grid = square_setup
    one = Poly2.constant(cell.shift, 1.0)
    assert abs(poly_volume_integral(one, cell, grid) - 1.0) < 1e-9
    odd = Poly2.monomial(cell.shift, (1, 1))
    assert abs(poly_volume_integral(odd, cell, grid)) < 1e-13


def test_volume_integral_x2y2(square_setup):
    cell, grid = square_setup
    p = Poly2(Z, [((2, 2), 1.0)]).recenter(cell.shift)
    assert abs(poly_volume_integral(p, cell, grid) - 1.0 / 9.0) < 1e-12


def test_volume_integral_vs_gauss_all_monomials(square_setup):
    cell, grid = square_setup
    worst = 0.0
    for total in range(11):
        for a1 in range(total + 1):
            alpha = (a1, total - a1)
            p = Poly2.monomial(cell.shift, alpha)
            ref = _gauss_square(lambda pts: p.eval(pts))
            worst = max(worst, abs(poly_volume_integral(p, cell, grid) - ref))
    assert worst < 1e-12


def test_volume_integral_center_mismatch_rejected(square_setup):
    cell, grid = square_setup
    with pytest.raises(ValueError):
        poly_volume_integral(Poly2.constant((0.0, 0.0), 1.0), cell, grid)


# -- evaluation and traces -----------------------------------------------------


def test_eval_and_trace_basics():
    one = Poly2.constant(Z, 1.0)
    pts = np.array([[0.3, -2.0], [1.5, 0.1]])
    assert np.all(poly_eval(one, pts) == 1.0)
    edge = ArcEdge((0.0, 0.0), 1.0, 0.0, np.pi)
    t = np.linspace(0.05, 0.95, 7)
    assert np.max(np.abs(poly_trace(one, edge, t) - 1.0)) == 0.0
    # radial derivative of |x|^2/4 on the unit circle is 1/2
    r2q = Poly2(Z, [((2, 0), 0.25), ((0, 2), 0.25)])
    dn = poly_normal_derivative_trace(r2q, edge, t)
    assert np.max(np.abs(dn - 0.5)) < 1e-14


def test_normal_derivative_matches_finite_differences():
    edge = ArcEdge((0.2, -0.3), 0.8, 0.3, 2.1)
    p = Poly2((0.1, 0.1), [((2, 1), 0.7), ((1, 0), -0.2), ((0, 3), 0.5)])
    t = np.linspace(0.0, 1.0, 9)
    pts = edge.point(t)
    nrm = edge.unit_normal(t)
    h = 1e-5
    fd = (p.eval(pts + h * nrm) - p.eval(pts - h * nrm)) / (2 * h)
    assert np.max(np.abs(fd - poly_normal_derivative_trace(p, edge, t))) < 1e-8


def test_degree_conventions():
    assert Poly2.zero(Z).degree == float("-inf")
    assert Poly2(Z, [((2, 3), 1.0), ((1, 0), 1.0)]).degree == 5
    p = Poly2(Z, [((1, 1), 2.0)])
    q = Poly2(Z, [((2, 0), 1.0)])
    assert poly_mul(p, q).degree == p.degree + q.degree
