from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loopmult.linalg import in_span, nullspace, rank, rref, solve_affine, span_basis
from loopmult.poly import (Poly, PolyError, as_rational, fmt_rational, poly_diff, poly_eval, poly_shift,
                           translate_span_dim)
from loopmult.trimap import NotTriangular, TriangularMap

F = Fraction
XYZ = ("x", "y", "z")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw, variables=XYZ, max_terms=4, max_exp=3):
    terms = draw(st.lists(st.tuples(st.tuples(*[st.integers(0, max_exp)] * len(variables)), rationals),
                          max_size=max_terms))
    p = Poly.zero(variables)
    for exps, c in terms:
        mono = Poly.const(c, variables)
        for v, e in zip(variables, exps):
            mono = mono * Poly.var(v, variables) ** e
        p = p + mono
    return p


def test_rational_parsing():
    assert as_rational("-3/2") == F(-3, 2)
    assert as_rational(4) == 4
    assert fmt_rational(F(6, 4)) == "3/2"
    with pytest.raises(PolyError):
        as_rational("1/0")


def test_eval_examples():
    assert poly_eval(Poly.parse("x^2"), [3]) == 9
    assert poly_eval(Poly.zero(("x",)), [7]) == 0
    assert poly_eval(Poly.parse("x^2 + z^2"), [F(1, 2), F(1, 3)]) == F(13, 36)


def test_eval_arity_mismatch():
    with pytest.raises(PolyError):
        poly_eval(Poly.parse("x^2"), [1, 2])


def test_shift_examples():
    assert poly_shift(Poly.parse("x^2"), [1]) == Poly.parse("x^2 + 2*x + 1")
    assert poly_shift(Poly.parse("x^2 + z^2"), [0, 0]) == Poly.parse("x^2 + z^2")
    shifted = poly_shift(Poly.parse("x^3"), [-2])
    assert shifted == Poly.parse("x^3 - 6*x^2 + 12*x - 8")
    for t in range(-2, 3):
        assert poly_eval(shifted, [t]) == (t - 2) ** 3


def test_diff_examples():
    assert poly_diff(Poly.parse("x^2*y"), "x") == Poly.parse("2*x*y")
    assert poly_diff(Poly.const(5, ("x",)), "x").is_zero()
    assert poly_diff(Poly.parse("x^2 + z^2"), "z") == Poly.parse("2*z")
    with pytest.raises(PolyError):
        poly_diff(Poly.parse("x^2"), "q")


@pytest.mark.parametrize("n", range(7))
def test_span_of_monomial_translates(n):
    assert translate_span_dim(Poly.var("x") ** n) == n + 1


def test_span_special_cases():
    assert translate_span_dim(Poly.parse("x^2 + z^2")) == 4
    assert translate_span_dim(Poly.const(1)) == 1
    assert translate_span_dim(Poly.zero()) == 0


@pytest.mark.parametrize("text", ["3/2*x^2*z - z", "x*y*z + 1", "-x^3 + 1/7*y", "k^2*l - m"])
def test_text_round_trip(text):
    p = Poly.parse(text)
    assert Poly.parse(str(p)) == p


def test_parse_rejects_garbage():
    with pytest.raises(PolyError):
        Poly.parse("x**")
    with pytest.raises(PolyError):
        Poly.parse("sin(x)")


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@settings(max_examples=50, deadline=None)
@given(polys(), st.tuples(rationals, rationals, rationals), st.tuples(rationals, rationals, rationals))
def test_shift_composes(p, a, b):
    ab = [u + v for u, v in zip(a, b)]
    assert poly_shift(poly_shift(p, a), b) == poly_shift(p, ab)


@settings(max_examples=20, deadline=None)
@given(polys(), st.tuples(rationals, rationals, rationals), st.tuples(rationals, rationals, rationals))
def test_shift_matches_eval(p, a, x):
    xa = [u + v for u, v in zip(x, a)]
    assert poly_eval(poly_shift(p, a), x) == poly_eval(p, xa)


def test_coefficients_in_splits_parameters():
    p = Poly.parse("k^2*x + 3*k*y - l")
    parts = p.coefficients_in(["k", "l"])
    assert parts[(2, 0)] == Poly.parse("x")
    assert parts[(1, 0)] == Poly.parse("3*y")
    assert parts[(0, 1)] == Poly.const(-1)


# -- exact linear algebra ----------------------------------------------------

def test_rref_and_rank():
    rows, pivots = rref([[1, 2], [2, 4]])
    assert rows == [[1, 2]] and pivots == [0]
    assert rank([[1, 0, 1], [0, 1, 1], [1, 1, 2]]) == 2


def test_nullspace_and_affine():
    assert nullspace([[1, 2]], 2) == [[-2, 1]]
    sol, null = solve_affine([[1, 1]], [2], 2)
    assert sol == [2, 0] and null == [[-1, 1]]
    sol, _ = solve_affine([[1, 1], [1, 1]], [1, 2], 2)
    assert sol is None


def test_span_membership():
    basis = span_basis([[1, 0, 0], [1, 1, 0], [2, 1, 0]])
    assert len(basis) == 2
    assert in_span(basis, [0, 3, 0])
    assert not in_span(basis, [0, 0, 1])


# -- triangular maps ---------------------------------------------------------

def test_triangular_inverse_and_compose():
    m = TriangularMap.from_strings(["x + 1", "y + x^2", "z + x*y"])
    inv = m.inverse()
    assert m.compose(inv).is_identity()
    assert inv.compose(m).is_identity()
    assert m.apply((F(1), F(2), F(3))) == (2, 3, 5)


def test_non_triangular_rejected():
    with pytest.raises(NotTriangular):
        TriangularMap.from_strings(["x + y^2", "y + x^2", "z"])
