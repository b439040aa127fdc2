import pytest
from hypothesis import given, settings, strategies as st

from loopmult.structure import (AbstractLieAlgebra, abelian, amalgamated_filiform, catalog, center, direct_sum,
                                filiform, fingerprint, from_field_span, identify_model, is_ideal,
                                largest_ideal_in, lower_central_series)
from loopmult.vfield import ClosureCapExceeded, VectorField, bracket, is_closed, lie_closure, span_insert, span_of

V = VectorField.from_strings
DX, DY, DZ = (VectorField.partial(c) for c in "xyz")

LF_RIGHT = [DY, DZ, V(["0", "0", "y"]), V(["1", "0", "-y^2"])]
LF_LEFT = [DX, V(["0", "0", "x"]), DZ, V(["0", "0", "x^2"])]
LF_MULT_BASIS = [DX, V(["0", "0", "x^2"]), V(["0", "0", "x"]), DY, V(["0", "0", "y^2"]), V(["0", "0", "y"]), DZ]


def test_bracket_examples():
    assert bracket(DX, V(["0", "0", "x^2"])) == V(["0", "0", "2*x"])
    assert bracket(DY, V(["0", "0", "y"])) == DZ
    assert bracket(DY, V(["1", "0", "-y^2"])) == V(["0", "0", "-2*y"])


fields = st.lists(st.sampled_from(["0", "1", "x", "y", "z", "x^2", "x*y", "-y^2", "z*x", "3/2*y"]),
                  min_size=3, max_size=3).map(V)


@settings(max_examples=60, deadline=None)
@given(fields, fields, fields)
def test_bracket_is_a_lie_bracket(X, Y, Z):
    assert bracket(X, Y) == -bracket(Y, X)
    jacobi = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
    assert jacobi.is_zero()


def test_span_insert_examples():
    S = span_of([DX])
    S2, new = span_insert(S, DX * 2)
    assert not new and S2.dim == 1
    empty = span_of([])
    E2, new = span_insert(empty, VectorField.zero())
    assert not new and E2.dim == 0
    S3, new = span_insert(span_of([V(["1", "0", "-y^2"])]), DX)
    assert new and S3.contains(V(["0", "0", "y^2"]))


def test_closure_examples():
    S = lie_closure([DX, V(["0", "x", "0"])])
    assert S.dim == 3 and S.contains(DY)
    R = lie_closure(LF_RIGHT)
    assert R.dim == 4 and is_closed(span_of(LF_RIGHT))
    M = lie_closure(LF_RIGHT + LF_LEFT)
    assert M.dim == 7
    target = span_of(LF_MULT_BASIS)
    assert M.is_subspace_of(target) and target.is_subspace_of(M)


def test_closure_caps_raise():
    with pytest.raises(ClosureCapExceeded):
        lie_closure(LF_RIGHT + LF_LEFT, max_dim=5)
    with pytest.raises(ClosureCapExceeded):
        lie_closure([V(["1", "0", "0"]), V(["0", "0", "x^5"])], max_degree=3)
    # x^2 d/dx and x^3 d/dx generate every x^k d/dx with k >= 2
    with pytest.raises(ClosureCapExceeded):
        lie_closure([V(["x^2", "0", "0"]), V(["x^3", "0", "0"])], max_dim=8, max_degree=10)


def test_from_field_span_examples():
    H = from_field_span(span_of([DX, V(["0", "x", "0"]), DY]))
    assert H.dim == 3 and not H.is_abelian()
    assert fingerprint(H) == fingerprint(filiform(1))
    assert from_field_span(span_of([DY, DZ])).is_abelian()
    L = from_field_span(lie_closure(LF_RIGHT + LF_LEFT))
    assert fingerprint(L) == fingerprint(amalgamated_filiform(2, 2))


def test_fingerprint_examples():
    f4 = fingerprint(filiform(2))
    assert (f4.dim, f4.lcs_dims, f4.center_dim) == (4, (4, 2, 1, 0), 1)
    r3 = fingerprint(abelian(3))
    assert (r3.lcs_dims, r3.center_dim) == ((3, 0), 3)
    f4r = fingerprint(direct_sum(filiform(2), abelian(1)))
    assert (f4r.dim, f4r.lcs_dims, f4r.center_dim) == (5, (5, 2, 1, 0), 2)
    amal = fingerprint(amalgamated_filiform(2, 2))
    assert (amal.dim, amal.lcs_dims, amal.center_dim) == (7, (7, 3, 1, 0), 1)


def test_identify_examples():
    assert identify_model(direct_sum(filiform(2), abelian(1))).text == "consistent with f_4 ⊕ R"
    assert identify_model(amalgamated_filiform(2, 2)).text == "consistent with f_4 ⊕_z f_4"
    assert identify_model(filiform(1)).text == "consistent with f_3"
    # [e1,e2] = e2 is not nilpotent, so nothing in the catalog matches
    assert identify_model(AbstractLieAlgebra(2, [(0, 1, 1, 1)])).text == "no catalog match"


def test_catalog_fingerprints_distinguish_small_models():
    seen = {}
    for e in catalog(4, 3):
        seen.setdefault(e.fingerprint, []).append(e.name)
    clashes = {fp: names for fp, names in seen.items() if len(names) > 1}
    assert not clashes, clashes


def test_largest_ideal_examples():
    L = direct_sum(filiform(2), abelian(1))
    assert largest_ideal_in(L, [[0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]) == []
    Z = center(L)
    assert len(largest_ideal_in(L, Z)) == len(Z) and is_ideal(L, Z)
    H = filiform(1)
    assert len(largest_ideal_in(H, [[0, 0, 1]])) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_filiform_series(n):
    lcs = [len(s) for s in lower_central_series(filiform(n))]
    assert lcs == [n + 2] + list(range(n, -1, -1))


def test_bad_structure_constants_rejected():
    with pytest.raises(ValueError):
        # violates Jacobi: [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e1
        AbstractLieAlgebra(3, [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 0, 1)])
