from math import factorial

import pytest

from loopmult.groups import Amalg, F4, FiliformR, G5
from loopmult.kepka import (TransversalAnsatz, ansatz_solve, check_transversal, core_check, general_poly,
                            generation_check, group_algebra, left_family, lv_family, s_connected_check,
                            solve_transversal, two_sided_amalg_residual, two_sided_model_residual,
                            two_sided_residual)
from loopmult.loops import make_spec, reference_spec
from loopmult.poly import Poly
from loopmult.sections import SectionSpec

P = Poly.parse
K = Poly.var("k")


def test_residual_examples():
    M = FiliformR(2)
    lam = lv_family(M, P("x^2"))
    ans = TransversalAnsatz(M, "a")
    assert s_connected_check(M, "a", lam, ans.family({"h1": "0", "h2": "-2*k"})).is_zero()
    bad = s_connected_check(M, "a", lam, ans.family({"h1": "0", "h2": "k"}))
    assert not bad.is_zero()
    assert any(p == P("3/2*x^2*k") or p == P("-3/2*x^2*k") for p in bad.polys)
    assert s_connected_check(M, "a", lv_family(M, Poly.zero()), ans.family({"h1": "0", "h2": "0"})).is_zero()


def test_ansatz_positive_case():
    M = FiliformR(2)
    sol = ansatz_solve(TransversalAnsatz(M, "a", 3), lv_family(M, P("x^2")))
    assert sol.solvable and sol.unique
    assert sol.member() == {"h1": Poly.zero(), "h2": -2 * K}


@pytest.mark.parametrize("v, n", [("x^2", 2), ("3*x + x^3", 3), ("x - 1/2*x^2 + 2*x^3", 3)])
def test_polynomial_v_gives_linear_transversal(v, n):
    M = FiliformR(n)
    vp = P(v)
    sol = ansatz_solve(TransversalAnsatz(M, "a", 3), lv_family(M, vp))
    assert sol.unique
    coeffs = vp.coefficients_in(["x"])
    for i in range(1, n + 1):
        a_i = coeffs.get((i,), Poly.zero())
        assert sol.member()[f"h{i}"] == a_i * K * ((-1) ** (i + 1) * factorial(i))


def test_degree_bound_monotone():
    M = FiliformR(1)
    counts = []
    for D in (1, 2, 3):
        v, names = general_poly("v", ("x", "z"), D)
        sol = ansatz_solve(TransversalAnsatz(M, "a", D), lv_family(M, v), {"v": (v, names)})
        counts.append(len(sol.directions) if sol.solvable else -1)
    assert counts == sorted(counts)


def test_n1_forces_linear_v():
    M = FiliformR(1)
    v, names = general_poly("v", ("x", "z"), 3)
    rep = solve_transversal(M, "a", lv_family(M, v), 3, loop_unknowns={"v": (v, names)},
                            lam_builder=lambda vals: lv_family(M, vals["v"]))
    assert rep.solution.forced_loop_form() == {"v": P("c1*x")}
    assert not rep.generation.ok and rep.generation.dim < 4
    assert not rep.ok


def test_g5_forces_vanishing_h2():
    M = G5()
    v, names = general_poly("v", ("x", "z"), 3)
    rep = solve_transversal(M, "H", lv_family(M, v), 3, loop_unknowns={"v": (v, names)},
                            lam_builder=lambda vals: lv_family(M, vals["v"]))
    assert rep.solution.solvable
    assert rep.solution.vanishes_identically("h2")
    assert not rep.generation.ok
    assert not rep.generation_all.ok and rep.generation_all.dim < 5


def test_g5_nonlinear_v_has_no_transversal():
    M = G5()
    for v in ("x^2", "x^2 + z^2"):
        assert not ansatz_solve(TransversalAnsatz(M, "H", 3), lv_family(M, P(v))).solvable


def test_generation_examples():
    M = FiliformR(2)
    ans = TransversalAnsatz(M, "a")
    res = generation_check(M, [lv_family(M, P("x^2")), ans.family({"h1": "0", "h2": "-2*k"})])
    assert res.ok and res.dim == 5
    M1 = FiliformR(1)
    res = generation_check(M1, [lv_family(M1, P("2*x"))])
    assert not res.ok and res.dim == 3


@pytest.mark.parametrize("model, tag, trivial", [
    (FiliformR(2), "a", True), (FiliformR(2), "center", False), (FiliformR(2), "k", False),
    (Amalg(2, 2), "ad", True), (Amalg(2, 2), "center", False),
    (F4(), "H1", True), (F4(), "H2", True), (G5(), "H", True), (G5(), "center", False)])
def test_core(model, tag, trivial):
    assert core_check(model, tag).trivial is trivial


def test_group_algebras_have_full_dimension():
    for M in (FiliformR(2), Amalg(2, 2), F4(), G5()):
        assert group_algebra(M).dim == M.dim


def test_check_transversal_report():
    M = FiliformR(2)
    rep = check_transversal(M, "a", lv_family(M, P("x^2")), {"h1": "0", "h2": "-2*k"})
    assert rep.ok
    data = rep.to_json()
    assert data["verdict"] is True and "degree <= 3" in data["quantifier"]


def test_two_sided_printed_identities():
    x = Poly.var("x")
    assert two_sided_residual([2 * x, 3 * x ** 2], [0, 0]).is_zero()
    assert two_sided_residual([x, x ** 2], [K, 0]) == P("-x*k")
    y = Poly.var("y")
    assert two_sided_amalg_residual([x, x ** 2], [y, y ** 2], [0, 0], [0, 0]).is_zero()


def test_two_sided_model_route():
    assert two_sided_model_residual(SectionSpec(make_spec("LVN", v1="2*x", v2="3*x^2")), [0, 0]).is_zero()
    assert not two_sided_model_residual(SectionSpec(make_spec("LVN", v1="x", v2="x^2 + z")), [0, 0]).is_zero()
    assert two_sided_model_residual(SectionSpec(reference_spec("LAMALG")), [0] * 4).is_zero()


def test_lv_amalgamated_discrepancy():
    M = Amalg(2, 2)
    v = P("x^2 + z^2")
    shown = ansatz_solve(TransversalAnsatz(M, "ad", 3), lv_family(M, v, "displayed"))
    assert not shown.solvable
    rep = solve_transversal(M, "ad", lv_family(M, v, "swapped"), 3)
    assert rep.solution.unique
    assert rep.solution.member()["h2"] == -2 * K and rep.solution.member()["f2"] == -2 * K
    assert rep.generation.dim == 6 and not rep.generation.ok


def test_section_family_matches_lv_placement():
    spec = SectionSpec(make_spec("LV", v="x^2"))
    assert left_family(spec) == lv_family(FiliformR(1), P("x^2"))
