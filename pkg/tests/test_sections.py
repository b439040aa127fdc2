import random
from fractions import Fraction

import pytest

from loopmult.loops import FAMILIES, loop_mul, make_spec, reference_spec
from loopmult.sections import (SectionError, SectionSpec, induced_mul, induced_parts, lvn_subgroup_formula,
                               oracle_agreement, section_image, sharp_transitivity_check)

F = Fraction


def test_section_images():
    lf = SectionSpec(make_spec("LF", f="y^2"))
    assert section_image(lf, (1, 1, 0)) == (1, 1, 1, 0)
    lv = SectionSpec(make_spec("LV", v="x^2"))
    g = section_image(lv, (2, 0, 1))
    assert lv.model.name == "FiliformR" and g[1] == 4


def test_induced_examples():
    lf = SectionSpec(make_spec("LF", f="y^2"))
    assert induced_mul(lf, (0, 1, 0), (1, 0, 0)) == (1, 1, F(-1, 2))
    for fam in FAMILIES:
        spec = SectionSpec(reference_spec(fam))
        q = (F(3), F(-1, 2), F(5, 3))
        assert induced_mul(spec, (0, 0, 0), q) == q


@pytest.mark.parametrize("family", FAMILIES)
def test_oracle_equivalence(family):
    ok, bad = oracle_agreement(SectionSpec(reference_spec(family)), samples=100, seed=1)
    assert ok, bad


@pytest.mark.parametrize("family", FAMILIES)
def test_section_lands_in_transversal(family):
    spec = SectionSpec(reference_spec(family))
    rng = random.Random(family)
    for _ in range(20):
        p = tuple(F(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(3))
        rep, _ = spec.model.coset_reduce(section_image(spec, p), spec.tag)
        assert spec.point_of(rep) == p
        assert spec.representative(spec.point_of(rep)) == rep


def test_lv_readings_in_the_amalgamated_group():
    lv = make_spec("LV", v="x^2")
    assert oracle_agreement(SectionSpec(lv, "default"))[0]
    assert oracle_agreement(SectionSpec(lv, "amalg-swapped"))[0]
    ok, bad = oracle_agreement(SectionSpec(lv, "amalg-displayed"))
    assert not ok and bad is not None


def test_lamalg_readings():
    spec = reference_spec("LAMALG")
    assert oracle_agreement(SectionSpec(spec, "displayed"))[0]
    assert not oracle_agreement(SectionSpec(spec, "swapped"))[0]


def test_unknown_reading_rejected():
    with pytest.raises(SectionError):
        SectionSpec(make_spec("LF", f="y^2"), "swapped")


def test_lvn_subgroup_part_matches_formula():
    spec = SectionSpec(make_spec("LVN", v1="x + z", v2="2*x^2", v3="x*z"))
    rng = random.Random(5)
    for _ in range(30):
        p = tuple(F(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(3))
        q = tuple(F(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(3))
        _, h = induced_parts(spec, p, q)
        assert h[1:spec.model.n + 1] == lvn_subgroup_formula(spec, p, q)


@pytest.mark.parametrize("family", FAMILIES)
def test_reference_sections_sharply_transitive(family):
    rep = sharp_transitivity_check(SectionSpec(reference_spec(family)), samples=100)
    assert rep.ok and rep.method == "triangular"


def test_trivial_parameters_give_a_group():
    spec = SectionSpec(make_spec("LV", v="0"))
    assert sharp_transitivity_check(spec, samples=20).ok
    a, b, c = (1, 2, 3), (F(-1, 2), 0, 4), (2, 2, F(1, 3))
    assert loop_mul(spec.loop, loop_mul(spec.loop, a, b), c) == loop_mul(spec.loop, a, loop_mul(spec.loop, b, c))


def test_lg5_negative_control():
    # v1 = z alone is still triangular; adding v2 = y makes the (y, z) system degenerate at s = +-1
    assert sharp_transitivity_check(SectionSpec(make_spec("LG5", v1="z", v2="0"))).ok
    rep = sharp_transitivity_check(SectionSpec(make_spec("LG5", v1="z", v2="y")))
    assert not rep.ok and rep.method == "jacobian"
    p1, _ = rep.counterexample
    assert abs(p1[0]) == 1
    assert any("-s^2 + 1" in n for n in rep.notes)
    assert rep.to_json()["counterexample"] is not None
