import random
from fractions import Fraction

import pytest

from loopmult.loops import (FAMILIES, LoopError, LoopSpec, centre_test, grid_points, left_translation, loop_ldiv,
                            loop_mul, loop_rdiv, make_spec, properness_check, reference_spec, right_translation,
                            verify_axioms)
from loopmult.poly import Poly

F = Fraction


def rand_point(rng):
    return tuple(F(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(3))


def test_documented_products():
    lf = make_spec("LF", f="y^2")
    assert loop_mul(lf, (0, 1, 0), (1, 0, 0)) == (1, 1, F(-1, 2))
    lv = make_spec("LV", v="x^2")
    assert loop_mul(lv, (1, 0, 0), (2, 0, 0)) == (3, -2, 0)
    assert loop_ldiv(lv, (1, 0, 0), (3, -2, 0)) == (2, 0, 0)
    assert loop_rdiv(lv, (3, -2, 0), (2, 0, 0)) == (1, 0, 0)


def test_documented_translations():
    lf = make_spec("LF", f="y^2")
    assert right_translation(lf, (1, 0, 0)).to_strings() == ["x + 1", "y", "-y^2 + 1/2*y + z"]
    lv = make_spec("LV", v="x^2")
    assert left_translation(lv, (1, 0, 0)).to_strings() == ["x + 1", "-x + y", "z"]


@pytest.mark.parametrize("family", FAMILIES)
def test_reference_axioms_on_grid(family):
    rep = verify_axioms(reference_spec(family), radius=2)
    assert rep.ok, rep.failures[:3]
    assert rep.checked == 125 * 125


@pytest.mark.parametrize("family", FAMILIES)
def test_translations_match_product(family):
    spec = reference_spec(family)
    rng = random.Random(family)
    for _ in range(100):
        a, q = rand_point(rng), rand_point(rng)
        assert left_translation(spec, a).apply(q) == loop_mul(spec, a, q)
        assert right_translation(spec, a).apply(q) == loop_mul(spec, q, a)
        m = left_translation(spec, a)
        assert m.compose(m.inverse()).is_identity()


@pytest.mark.parametrize("family", FAMILIES)
def test_divisions_round_trip(family):
    spec = reference_spec(family)
    rng = random.Random(family + "div")
    for _ in range(50):
        a, b = rand_point(rng), rand_point(rng)
        assert loop_mul(spec, a, loop_ldiv(spec, a, b)) == b
        assert loop_mul(spec, loop_rdiv(spec, b, a), a) == b


def test_centre():
    lv = make_spec("LV", v="x^2")
    assert centre_test(lv, (0, 0, 0))
    assert centre_test(lv, (0, 5, 7))
    y, z = Poly.var("s"), Poly.var("t")
    assert centre_test(lv, (Poly.zero(), y, z))
    assert not centre_test(lv, (1, 0, 0))
    for fam in FAMILIES:
        assert centre_test(reference_spec(fam), (0, 0, 0))


def test_lv_with_z_dependence_loses_the_central_plane():
    lv = make_spec("LV", v="x^2 + z^2")
    assert centre_test(lv, (0, 1, 0))
    assert not centre_test(lv, (0, 0, 1))


def test_properness():
    assert properness_check(make_spec("LV", v="x^2"))
    assert not properness_check(make_spec("LV", v="2*x"))
    assert not properness_check(make_spec("LH", h="3*x"))
    assert properness_check(make_spec("LH", h="x^2"))
    assert properness_check(make_spec("LF", f="x*y"))
    assert not properness_check(reference_spec("LG5"))  # v2 = x is linear on both axes
    assert properness_check(make_spec("LG5", v1="x^2", v2="x^3"))


def test_spec_validation():
    with pytest.raises(LoopError):
        make_spec("LV", v="x^2 + 1")  # must vanish at the origin
    with pytest.raises(LoopError):
        make_spec("LH", h="y")  # h depends on x only
    with pytest.raises(LoopError):
        make_spec("LF")
    with pytest.raises(LoopError):
        LoopSpec("LQ", ())
    with pytest.raises(LoopError):
        LoopSpec.from_mapping({"v": "x^2"})


def test_from_mapping_round_trip():
    spec = LoopSpec.from_mapping({"family": "LAMALG", "v1": "x", "v2": "x^2", "u1": "y", "u2": "y^2"})
    assert spec == reference_spec("LAMALG")
    assert LoopSpec.from_mapping(spec.to_json()) == spec


def test_grid_size():
    assert len(grid_points(2)) == 125
