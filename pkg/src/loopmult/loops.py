"""Three-dimensional loop families with polynomial parameters.

Points are triples ``(x, y, z)`` of Fractions or Polys; every law below is
duck-typed so the same code evaluates concrete products, builds translation
maps and expands identities symbolically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .poly import Poly, PolyError, as_rational
from .trimap import NotTriangular, TriangularMap

FAMILIES = ("LF", "LH", "LV", "LVN", "LG5", "LAMALG")

COORDS = ("x", "y", "z")

# triangular coordinate order of all translations, per family
CANONICAL_ORDER = {"LF": ("x", "y", "z"), "LH": ("x", "y", "z"), "LV": ("x", "z", "y"),
                   "LVN": ("x", "z", "y"), "LG5": ("x", "y", "z"), "LAMALG": ("x", "y", "z")}

# variables each parameter may use
_PARAM_VARS = {"LF": ("x", "y"), "LH": ("x",), "LV": ("x", "z"), "LVN": ("x", "z"),
               "LG5": ("x", "y", "z"), "LAMALG": ("x", "y")}


class LoopError(ValueError):
    pass


class NoUniqueSolution(LoopError):
    """A division could not be solved by back-substitution."""


@dataclass(frozen=True)
class LoopSpec:
    """Family tag plus named parameter polynomials.

    Parameter names: ``f`` (LF), ``h`` (LH), ``v`` (LV), ``v1..vn`` (LVN),
    ``v1, v2`` (LG5), ``v1..vn`` and ``u1..um`` (LAMALG).
    """

    family: str
    params: tuple = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise LoopError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        params = dict(self.params)
        clean = {}
        for name, p in params.items():
            p = Poly.parse(p) if isinstance(p, str) else Poly.coerce(p)
            bad = set(p.free_vars()) - set(_PARAM_VARS[self.family])
            if bad:
                raise LoopError(f"parameter {name} of {self.family} may only use "
                                f"{_PARAM_VARS[self.family]}, found {sorted(bad)}")
            if p.constant_term():
                raise LoopError(f"parameter {name} must vanish at the origin")
            clean[name] = p
        expected = self.expected_names(clean)
        if set(clean) != set(expected):
            raise LoopError(f"{self.family} needs parameters {list(expected)}, got {sorted(clean)}")
        object.__setattr__(self, "params", tuple((k, clean[k]) for k in expected))

    def expected_names(self, given: Mapping) -> tuple:
        fam = self.family
        if fam == "LF":
            return ("f",)
        if fam == "LH":
            return ("h",)
        if fam == "LV":
            return ("v",)
        if fam == "LG5":
            return ("v1", "v2")
        vs = _indexed(given, "v")
        if fam == "LVN":
            if not vs:
                raise LoopError("LVN needs v1..vn with n >= 1")
            return tuple(f"v{i}" for i in range(1, len(vs) + 1))
        us = _indexed(given, "u")
        if not vs or not us:
            raise LoopError("LAMALG needs v1..vn and u1..um with n, m >= 1")
        return tuple(f"v{i}" for i in range(1, len(vs) + 1)) + tuple(
            f"u{j}" for j in range(1, len(us) + 1))

    def __getitem__(self, name: str) -> Poly:
        return dict(self.params)[name]

    @property
    def n(self) -> int:
        return sum(1 for k, _ in self.params if k.startswith("v") and k != "v") or 1

    @property
    def m(self) -> int:
        return sum(1 for k, _ in self.params if k.startswith("u"))

    def vs(self) -> list:
        return [p for k, p in self.params if k.startswith("v") and k != "v"]

    def us(self) -> list:
        return [p for k, p in self.params if k.startswith("u")]

    @property
    def order(self) -> tuple:
        return CANONICAL_ORDER[self.family]

    def to_json(self) -> dict:
        return {"family": self.family, **{k: str(p) for k, p in self.params}}

    @classmethod
    def from_mapping(cls, data: Mapping) -> "LoopSpec":
        data = dict(data)
        family = data.pop("family", None)
        if family is None:
            raise LoopError("loop spec needs a 'family' field")
        for k in list(data):
            if k in ("n", "m"):
                data.pop(k)
        try:
            params = {k: Poly.parse(str(v)) for k, v in data.items()}
        except PolyError as exc:
            raise LoopError(f"bad polynomial in loop spec: {exc}") from None
        return cls(family, tuple(params.items()))


def _indexed(given: Mapping, prefix: str) -> list:
    idx = sorted(int(k[len(prefix):]) for k in given
                 if k.startswith(prefix) and k[len(prefix):].isdigit())
    if idx != list(range(1, len(idx) + 1)):
        raise LoopError(f"parameters {prefix}1..{prefix}N must be numbered consecutively")
    return idx


def make_spec(family: str, **params) -> LoopSpec:
    return LoopSpec(family, tuple(params.items()))


def reference_spec(family: str) -> LoopSpec:
    """The test parameters used throughout the suite."""
    refs = {"LF": {"f": "y^2"}, "LH": {"h": "x^2"}, "LV": {"v": "x^2"},
            "LVN": {"v1": "x", "v2": "2*x^2"}, "LG5": {"v1": "x^2", "v2": "x"},
            "LAMALG": {"v1": "x", "v2": "x^2", "u1": "y", "u2": "y^2"}}
    return make_spec(family, **refs[family])


def _collapse(v):
    if isinstance(v, Poly):
        return v.constant_value() if v.is_constant() else v
    return Fraction(v)


def _at(p: Poly, **coords):
    return p.at(coords)


def _sign_term(base, i: int):
    """``(-1)^i / i! * base^i``."""
    return base ** i * Fraction((-1) ** i, factorial(i))


def loop_mul(spec: LoopSpec, p: Sequence, q: Sequence) -> tuple:
    """The closed-form product ``p * q``."""
    x1, y1, z1 = p
    x2, y2, z2 = q
    fam = spec.family
    if fam == "LF":
        f = _at(spec["f"], x=x1, y=y1)
        out = (x1 + x2, y1 + y2, z1 + z2 - x2 * f + Fraction(1, 2) * x2 ** 2 * y1)
    elif fam == "LH":
        h = _at(spec["h"], x=x1)
        out = (x1 + x2, y1 + y2 + x2 * h, z1 + z2 + y2 * h + Fraction(1, 2) * x2 * h ** 2)
    elif fam == "LV":
        out = (x1 + x2, y1 + y2 - x2 * _at(spec["v"], x=x1, z=z1), z1 + z2)
    elif fam == "LVN":
        s = sum((_sign_term(x2, i) * _at(v, x=x1, z=z1)
                 for i, v in enumerate(spec.vs(), start=1)), Fraction(0))
        out = (x1 + x2, y1 + y2 + s, z1 + z2)
    elif fam == "LG5":
        v1 = _at(spec["v1"], x=x1, y=y1, z=z1)
        v2 = _at(spec["v2"], x=x1, y=y1, z=z1)
        out = (x1 + x2, y1 + y2 - x2 * v1, z1 + z2 - x2 * v2)
    else:
        s = sum((_sign_term(x2, i) * _at(v, x=x1, y=y1)
                 for i, v in enumerate(spec.vs(), start=1)), Fraction(0))
        s += sum((_sign_term(y2, j) * _at(u, x=x1, y=y1)
                  for j, u in enumerate(spec.us(), start=1)), Fraction(0))
        out = (x1 + x2, y1 + y2, z1 + z2 + s)
    return tuple(_collapse(v) for v in out)


def _symbolic_point(prefix: str = "") -> tuple:
    return tuple(Poly.var(prefix + c if prefix else c) for c in COORDS)


def _triangular(spec: LoopSpec, images) -> TriangularMap:
    try:
        return TriangularMap(images, COORDS, spec.order)
    except NotTriangular:
        # general LG5 parameters may still be triangular in another order
        return TriangularMap(images, COORDS)


def left_translation(spec: LoopSpec, a: Sequence) -> TriangularMap:
    """``q -> a * q`` as a triangular map in the family's canonical order."""
    return _triangular(spec, loop_mul(spec, a, _symbolic_point()))


def right_translation(spec: LoopSpec, a: Sequence) -> TriangularMap:
    """``q -> q * a``; raises NotTriangular when the parameters break the triangular shape."""
    return _triangular(spec, loop_mul(spec, _symbolic_point(), a))


def _solve(m: TriangularMap, b: Sequence) -> tuple:
    return tuple(_collapse(v) for v in m.inverse().apply(b))


def loop_ldiv(spec: LoopSpec, a: Sequence, b: Sequence) -> tuple:
    """The unique ``y`` with ``a * y = b``."""
    try:
        return _solve(left_translation(spec, a), b)
    except NotTriangular as exc:
        raise NoUniqueSolution(f"left division in {spec.family}: {exc}") from None


def loop_rdiv(spec: LoopSpec, b: Sequence, a: Sequence) -> tuple:
    """The unique ``x`` with ``x * a = b`` (written ``b / a``)."""
    try:
        return _solve(right_translation(spec, a), b)
    except NotTriangular as exc:
        raise NoUniqueSolution(f"right division in {spec.family}: {exc}") from None


def centre_test(spec: LoopSpec, zpt: Sequence) -> bool:
    """Whether ``zpt`` satisfies the four centre identities for all ``x, y`` (symbolically)."""
    return not centre_defects(spec, zpt)


def centre_defects(spec: LoopSpec, zpt: Sequence) -> list:
    """Names of the centre identities that fail, with a nonzero difference."""
    X = _symbolic_point("p")
    Y = _symbolic_point("q")
    Z = tuple(as_rational(v) for v in zpt) if not any(isinstance(v, Poly) for v in zpt) else tuple(zpt)
    mul = lambda u, v: loop_mul(spec, u, v)  # noqa: E731
    checks = {
        "zx.y = z.xy": (mul(mul(Z, X), Y), mul(Z, mul(X, Y))),
        "x.yz = xy.z": (mul(X, mul(Y, Z)), mul(mul(X, Y), Z)),
        "xz.y = x.zy": (mul(mul(X, Z), Y), mul(X, mul(Z, Y))),
        "zx = xz": (mul(Z, X), mul(X, Z)),
    }
    bad = []
    for name, (lhs, rhs) in checks.items():
        diff = [Poly.coerce(a) - Poly.coerce(b) for a, b in zip(lhs, rhs)]
        if any(not d.is_zero() for d in diff):
            bad.append((name, [str(d) for d in diff]))
    return bad


def _is_linear_in(p: Poly, var: str) -> bool:
    """``p`` is ``c * var`` for a constant ``c`` (zero included)."""
    return all(sum(e) == 1 for e in p.terms) and set(p.free_vars()) <= {var}


def _is_linear(p: Poly) -> bool:
    return all(sum(e) == 1 for e in p.terms)


@dataclass(frozen=True)
class Properness:
    proper: bool
    reason: str

    def __bool__(self):
        return self.proper

    def to_json(self) -> dict:
        return {"proper": self.proper, "reason": self.reason}


def properness_check(spec: LoopSpec) -> Properness:
    """The family's generation criterion as exact coefficient checks."""
    fam = spec.family
    if fam == "LF":
        return Properness(True, "every f with f(0,0)=0 generates the group")
    if fam == "LH":
        h = spec["h"]
        if _is_linear_in(h, "x"):
            return Properness(False, f"h = {h} is linear")
        return Properness(True, f"h = {h} is nonlinear")
    if fam in ("LV", "LVN"):
        name = "v" if fam == "LV" else f"v{spec.n}"
        v = spec[name]
        ax, az = v.subs({"z": 0}), v.subs({"x": 0})
        if _is_linear_in(ax, "x") and _is_linear_in(az, "z"):
            return Properness(False, f"{name}(x,0) = {ax} and {name}(0,z) = {az} are both linear")
        return Properness(True, f"{name}(x,0) = {ax}, {name}(0,z) = {az} not both linear")
    if fam == "LG5":
        for name in ("v1", "v2"):
            v = spec[name]
            ax = v.subs({"y": 0, "z": 0})
            ayz = v.subs({"x": 0})
            if _is_linear_in(ax, "x") and _is_linear(ayz):
                return Properness(False, f"{name}(x,0,0) = {ax} and {name}(0,y,z) = {ayz} are linear")
        return Properness(True, "neither v1 nor v2 is linear on both axes")
    vn, um = spec[f"v{spec.n}"], spec[f"u{spec.m}"]
    checks = [_is_linear_in(vn.subs({"y": 0}), "x"), _is_linear_in(vn.subs({"x": 0}), "y"),
              _is_linear_in(um.subs({"y": 0}), "x"), _is_linear_in(um.subs({"x": 0}), "y")]
    if all(checks):
        return Properness(False, f"v{spec.n} and u{spec.m} are linear on both axes")
    return Properness(True, f"v{spec.n}, u{spec.m} not all linear on the axes")


def grid_points(radius: int = 2):
    r = range(-radius, radius + 1)
    return [(Fraction(a), Fraction(b), Fraction(c)) for a in r for b in r for c in r]


@dataclass(frozen=True)
class AxiomReport:
    family: str
    points: int
    checked: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"family": self.family, "grid_points": self.points, "checked_pairs": self.checked,
                "ok": self.ok, "failures": [list(f) for f in self.failures]}


def verify_axioms(spec: LoopSpec, radius: int = 2, max_failures: int = 10) -> AxiomReport:
    """Identity and both divisions on the integer grid, exactly."""
    pts = grid_points(radius)
    e = (Fraction(0),) * 3
    failures = []
    checked = 0
    for a in pts:
        if loop_mul(spec, e, a) != a or loop_mul(spec, a, e) != a:
            failures.append(("identity", _s(a)))
        try:
            linv = left_translation(spec, a).inverse()
            rinv = right_translation(spec, a).inverse()
        except NotTriangular as exc:
            failures.append(("division", _s(a), str(exc)))
            break
        for b in pts:
            checked += 1
            y = tuple(_collapse(v) for v in linv.apply(b))
            x = tuple(_collapse(v) for v in rinv.apply(b))
            if loop_mul(spec, a, y) != b:
                failures.append(("left division", _s(a), _s(b)))
            if loop_mul(spec, x, a) != b:
                failures.append(("right division", _s(a), _s(b)))
        if len(failures) >= max_failures:
            break
    return AxiomReport(spec.family, len(pts), checked, tuple(failures))


def _s(p) -> list:
    return [str(v) for v in p]
