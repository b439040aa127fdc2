"""Lie algebra of the multiplication group of a loop.

Translations are unipotent triangular polynomial maps, so each has a
polynomial logarithm.  The algebra of the group generated by a family of
translations is the bracket closure of the span of their logarithms; for
simply connected nilpotent groups the closed subgroup generated by a set is
the exponential of the subalgebra generated by its logarithms.

Logarithms of ``lambda_p`` depend polynomially on ``p``.  The default
extraction treats ``p`` as symbolic and reads off the coefficient field of
every monomial in ``p``; the span of these fields is exactly the span of all
``log(lambda_p)``.  The ``grid`` method evaluates ``p`` on the integer box
``{-g..g}^3`` instead and relies on interpolation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .linalg import nullspace
from .loops import COORDS, LoopError, LoopSpec, left_translation, properness_check, right_translation
from .poly import Poly
from .structure import ModelVerdict, catalog_entry, from_field_span, identify_model, model_dim
from .trimap import TriangularMap
from .vfield import (DEFAULT_MAX_DEGREE, DEFAULT_MAX_DIM, ClosureCapExceeded, FieldSpan, VectorField,
                     bracket, lie_closure, span_of)

SIDES = ("left", "right", "both")
POINT_VARS = ("px", "py", "pz")
CAP_STATE = "multiplication group not a finite-dimensional Lie group at this cap"


class SeriesError(ArithmeticError):
    """A log/exp series failed to terminate: the input is not unipotent triangular."""


class ImproperLoop(LoopError):
    pass


def _series_bound(polys: Sequence[Poly], n: int) -> int:
    # nilpotency index of a triangular unipotent operator on these degrees
    deg = max([p.total_degree() for p in polys] + [1])
    return (deg + 1) ** n + 1


def map_log(m: TriangularMap, bound: int | None = None) -> VectorField:
    """The field ``V`` with ``exp(V) = m``, via the series of ``log`` on the pullback operator."""
    if bound is None:
        bound = _series_bound(m.images, len(m.coords))
    coeffs = []
    for c in m.coords:
        term = Poly.var(c)
        total = Poly.zero()
        for j in range(1, bound + 1):
            term = m.pullback(term) - term
            if term.is_zero():
                break
            total = total + term * Fraction((-1) ** (j + 1), j)
        else:
            raise SeriesError(f"log series for {c} did not terminate within {bound} terms")
        coeffs.append(total)
    return VectorField(coeffs, m.coords)


def map_exp(V: VectorField, bound: int | None = None, order: Sequence[str] | None = None) -> TriangularMap:
    """Time-one flow of ``V`` from the terminating exponential series of the derivation."""
    if bound is None:
        bound = _series_bound(V.coeffs, len(V.coords))
    images = []
    for c in V.coords:
        term = Poly.var(c)
        total = term
        for j in range(1, bound + 1):
            term = V.apply(term)
            if term.is_zero():
                break
            total = total + term * Fraction(1, factorial(j))
        else:
            raise SeriesError(f"exp series for {c} did not terminate within {bound} terms")
        images.append(total)
    return TriangularMap(images, V.coords, order)


def _translation(spec: LoopSpec, side: str, p) -> TriangularMap:
    return left_translation(spec, p) if side == "left" else right_translation(spec, p)


def _parameter_degree(spec: LoopSpec) -> int:
    return max([p.total_degree() for _, p in spec.params] + [0])


def grid_radius(spec: LoopSpec) -> int:
    return _parameter_degree(spec) + 1


def _symbolic_generators(spec: LoopSpec, side: str) -> list:
    p = tuple(Poly.var(v) for v in POINT_VARS)
    V = map_log(_translation(spec, side, p))
    per_monomial: dict = {}
    for i, coef in enumerate(V.coeffs):
        for key, rest in coef.coefficients_in(POINT_VARS).items():
            per_monomial.setdefault(key, [Poly.zero()] * len(COORDS))[i] = rest
    out = []
    for key in sorted(per_monomial):
        X = VectorField(per_monomial[key], COORDS)
        if not X.is_zero():
            out.append(X)
    return out


def _grid_generators(spec: LoopSpec, side: str, radius: int) -> list:
    r = range(-radius, radius + 1)
    out = []
    for p in itertools.product(r, repeat=3):
        if p == (0, 0, 0):
            continue
        X = map_log(_translation(spec, side, tuple(Fraction(v) for v in p)))
        if not X.is_zero():
            out.append(X)
    return out


def translation_generators(spec: LoopSpec, side: str = "both", method: str = "symbolic",
                           grid: int | None = None) -> list:
    """Fields spanning the logs of all left and/or right translations."""
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, not {side!r}")
    if method not in ("symbolic", "grid"):
        raise ValueError(f"method must be 'symbolic' or 'grid', not {method!r}")
    sides = ("left", "right") if side == "both" else (side,)
    out: list = []
    for s in sides:
        if method == "symbolic":
            out += _symbolic_generators(spec, s)
        else:
            out += _grid_generators(spec, s, grid if grid is not None else grid_radius(spec))
    return out


def translation_span(spec: LoopSpec, side: str = "both", method: str = "symbolic",
                     grid: int | None = None) -> FieldSpan:
    return span_of(translation_generators(spec, side, method, grid), COORDS)


# -- predictions -------------------------------------------------------------

def _univariate_degree(p: Poly, var: str) -> int | None:
    """Degree of ``p`` if it involves ``var`` only, else None."""
    if not set(p.free_vars()) <= {var}:
        return None
    return p.total_degree()


def _is_monomial_family(polys: Sequence[Poly], var: str) -> bool:
    """``polys[i-1] = a_i * var^i`` for every ``i``."""
    for i, p in enumerate(polys, start=1):
        if not set(p.free_vars()) <= {var}:
            return False
        if any(sum(e) != i for e in p.terms):
            return False
    return True


@dataclass(frozen=True)
class Prediction:
    family: str
    params: tuple
    source: str

    @property
    def name(self) -> str:
        return catalog_entry(self.family, self.params).name

    @property
    def dim(self) -> int:
        return model_dim(self.family, self.params)

    def to_json(self) -> dict:
        return {"model": self.name, "dim": self.dim, "source": self.source}


def predicted_model(spec: LoopSpec) -> Prediction | None:
    """Isomorphism type of ``Mult`` claimed for this parameter shape, when one is claimed."""
    fam = spec.family
    if fam == "LF":
        n = _univariate_degree(spec["f"], "y")
        if n is not None and n >= 1:
            return Prediction("amalgamated", tuple(sorted((2, n))),
                              "f = f(y) polynomial of degree n gives f_4 ⊕_z f_{n+2}")
    if fam == "LV":
        v = spec["v"]
        n = _univariate_degree(v, "x")
        if n is not None and n >= 2:
            return Prediction("filiform+abelian", (n, 1),
                              "v = v(x) polynomial of degree n >= 2 gives f_{n+2} ⊕ R")
        px, qz = v.subs({"z": 0}), v.subs({"x": 0})
        if (px + qz - v).is_zero() and not px.is_zero() and not qz.is_zero():
            n, m = px.total_degree(), qz.total_degree()
            if (n, m) != (1, 1):
                return Prediction("amalgamated", tuple(sorted((n, m))),
                                  "v = p(x) + q(z), degrees (n, m) != (1, 1), gives f_{n+2} ⊕_z f_{m+2}")
    if fam == "LVN" and spec.n >= 2 and _is_monomial_family(spec.vs(), "x") and not spec.vs()[-1].is_zero():
        return Prediction("filiform+abelian", (spec.n, 1),
                          "v_i = a_i x^i with a_n != 0, n >= 2, gives f_{n+2} ⊕ R")
    if (fam == "LAMALG" and spec.n >= 2 and spec.m >= 2
            and _is_monomial_family(spec.vs(), "x") and _is_monomial_family(spec.us(), "y")
            and not spec.vs()[-1].is_zero() and not spec.us()[-1].is_zero()):
        return Prediction("amalgamated", tuple(sorted((spec.n, spec.m))),
                          "v_i = a_i x^i, u_j = b_j y^j with n, m >= 2 gives f_{n+2} ⊕_z f_{m+2}")
    return None


# -- pipeline ----------------------------------------------------------------

@dataclass(frozen=True)
class ClosureResult:
    """A bracket closure and its identification, or the cap that stopped it."""

    side: str
    span: FieldSpan | None
    verdict: ModelVerdict | None
    cap_message: str | None = None

    @property
    def dim(self) -> int | None:
        return None if self.span is None else self.span.dim

    def to_json(self) -> dict:
        if self.span is None:
            return {"side": self.side, "state": CAP_STATE, "cap": self.cap_message}
        out = {"side": self.side, "state": "closed", "dim": self.span.dim,
               "basis": [str(X) for X in self.span.basis]}
        out.update(self.verdict.to_json())
        return out


def _close(side: str, gens: list, max_dim: int, max_degree: int, max_n: int, max_k: int) -> ClosureResult:
    try:
        S = lie_closure(gens, max_dim=max_dim, max_degree=max_degree)
    except ClosureCapExceeded as exc:
        return ClosureResult(side, None, None, str(exc))
    return ClosureResult(side, S, identify_model(from_field_span(S), max_n, max_k))


def _stabilizer(S: FieldSpan) -> list:
    """Basis of the fields in ``S`` vanishing at the origin."""
    origin = [X.at((0, 0, 0)) for X in S.basis]
    rows = [[Poly.coerce(origin[j][i]).constant_value() for j in range(S.dim)]
            for i in range(len(COORDS))]
    out = []
    for vec in nullspace(rows, S.dim):
        X = VectorField.zero(COORDS)
        for c, B in zip(vec, S.basis):
            if c:
                X = X + B * c
        out.append(X)
    return out


@dataclass(frozen=True)
class IdentifyReport:
    spec: LoopSpec
    left: ClosureResult
    right: ClosureResult
    mult: ClosureResult
    prediction: Prediction | None
    inner: dict = field(default_factory=dict)
    settings: dict = field(default_factory=dict)

    @property
    def mult_dim(self) -> int | None:
        return self.mult.dim

    @property
    def capped(self) -> bool:
        return self.mult.span is None

    @property
    def agreement(self) -> bool | None:
        if self.prediction is None or self.capped:
            return None
        fp = catalog_entry(self.prediction.family, self.prediction.params).fingerprint
        return fp == self.mult.verdict.fingerprint

    @property
    def state(self) -> str:
        return CAP_STATE if self.capped else "closed"

    def to_json(self) -> dict:
        return {
            "loop": self.spec.to_json(),
            "settings": dict(self.settings),
            "state": self.state,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "mult": self.mult.to_json(),
            "inner": dict(self.inner),
            "prediction": None if self.prediction is None else self.prediction.to_json(),
            "agreement": self.agreement,
        }


def identify_mult(spec: LoopSpec, max_dim: int = DEFAULT_MAX_DIM, max_degree: int = DEFAULT_MAX_DEGREE,
                  method: str = "symbolic", grid: int | None = None,
                  max_n: int = 8, max_k: int = 8) -> IdentifyReport:
    """Close the translation logs on each side and together, and identify the results."""
    proper = properness_check(spec)
    if not proper:
        raise ImproperLoop(f"{spec.family}: {proper.reason}")
    gens = {s: translation_generators(spec, s, method, grid) for s in ("left", "right")}
    caps = (max_dim, max_degree, max_n, max_k)
    left = _close("left", gens["left"], *caps)
    right = _close("right", gens["right"], *caps)
    mult = _close("both", gens["left"] + gens["right"], *caps)
    inner: dict = {}
    if mult.span is not None:
        stab = _stabilizer(mult.span)
        inner = {"dim": mult.span.dim - len(COORDS), "stabilizer_dim": len(stab),
                 "abelian": _commute(stab),
                 "basis": [str(X) for X in stab]}
    settings = {"max_dim": max_dim, "max_degree": max_degree, "method": method,
                "grid": grid if grid is not None else grid_radius(spec),
                "catalog_max_n": max_n, "catalog_max_k": max_k}
    return IdentifyReport(spec, left, right, mult, predicted_model(spec), inner, settings)


def _commute(fields: list) -> bool:
    return all(bracket(a, b).is_zero() for i, a in enumerate(fields) for b in fields[i + 1:])
