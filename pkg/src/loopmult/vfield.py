"""Polynomial vector fields, their Lie brackets, exact spans and bracket closure."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import Poly, PolyError, sort_vars

COORDS = ("x", "y", "z")

DEFAULT_MAX_DIM = 64
DEFAULT_MAX_DEGREE = 24


class ClosureCapExceeded(RuntimeError):
    """Bracket closure outgrew its dimension or degree cap."""

    def __init__(self, message, dim=None, degree=None):
        super().__init__(message)
        self.dim = dim
        self.degree = degree


class VectorField:
    """``sum_i coeffs[i] * d/d coords[i]`` with polynomial coefficients."""

    __slots__ = ("coords", "coeffs")

    def __init__(self, coeffs: Sequence, coords: Sequence[str] = COORDS):
        coords = tuple(coords)
        if len(coeffs) != len(coords):
            raise PolyError(f"{len(coeffs)} coefficients for {len(coords)} coordinates")
        polys = [Poly.coerce(c) for c in coeffs]
        allvars = sort_vars(list(coords) + [v for p in polys for v in p.free_vars()])
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "coeffs", tuple(p.with_vars(allvars) for p in polys))

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    @classmethod
    def zero(cls, coords: Sequence[str] = COORDS) -> "VectorField":
        return cls([0] * len(coords), coords)

    @classmethod
    def partial(cls, name: str, coords: Sequence[str] = COORDS) -> "VectorField":
        return cls([1 if c == name else 0 for c in coords], coords)

    @classmethod
    def from_strings(cls, items: Sequence[str], coords: Sequence[str] = COORDS) -> "VectorField":
        return cls([Poly.parse(s) for s in items], coords)

    def to_strings(self) -> list:
        return [str(p) for p in self.coeffs]

    def _check(self, other: "VectorField"):
        if not isinstance(other, VectorField):
            raise TypeError(f"expected VectorField, got {type(other).__name__}")
        if other.coords != self.coords:
            raise PolyError(f"coordinate mismatch {self.coords} vs {other.coords}")

    def __add__(self, other):
        self._check(other)
        return VectorField([a + b for a, b in zip(self.coeffs, other.coeffs)], self.coords)

    def __sub__(self, other):
        self._check(other)
        return VectorField([a - b for a, b in zip(self.coeffs, other.coeffs)], self.coords)

    def __neg__(self):
        return VectorField([-a for a in self.coeffs], self.coords)

    def __mul__(self, scalar):
        return VectorField([a * scalar for a in self.coeffs], self.coords)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.coords == other.coords and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coords, self.coeffs))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coeffs)

    def degree(self) -> int:
        return max(p.total_degree() for p in self.coeffs)

    def apply(self, g: Poly) -> Poly:
        """The derivation: ``V(g) = sum_i V_i * dg/dx_i``."""
        g = Poly.coerce(g)
        out = Poly.zero()
        for c, coef in zip(self.coords, self.coeffs):
            if coef.is_zero():
                continue
            gc = g if c in g.vars else g.with_vars(sort_vars(g.vars + (c,)))
            out = out + coef * gc.diff(c)
        return out

    def at(self, point: Sequence) -> tuple:
        mapping = dict(zip(self.coords, point))
        return tuple(p.subs(mapping) for p in self.coeffs)

    def __str__(self):
        parts = []
        for c, p in zip(self.coords, self.coeffs):
            if p.is_zero():
                continue
            body = f"d{c}" if p == 1 else f"({p})*d{c}"
            parts.append(body)
        return " + ".join(parts) if parts else "0"

    __repr__ = lambda self: f"VectorField({self.to_strings()}, coords={self.coords})"

    def key_vector(self) -> dict:
        """Sparse coordinates indexed by (coordinate index, monomial exponents)."""
        out = {}
        for i, p in enumerate(self.coeffs):
            q = p.with_vars(self.coords)
            for exps, c in q.terms.items():
                out[(i, exps)] = c
        return out

    @classmethod
    def from_key_vector(cls, vec: dict, coords: Sequence[str]) -> "VectorField":
        coeffs = [dict() for _ in coords]
        for (i, exps), c in vec.items():
            coeffs[i][exps] = c
        return cls([Poly(t, coords) for t in coeffs], coords)


def bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Lie bracket ``[X, Y]_i = X(Y_i) - Y(X_i)``."""
    X._check(Y)
    return VectorField([X.apply(yi) - Y.apply(xi) for xi, yi in zip(X.coeffs, Y.coeffs)],
                       X.coords)


def _order_key(key):
    i, exps = key
    return (i, -sum(exps), tuple(-e for e in exps))


def _pivot(vec: dict):
    return min(vec, key=_order_key)


@dataclass(frozen=True)
class FieldSpan:
    """Reduced echelon basis of a span of vector fields.

    ``basis[j]`` has coefficient 1 at ``pivots[j]`` and 0 at every other pivot,
    so the basis depends only on the span.
    """

    coords: tuple
    basis: tuple = ()
    pivots: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _vectors(self):
        return [b.key_vector() for b in self.basis]

    def reduce(self, X: VectorField) -> VectorField:
        vec = _reduce(X.key_vector(), self._vectors(), self.pivots)
        return VectorField.from_key_vector(vec, self.coords)

    def contains(self, X: VectorField) -> bool:
        return not _reduce(X.key_vector(), self._vectors(), self.pivots)

    def coordinates(self, X: VectorField) -> list:
        """Exact coefficients of ``X`` in ``basis``; raises if ``X`` is outside."""
        vec = X.key_vector()
        coeffs = [vec.get(p, Fraction(0)) for p in self.pivots]
        rebuilt: dict = {}
        for c, bv in zip(coeffs, self._vectors()):
            for k, v in bv.items():
                rebuilt[k] = rebuilt.get(k, 0) + c * v
        rebuilt = {k: v for k, v in rebuilt.items() if v}
        if rebuilt != vec:
            raise ValueError(f"{X} is not in the span")
        return coeffs

    def is_subspace_of(self, other: "FieldSpan") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        if not isinstance(other, FieldSpan):
            return NotImplemented
        return self.coords == other.coords and self.basis == other.basis

    def __hash__(self):
        return hash((self.coords, self.basis))

    def to_strings(self) -> list:
        return [b.to_strings() for b in self.basis]


def _reduce(vec: dict, basis_vecs: list, pivots: Sequence) -> dict:
    vec = dict(vec)
    for bv, p in zip(basis_vecs, pivots):
        c = vec.get(p)
        if c:
            for k, v in bv.items():
                s = vec.get(k, 0) - c * v
                if s:
                    vec[k] = s
                else:
                    vec.pop(k, None)
    return vec


class _Echelon:
    """Mutable reduced-echelon builder behind FieldSpan and lie_closure."""

    def __init__(self, coords):
        self.coords = tuple(coords)
        self.vecs: list = []
        self.pivots: list = []

    def insert(self, vec: dict):
        """Reduce ``vec``; on a nonzero remainder add it and return it, else None."""
        rem = _reduce(vec, self.vecs, self.pivots)
        if not rem:
            return None
        p = _pivot(rem)
        inv = 1 / rem[p]
        rem = {k: v * inv for k, v in rem.items()}
        for j, bv in enumerate(self.vecs):
            c = bv.get(p)
            if c:
                new = dict(bv)
                for k, v in rem.items():
                    s = new.get(k, 0) - c * v
                    if s:
                        new[k] = s
                    else:
                        new.pop(k, None)
                self.vecs[j] = new
        order = sorted(range(len(self.vecs) + 1),
                       key=lambda j: _order_key((self.pivots + [p])[j]))
        vecs = self.vecs + [rem]
        pivs = self.pivots + [p]
        self.vecs = [vecs[j] for j in order]
        self.pivots = [pivs[j] for j in order]
        return rem

    def freeze(self) -> FieldSpan:
        basis = tuple(VectorField.from_key_vector(v, self.coords) for v in self.vecs)
        return FieldSpan(self.coords, basis, tuple(self.pivots))

    @classmethod
    def from_span(cls, S: FieldSpan) -> "_Echelon":
        e = cls(S.coords)
        e.vecs = [b.key_vector() for b in S.basis]
        e.pivots = list(S.pivots)
        return e


def span_insert(S: FieldSpan, X: VectorField) -> tuple:
    """Insert ``X`` into ``S``; returns ``(new span, was_new)``."""
    if X.coords != S.coords:
        raise PolyError(f"coordinate mismatch {X.coords} vs {S.coords}")
    e = _Echelon.from_span(S)
    added = e.insert(X.key_vector())
    return (e.freeze(), True) if added is not None else (S, False)


def span_of(fields: Iterable[VectorField], coords: Sequence[str] = COORDS) -> FieldSpan:
    fields = list(fields)
    if fields:
        coords = fields[0].coords
    e = _Echelon(coords)
    for X in fields:
        if X.coords != tuple(coords):
            raise PolyError(f"coordinate mismatch {X.coords} vs {tuple(coords)}")
        e.insert(X.key_vector())
    return e.freeze()


def lie_closure(generators: Sequence[VectorField], max_dim: int = DEFAULT_MAX_DIM,
                max_degree: int = DEFAULT_MAX_DEGREE) -> FieldSpan:
    """Smallest bracket-closed span containing ``generators``.

    Every newly added element is bracketed against all earlier ones; since
    the added elements span the result, closure holds once the worklist is
    exhausted.  Exceeding ``max_dim`` or ``max_degree`` raises
    :class:`ClosureCapExceeded` instead of truncating.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("lie_closure needs at least one generator")
    if max_dim < 1 or max_degree < 0:
        raise ValueError("caps must be positive")
    coords = generators[0].coords
    ech = _Echelon(coords)
    added: list = []

    def push(X: VectorField):
        if X.coords != coords:
            raise PolyError(f"coordinate mismatch {X.coords} vs {coords}")
        rem = ech.insert(X.key_vector())
        if rem is None:
            return
        field = VectorField.from_key_vector(rem, coords)
        if field.degree() > max_degree:
            raise ClosureCapExceeded(
                f"coefficient degree {field.degree()} exceeds cap {max_degree}",
                dim=len(ech.vecs), degree=field.degree())
        if len(ech.vecs) > max_dim:
            raise ClosureCapExceeded(
                f"span dimension {len(ech.vecs)} exceeds cap {max_dim}",
                dim=len(ech.vecs), degree=field.degree())
        added.append(field)

    for g in generators:
        push(g)
    i = 0
    while i < len(added):
        newest = added[i]
        for j in range(i):
            push(bracket(added[j], newest))
        i += 1
    return ech.freeze()


def is_closed(S: FieldSpan) -> bool:
    return all(S.contains(bracket(a, b))
               for i, a in enumerate(S.basis) for b in S.basis[i + 1:])
