"""Unipotent triangular polynomial self-maps of coordinate space."""
from __future__ import annotations

from typing import Mapping, Sequence

from .poly import Poly, PolyError, sort_vars


class NotTriangular(PolyError):
    pass


def triangular_order(deps: Mapping[str, set], coords: Sequence[str]) -> tuple:
    """Order in which every coordinate depends only on earlier ones.

    Ties are broken by position in ``coords``; raises NotTriangular on a cycle.
    """
    coords = tuple(coords)
    done: list = []
    remaining = list(coords)
    while remaining:
        ready = [c for c in remaining if deps.get(c, set()) <= set(done)]
        if not ready:
            raise NotTriangular(f"no triangular order for dependencies {deps}")
        done.append(ready[0])
        remaining.remove(ready[0])
    return tuple(done)


class TriangularMap:
    """``p -> images(p)`` with ``images[c] - c`` a polynomial in coordinates before ``c``.

    ``coords`` lists coordinates in their natural (point) order and ``order``
    the triangular order.  Image polynomials may also involve symbolic
    parameters that are not coordinates.
    """

    __slots__ = ("coords", "order", "images")

    def __init__(self, images: Sequence, coords: Sequence[str] = ("x", "y", "z"),
                 order: Sequence[str] | None = None):
        coords = tuple(coords)
        if len(images) != len(coords):
            raise PolyError(f"{len(images)} images for {len(coords)} coordinates")
        imgs = tuple(Poly.coerce(p) for p in images)
        deps = {}
        for c, p in zip(coords, imgs):
            shift = p - Poly.var(c)
            deps[c] = set(shift.free_vars()) & set(coords)
        if order is None:
            order = triangular_order(deps, coords)
        order = tuple(order)
        if sorted(order) != sorted(coords):
            raise PolyError(f"order {order} is not a permutation of {coords}")
        seen: set = set()
        for c in order:
            if not deps[c] <= seen:
                raise NotTriangular(
                    f"image of {c} depends on {sorted(deps[c] - seen)}, not earlier in {order}")
            seen.add(c)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "images", imgs)

    def __setattr__(self, name, value):
        raise AttributeError("TriangularMap is immutable")

    @classmethod
    def identity(cls, coords=("x", "y", "z"), order=None) -> "TriangularMap":
        return cls([Poly.var(c) for c in coords], coords, order)

    @classmethod
    def from_strings(cls, items: Sequence[str], coords=("x", "y", "z"), order=None):
        return cls([Poly.parse(s) for s in items], coords, order)

    def shifts(self) -> tuple:
        """``images[c] - c`` per coordinate."""
        return tuple(p - Poly.var(c) for c, p in zip(self.coords, self.images))

    def is_identity(self) -> bool:
        return all(s.is_zero() for s in self.shifts())

    def apply(self, point: Sequence):
        mapping = dict(zip(self.coords, point))
        return tuple(p.at(mapping) for p in self.images)

    __call__ = apply

    def pullback(self, g: Poly) -> Poly:
        """``g o self`` as a polynomial."""
        return Poly.coerce(g).subs(dict(zip(self.coords, self.images)))

    def compose(self, other: "TriangularMap") -> "TriangularMap":
        """``self o other``: apply ``other`` first."""
        self._check(other)
        mapping = dict(zip(other.coords, other.images))
        imgs = [p.subs(mapping) for p in self.images]
        order = self.order if self.order == other.order else None
        return TriangularMap(imgs, self.coords, order)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "TriangularMap":
        inv: dict = {}
        shifts = dict(zip(self.coords, self.shifts()))
        for c in self.order:
            inv[c] = Poly.var(c) - shifts[c].subs(inv)
        return TriangularMap([inv[c] for c in self.coords], self.coords, self.order)

    def _check(self, other):
        if not isinstance(other, TriangularMap):
            raise TypeError(f"expected TriangularMap, got {type(other).__name__}")
        if other.coords != self.coords:
            raise PolyError(f"coordinate mismatch {self.coords} vs {other.coords}")

    def __eq__(self, other):
        if not isinstance(other, TriangularMap):
            return NotImplemented
        return self.coords == other.coords and self.images == other.images

    def __hash__(self):
        return hash((self.coords, self.images))

    def to_strings(self) -> list:
        return [str(p) for p in self.images]

    def __repr__(self):
        body = ", ".join(f"{c} -> {p}" for c, p in zip(self.coords, self.images))
        return f"TriangularMap({body}; order={''.join(self.order)})"

    def variables(self) -> tuple:
        return sort_vars(list(self.coords) + [v for p in self.images for v in p.free_vars()])
