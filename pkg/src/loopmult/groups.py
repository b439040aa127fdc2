"""Coordinate models of the nilpotent groups: laws, inverses, matrix oracles, coset splitting.

Every law works on tuples whose entries are Fractions or Polys, so the same
code multiplies concrete elements and symbolic families.  The identity is the
zero tuple in every model.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .linalg import identity as identity_matrix, matmul
from .poly import Poly, as_rational, fmt_rational


class GroupError(ValueError):
    pass


def _num(v):
    """Fractions stay Fractions; constant Polys collapse to Fractions."""
    if isinstance(v, Poly):
        return v.constant_value() if v.is_constant() else v
    return as_rational(v)


def _coef(sign_base, power: int):
    """``sign_base ** power / power!`` (``sign_base`` a scalar or Poly)."""
    if power == 0:
        return Fraction(1)
    return sign_base ** power * Fraction(1, factorial(power))


def filiform_block(c, a: Sequence, k) -> list:
    """``(n+2)``-square matrix of the filiform group element ``(c, a_1..a_n, k)``."""
    n = len(a)
    M = identity_matrix(n + 2)
    for j in range(n):
        M[0][j + 1] = a[j]
    M[0][n + 1] = k
    for i in range(1, n + 1):
        for j in range(1, i):
            M[i][j] = _coef(-c, i - j)
        M[i][n + 1] = _coef(-c, i)
    return M


class GroupModel:
    """Base class; subclasses fix ``name``, ``dim``, ``mul``, ``inv`` and subgroup tags."""

    name = "abstract"
    subgroup_tags: tuple = ()

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def coord_names(self) -> tuple:
        return tuple(f"g{i + 1}" for i in range(self.dim))

    def identity(self) -> tuple:
        return (Fraction(0),) * self.dim

    def check(self, g: Sequence) -> tuple:
        if len(g) != self.dim:
            raise GroupError(f"{self.name} element needs {self.dim} coordinates, got {len(g)}")
        return tuple(_num(v) for v in g)

    def mul(self, g: Sequence, h: Sequence) -> tuple:
        g, h = self.check(g), self.check(h)
        return tuple(_num(v) for v in self._mul(g, h))

    def inv(self, g: Sequence) -> tuple:
        return tuple(_num(v) for v in self._inv(self.check(g)))

    def commutator(self, a: Sequence, b: Sequence) -> tuple:
        """``a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def coset_reduce(self, g: Sequence, tag: str) -> tuple:
        """Split ``g = rep * h`` with ``rep`` in the zero-slot transversal and ``h`` in the subgroup."""
        if tag not in self.subgroup_tags:
            raise GroupError(f"{self.name} has no subgroup tag {tag!r}; use one of {self.subgroup_tags}")
        rep, h = self._reduce(self.check(g), tag)
        return tuple(_num(v) for v in rep), tuple(_num(v) for v in h)

    def subgroup_slots(self, tag: str) -> tuple:
        """Coordinate indices spanned by the subgroup (its elements are zero elsewhere)."""
        raise NotImplementedError

    def matrix_check(self, g: Sequence, h: Sequence) -> bool | None:
        """Whether the law agrees with the matrix representation on ``g, h``; None without one."""
        if not hasattr(self, "matrix"):
            return None
        return matmul(self.matrix(g), self.matrix(h)) == self.matrix(self.mul(g, h))

    def to_json(self, g: Sequence) -> dict:
        return {"model": self.name, "params": self.params(),
                "coords": [fmt_rational(as_rational(v)) for v in self.check(g)]}

    def params(self) -> dict:
        return {}

    def _mul(self, g, h):
        raise NotImplementedError

    def _inv(self, g):
        raise NotImplementedError

    def _reduce(self, g, tag):
        raise NotImplementedError


@dataclass(frozen=True)
class F4(GroupModel):
    """Four-dimensional filiform group with the law
    ``(x1+y1, x2+y2, x3+y3-x2*y1, x4+y4-y1*x3+x2*y1^2/2)``."""

    name = "F4"
    subgroup_tags = ("H1", "H2")

    @property
    def dim(self) -> int:
        return 4

    def _mul(self, x, y):
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] - x[1] * y[0],
                x[3] + y[3] - y[0] * x[2] + Fraction(1, 2) * x[1] * y[0] ** 2)

    def _inv(self, x):
        return (-x[0], -x[1], -x[2] - x[1] * x[0],
                -x[3] - x[0] * x[2] - Fraction(1, 2) * x[1] * x[0] ** 2)

    def matrix(self, g: Sequence) -> list:
        x1, x2, x3, x4 = (as_rational(v) for v in self.check(g))
        return [[1, x3, x2, x4],
                [0, 1, 0, -x1],
                [0, -x1, 1, x1 * x1 / 2],
                [0, 0, 0, 1]]

    def subgroup_slots(self, tag):
        return {"H1": (2,), "H2": (0,)}[tag]

    def _reduce(self, g, tag):
        c1, c2, c3, c4 = g
        if tag == "H1":
            return (c1, c2, 0, c4), (0, 0, c3, 0)
        v, X = c1, c2
        Y = c3 + c2 * c1
        Z = c4 + v * Y - Fraction(1, 2) * X * v ** 2
        return (0, X, Y, Z), (v, 0, 0, 0)


@dataclass(frozen=True)
class FiliformR(GroupModel):
    """``F_{n+2} x R`` in coordinates ``(c, a_1..a_n, k, d)``."""

    n: int = 1
    name = "FiliformR"
    subgroup_tags = ("a", "center", "k")

    def __post_init__(self):
        if self.n < 1:
            raise GroupError("FiliformR needs n >= 1")

    @property
    def dim(self) -> int:
        return self.n + 3

    def params(self):
        return {"n": self.n}

    def split(self, g):
        n = self.n
        return g[0], g[1:n + 1], g[n + 1], g[n + 2]

    def _mul(self, g, h):
        c, a, k, d = self.split(g)
        c2, a2, k2, d2 = self.split(h)
        n = self.n
        neg = -c2
        anew = [a2[i] + sum((a[r] * _coef(neg, r - i) for r in range(i, n)), Fraction(0))
                for i in range(n)]
        knew = k + k2 + sum((a[r] * _coef(neg, r + 1) for r in range(n)), Fraction(0))
        return (c + c2, *anew, knew, d + d2)

    def _inv(self, g):
        c, a, k, d = self.split(g)
        n = self.n
        ainv = [-sum((a[r] * _coef(c, r - i) for r in range(i, n)), Fraction(0)) for i in range(n)]
        kinv = -k - sum((a[r] * _coef(c, r + 1) for r in range(n)), Fraction(0))
        return (-c, *ainv, kinv, -d)

    def matrix(self, g: Sequence) -> list:
        """The ``(n+3)``-square matrix: filiform block plus the R factor in the last column."""
        c, a, k, d = self.split([as_rational(v) for v in self.check(g)])
        n = self.n
        block = filiform_block(c, a, k)
        M = [row + [Fraction(0)] for row in block] + [[Fraction(0)] * (n + 2) + [Fraction(1)]]
        M[0][n + 2] = d
        return M

    def subgroup_slots(self, tag):
        n = self.n
        return {"a": tuple(range(1, n + 1)), "center": (n + 1, n + 2), "k": (n + 1,)}[tag]

    def _reduce(self, g, tag):
        c, a, k, d = self.split(g)
        zero_a = (0,) * self.n
        if tag == "a":
            return (c, *zero_a, k, d), (0, *a, 0, 0)
        # central subgroups: the product is plain addition there
        if tag == "center":
            return (c, *a, 0, 0), (0, *zero_a, k, d)
        return (c, *a, 0, d), (0, *zero_a, k, 0)


@dataclass(frozen=True)
class Filiform(GroupModel):
    """``F_{n+2}`` alone, coordinates ``(c, a_1..a_n, k)``; the same block law as :class:`FiliformR`.

    ``Filiform(2)`` is the four-dimensional filiform group in the block
    pattern, kept separate from :class:`F4` (no identification).
    """

    n: int = 1
    name = "Filiform"
    subgroup_tags = ("a", "center")

    def __post_init__(self):
        if self.n < 1:
            raise GroupError("Filiform needs n >= 1")

    @property
    def dim(self) -> int:
        return self.n + 2

    def params(self):
        return {"n": self.n}

    def _lift(self, g):
        return FiliformR(self.n), (*g, 0)

    def _mul(self, g, h):
        big, g1 = self._lift(g)
        return big._mul(g1, (*h, 0))[:-1]

    def _inv(self, g):
        big, g1 = self._lift(g)
        return big._inv(g1)[:-1]

    def matrix(self, g: Sequence) -> list:
        c, *rest = (as_rational(v) for v in self.check(g))
        return filiform_block(c, rest[:-1], rest[-1])

    def subgroup_slots(self, tag):
        return {"a": tuple(range(1, self.n + 1)), "center": (self.n + 1,)}[tag]

    def _reduce(self, g, tag):
        c, a, k = g[0], g[1:self.n + 1], g[self.n + 1]
        za = (0,) * self.n
        if tag == "a":
            return (c, *za, k), (0, *a, 0)
        return (c, *a, 0), (0, *za, k)


@dataclass(frozen=True)
class Amalg(GroupModel):
    """``F_{n+2} x_Z F_{m+2}`` in coordinates ``(c, a_1..a_n, b, d_1..d_m, k)``."""

    n: int = 1
    m: int = 1
    name = "Amalg"
    subgroup_tags = ("ad", "center")

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise GroupError("Amalg needs n, m >= 1")

    @property
    def dim(self) -> int:
        return self.n + self.m + 3

    def params(self):
        return {"n": self.n, "m": self.m}

    def split(self, g):
        n, m = self.n, self.m
        return g[0], g[1:n + 1], g[n + 1], g[n + 2:n + m + 2], g[n + m + 2]

    def _mul(self, g, h):
        c, a, b, d, k = self.split(g)
        c2, a2, b2, d2, k2 = self.split(h)
        n, m = self.n, self.m
        anew = [a2[i] + sum((a[r] * _coef(-c2, r - i) for r in range(i, n)), Fraction(0))
                for i in range(n)]
        dnew = [d2[j] + sum((d[r] * _coef(-b2, r - j) for r in range(j, m)), Fraction(0))
                for j in range(m)]
        knew = (k + k2 + sum((a[r] * _coef(-c2, r + 1) for r in range(n)), Fraction(0))
                + sum((d[r] * _coef(-b2, r + 1) for r in range(m)), Fraction(0)))
        return (c + c2, *anew, b + b2, *dnew, knew)

    def _inv(self, g):
        c, a, b, d, k = self.split(g)
        n, m = self.n, self.m
        ainv = [-sum((a[r] * _coef(c, r - i) for r in range(i, n)), Fraction(0)) for i in range(n)]
        dinv = [-sum((d[r] * _coef(b, r - j) for r in range(j, m)), Fraction(0)) for j in range(m)]
        kinv = (-k - sum((a[r] * _coef(c, r + 1) for r in range(n)), Fraction(0))
                - sum((d[r] * _coef(b, r + 1) for r in range(m)), Fraction(0)))
        return (-c, *ainv, -b, *dinv, kinv)

    def block_matrices(self, g: Sequence, k_split: Sequence | None = None) -> tuple:
        """The two filiform blocks; ``k_split = (k1, k2)`` defaults to ``(k, 0)``."""
        c, a, b, d, k = self.split([as_rational(v) for v in self.check(g)])
        k1, k2 = (k, Fraction(0)) if k_split is None else k_split
        return filiform_block(c, a, k1), filiform_block(b, d, k2)

    def matrix_check(self, g: Sequence, h: Sequence) -> bool:
        """Block products agree with the law once the two centre entries are added up."""
        gh = self.mul(g, h)
        (A1, B1), (A2, B2) = self.block_matrices(g), self.block_matrices(h, (self.check(h)[-1], 0))
        P, Q = self.block_matrices(gh)
        first, second = matmul(A1, A2), matmul(B1, B2)
        strip = lambda M: [row[:-1] for row in M[:1]] + M[1:]  # noqa: E731
        return (strip(first) == strip(P) and strip(second) == strip(Q)
                and first[0][-1] + second[0][-1] == gh[-1])

    def subgroup_slots(self, tag):
        n, m = self.n, self.m
        return {"ad": tuple(range(1, n + 1)) + tuple(range(n + 2, n + m + 2)),
                "center": (n + m + 2,)}[tag]

    def _reduce(self, g, tag):
        c, a, b, d, k = self.split(g)
        za, zd = (0,) * self.n, (0,) * self.m
        if tag == "ad":
            return (c, *za, b, *zd, k), (0, *a, 0, *d, 0)
        return (c, *a, b, *d, 0), (0, *za, 0, *zd, k)


@dataclass(frozen=True)
class G5(GroupModel):
    """Five-dimensional group with ``[e1,e2]=e3``, ``[e1,e4]=e5`` in exponential coordinates."""

    name = "G5"
    subgroup_tags = ("H", "center")

    @property
    def dim(self) -> int:
        return 5

    def _mul(self, x, y):
        half = Fraction(1, 2)
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + half * (x[0] * y[1] - x[1] * y[0]),
                x[3] + y[3], x[4] + y[4] + half * (x[0] * y[3] - x[3] * y[0]))

    def _inv(self, x):
        return tuple(-v for v in x)

    def subgroup_slots(self, tag):
        return {"H": (1, 3), "center": (2, 4)}[tag]

    def _reduce(self, g, tag):
        c1, c2, c3, c4, c5 = g
        half = Fraction(1, 2)
        if tag == "H":
            return (c1, 0, c3 - half * c1 * c2, 0, c5 - half * c1 * c4), (0, c2, 0, c4, 0)
        return (c1, c2, 0, c4, 0), (0, 0, c3, 0, c5)


MODELS = {"F4": F4, "Filiform": Filiform, "FiliformR": FiliformR, "Amalg": Amalg, "G5": G5}


def make_model(name: str, **params) -> GroupModel:
    try:
        cls = MODELS[name]
    except KeyError:
        raise GroupError(f"unknown group model {name!r}; choose from {sorted(MODELS)}") from None
    return cls(**params)


@dataclass(frozen=True)
class GroupElement:
    """A model element with value semantics; ``*`` is the group product."""

    model: GroupModel
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", self.model.check(self.coords))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.model != self.model:
            raise GroupError(f"model mismatch: {self.model} vs {other.model}")
        return GroupElement(self.model, self.model.mul(self.coords, other.coords))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.model, self.model.inv(self.coords))

    def to_json(self) -> dict:
        return self.model.to_json(self.coords)

    @classmethod
    def from_json(cls, data: dict) -> "GroupElement":
        model = make_model(data["model"], **data.get("params", {}))
        return cls(model, tuple(as_rational(v) for v in data["coords"]))


def symbolic_element(model: GroupModel, prefix: str = "g") -> tuple:
    return tuple(Poly.var(f"{prefix}{i + 1}") for i in range(model.dim))
