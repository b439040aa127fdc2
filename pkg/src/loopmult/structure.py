"""Finite-dimensional Lie algebras from structure constants, ideal series and model catalog."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .linalg import nullspace, rank, rref
from .vfield import FieldSpan, bracket


class LieAlgebraError(ValueError):
    pass


class NotClosed(LieAlgebraError):
    """A bracket of two span elements left the span."""


Vector = list


class AbstractLieAlgebra:
    """Lie algebra on ``R^dim`` given by sparse structure constants.

    ``constants[(i, j)]`` maps ``k`` to ``c^k_{ij}`` for ``i < j``; the
    remaining brackets follow by antisymmetry.  Jacobi is checked on
    construction.
    """

    def __init__(self, dim: int, triples: Iterable = (), check: bool = True):
        if dim < 0:
            raise LieAlgebraError("dimension must be nonnegative")
        self.dim = dim
        table: dict = {}
        for i, j, k, c in triples:
            c = Fraction(c)
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise LieAlgebraError(f"index out of range in ({i}, {j}, {k})")
            if i == j:
                if c:
                    raise LieAlgebraError(f"[e{i}, e{i}] must vanish")
                continue
            if i > j:
                i, j, c = j, i, -c
            row = table.setdefault((i, j), {})
            row[k] = row.get(k, 0) + c
        self.constants = {key: {k: c for k, c in row.items() if c}
                          for key, row in table.items()}
        self.constants = {key: row for key, row in self.constants.items() if row}
        if check:
            self._check_jacobi()

    def bracket_basis(self, i: int, j: int) -> dict:
        if i < j:
            return self.constants.get((i, j), {})
        if i > j:
            return {k: -c for k, c in self.constants.get((j, i), {}).items()}
        return {}

    def bracket(self, u: Sequence, v: Sequence) -> Vector:
        out = [Fraction(0)] * self.dim
        for (i, j), row in self.constants.items():
            coef = u[i] * v[j] - u[j] * v[i]
            if coef:
                for k, c in row.items():
                    out[k] += coef * c
        return out

    def basis_vector(self, i: int) -> Vector:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def ad_matrix(self, i: int) -> list:
        """Matrix of ``ad(e_i)`` acting on column vectors."""
        m = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            for k, c in self.bracket_basis(i, j).items():
                m[k][j] = c
        return m

    def _check_jacobi(self):
        e = [self.basis_vector(i) for i in range(self.dim)]
        active = sorted({i for key in self.constants for i in key})
        for a, b, c in combinations(active, 3):
            s = [x + y + z for x, y, z in zip(
                self.bracket(e[a], self.bracket(e[b], e[c])),
                self.bracket(e[b], self.bracket(e[c], e[a])),
                self.bracket(e[c], self.bracket(e[a], e[b])))]
            if any(s):
                raise LieAlgebraError(f"Jacobi identity fails on (e{a}, e{b}, e{c})")

    def triples(self) -> list:
        return [(i, j, k, c) for (i, j), row in sorted(self.constants.items())
                for k, c in sorted(row.items())]

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "structure_constants": [[i, j, k, str(c)] for i, j, k, c in self.triples()]}

    def is_abelian(self) -> bool:
        return not self.constants

    def change_basis(self, rows: Sequence[Sequence]) -> "AbstractLieAlgebra":
        """Same algebra written in the basis given by the rows of an invertible matrix."""
        rows = [[Fraction(x) for x in r] for r in rows]
        if len(rows) != self.dim or rank(rows) != self.dim:
            raise LieAlgebraError("change of basis must be invertible")
        triples = []
        for i, j in combinations(range(self.dim), 2):
            w = self.bracket(rows[i], rows[j])
            for k, c in enumerate(_coords_in(rows, w)):
                if c:
                    triples.append((i, j, k, c))
        return AbstractLieAlgebra(self.dim, triples)


def _coords_in(basis: Sequence[Sequence], w: Sequence) -> list:
    """Coefficients of ``w`` in an independent family ``basis``."""
    n = len(basis)
    if n == 0:
        if any(w):
            raise LieAlgebraError("vector not in span")
        return []
    # solve sum c_i basis_i = w via the augmented transpose
    cols = [list(r) for r in zip(*basis)]
    aug = [row + [x] for row, x in zip(cols, w)]
    red, piv = rref(aug)
    if n in piv:
        raise LieAlgebraError("vector not in span")
    out = [Fraction(0)] * n
    for row, p in zip(red, piv):
        out[p] = row[n]
    return out


def _span(vectors: Iterable[Sequence], dim: int) -> list:
    vs = [list(v) for v in vectors if any(v)]
    return rref(vs)[0] if vs else []


def bracket_span(L: AbstractLieAlgebra, A: Sequence, B: Sequence) -> list:
    return _span((L.bracket(a, b) for a in A for b in B), L.dim)


def lower_central_series(L: AbstractLieAlgebra) -> list:
    full = [L.basis_vector(i) for i in range(L.dim)]
    series = [full]
    cur = full
    while cur:
        nxt = bracket_span(L, full, cur)
        if len(nxt) == len(cur):
            break
        series.append(nxt)
        cur = nxt
    return series


def derived_series(L: AbstractLieAlgebra) -> list:
    cur = [L.basis_vector(i) for i in range(L.dim)]
    series = [cur]
    while cur:
        nxt = bracket_span(L, cur, cur)
        if len(nxt) == len(cur):
            break
        series.append(nxt)
        cur = nxt
    return series


def _reduce_mod(v: Sequence, basis: Sequence, pivots: Sequence) -> list:
    v = list(v)
    for b, p in zip(basis, pivots):
        c = v[p]
        if c:
            v = [x - c * y for x, y in zip(v, b)]
    return v


def _preimage_condition(L: AbstractLieAlgebra, target: Sequence, domain: Sequence) -> list:
    """Basis of ``{w in span(domain) : [e_i, w] in span(target) for all i}``."""
    if not domain:
        return []
    tb, tp = rref([list(t) for t in target]) if target else ([], [])
    rows = []
    for i in range(L.dim):
        e = L.basis_vector(i)
        rems = [_reduce_mod(L.bracket(e, w), tb, tp) for w in domain]
        for k in range(L.dim):
            row = [r[k] for r in rems]
            if any(row):
                rows.append(row)
    n = len(domain)
    coeffs = nullspace(rows, n) if rows else [
        [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return _span(([sum((c * w[k] for c, w in zip(cv, domain)), Fraction(0))
                   for k in range(L.dim)] for cv in coeffs), L.dim)


def center(L: AbstractLieAlgebra) -> list:
    full = [L.basis_vector(i) for i in range(L.dim)]
    return _preimage_condition(L, [], full)


def upper_central_series(L: AbstractLieAlgebra) -> list:
    full = [L.basis_vector(i) for i in range(L.dim)]
    series = [[]]
    cur: list = []
    while True:
        nxt = _preimage_condition(L, cur, full)
        if len(nxt) == len(cur):
            break
        series.append(nxt)
        cur = nxt
        if len(cur) == L.dim:
            break
    return series


def largest_ideal_in(L: AbstractLieAlgebra, subspace: Sequence[Sequence]) -> list:
    """Largest ideal of ``L`` inside ``span(subspace)`` (RREF basis)."""
    W = _span(subspace, L.dim)
    while W:
        nxt = _preimage_condition(L, W, W)
        if len(nxt) == len(W):
            break
        W = nxt
    return W


def is_ideal(L: AbstractLieAlgebra, W: Sequence[Sequence]) -> bool:
    full = [L.basis_vector(i) for i in range(L.dim)]
    Wb = _span(W, L.dim)
    return all(rank(Wb + [v]) == len(Wb) for v in bracket_span(L, full, Wb))


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    lcs_dims: tuple
    dss_dims: tuple
    center_dim: int
    ucs_dims: tuple

    @property
    def nilpotent(self) -> bool:
        return self.lcs_dims[-1] == 0

    def to_json(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def fingerprint(L: AbstractLieAlgebra) -> Fingerprint:
    lcs = tuple(len(s) for s in lower_central_series(L))
    dss = tuple(len(s) for s in derived_series(L))
    ucs = tuple(len(s) for s in upper_central_series(L))
    zdim = ucs[1] if len(ucs) > 1 else 0
    return Fingerprint(L.dim, lcs, dss, zdim, ucs)


def from_field_span(S: FieldSpan) -> AbstractLieAlgebra:
    """Structure constants of a bracket-closed span in its echelon basis."""
    triples = []
    for i, j in combinations(range(S.dim), 2):
        w = bracket(S.basis[i], S.basis[j])
        try:
            coords = S.coordinates(w)
        except ValueError:
            raise NotClosed(f"[b{i}, b{j}] = {w} is outside the span") from None
        triples.extend((i, j, k, c) for k, c in enumerate(coords) if c)
    return AbstractLieAlgebra(S.dim, triples)


# model catalog

def abelian(k: int) -> AbstractLieAlgebra:
    return AbstractLieAlgebra(k)


def filiform(n: int) -> AbstractLieAlgebra:
    """``f_{n+2}``: ``[e_1, e_i] = e_{i+1}`` for ``2 <= i <= n+1`` (0-based here)."""
    if n < 1:
        raise LieAlgebraError("filiform index n must be >= 1")
    return AbstractLieAlgebra(n + 2, [(0, i, i + 1, 1) for i in range(1, n + 1)])


def direct_sum(A: AbstractLieAlgebra, B: AbstractLieAlgebra) -> AbstractLieAlgebra:
    off = A.dim
    return AbstractLieAlgebra(A.dim + B.dim, A.triples() + [
        (i + off, j + off, k + off, c) for i, j, k, c in B.triples()])


def amalgamated_filiform(n: int, m: int) -> AbstractLieAlgebra:
    """``f_{n+2}`` and ``f_{m+2}`` with their one-dimensional centres identified.

    Basis: ``e_1..e_{n+1}``, ``f_1..f_{m+1}``, shared top ``z`` (dimension n+m+3).
    """
    if n < 1 or m < 1:
        raise LieAlgebraError("amalgamation needs n, m >= 1")
    z = n + m + 2
    e = list(range(0, n + 1)) + [z]
    f = list(range(n + 1, n + m + 2)) + [z]
    triples = [(e[0], e[i], e[i + 1], 1) for i in range(1, n + 1)]
    triples += [(f[0], f[i], f[i + 1], 1) for i in range(1, m + 1)]
    return AbstractLieAlgebra(n + m + 3, triples)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    family: str
    params: tuple
    fingerprint: Fingerprint

    @property
    def dim(self) -> int:
        return self.fingerprint.dim


def model_name(family: str, params: tuple) -> str:
    if family == "abelian":
        return f"R^{params[0]}"
    if family == "filiform":
        return f"f_{params[0] + 2}"
    if family == "filiform+abelian":
        n, k = params
        return f"f_{n + 2} ⊕ R" if k == 1 else f"f_{n + 2} ⊕ R^{k}"
    if family == "amalgamated":
        n, m = params
        return f"f_{n + 2} ⊕_z f_{m + 2}"
    raise LieAlgebraError(f"unknown catalog family {family!r}")


def build_model(family: str, params: tuple) -> AbstractLieAlgebra:
    if family == "abelian":
        return abelian(params[0])
    if family == "filiform":
        return filiform(params[0])
    if family == "filiform+abelian":
        return direct_sum(filiform(params[0]), abelian(params[1]))
    if family == "amalgamated":
        return amalgamated_filiform(*params)
    raise LieAlgebraError(f"unknown catalog family {family!r}")


def model_dim(family: str, params: tuple) -> int:
    if family == "abelian":
        return params[0]
    if family == "filiform":
        return params[0] + 2
    if family == "filiform+abelian":
        return params[0] + 2 + params[1]
    return params[0] + params[1] + 3


def catalog_keys(max_n: int = 8, max_k: int = 8) -> list:
    keys = [("abelian", (k,)) for k in range(1, max_k + 1)]
    keys += [("filiform", (n,)) for n in range(1, max_n + 1)]
    keys += [("filiform+abelian", (n, k)) for n in range(1, max_n + 1) for k in range(1, max_k + 1)]
    keys += [("amalgamated", (n, m)) for n in range(1, max_n + 1) for m in range(n, max_n + 1)]
    return keys


@lru_cache(maxsize=None)
def catalog_entry(family: str, params: tuple) -> CatalogEntry:
    return CatalogEntry(model_name(family, params), family, params,
                        fingerprint(build_model(family, params)))


def catalog(max_n: int = 8, max_k: int = 8, dim: int | None = None) -> tuple:
    """Fingerprints of the model algebras, computed from generated constants.

    ``dim`` restricts to models of that dimension (the only ones an
    identification can match).
    """
    return tuple(catalog_entry(f, p) for f, p in catalog_keys(max_n, max_k)
                 if dim is None or model_dim(f, p) == dim)


@dataclass(frozen=True)
class ModelVerdict:
    fingerprint: Fingerprint
    matches: tuple

    @property
    def text(self) -> str:
        if not self.matches:
            return "no catalog match"
        return "consistent with " + " or ".join(self.matches)

    def to_json(self) -> dict:
        return {"verdict": self.text, "matches": list(self.matches),
                "fingerprint": self.fingerprint.to_json()}


def identify_model(L, max_n: int = 8, max_k: int = 8) -> ModelVerdict:
    """Catalog models whose fingerprint equals that of ``L`` (algebra or Fingerprint)."""
    fp = L if isinstance(L, Fingerprint) else fingerprint(L)
    matches = tuple(e.name for e in catalog(max_n, max_k, fp.dim) if e.fingerprint == fp)
    return ModelVerdict(fp, matches)
