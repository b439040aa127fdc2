"""Transversal criteria for a group to be a multiplication group.

A group ``K`` with subgroup ``S`` is the multiplication group of the loop
given by a left transversal ``Lambda`` exactly when some left transversal
``T`` makes every commutator ``a^-1 b^-1 a b`` (``a`` in ``T``, ``b`` in
``Lambda``) land in ``S``, ``Lambda`` and ``T`` generate ``K``, and ``S``
contains no nontrivial normal subgroup of ``K``.

Everything here is checked as an exact polynomial identity.  ``T`` ranges
over the displayed shape: free parameters in the non-``S`` slots and unknown
polynomials of degree ``<= D`` (vanishing at the origin) in the ``S`` slots.
Negative results hold relative to that bound.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Sequence

from .groups import GroupModel, symbolic_element
from .linalg import solve_affine
from .mult import map_log
from .poly import Poly
from .sections import SectionSpec, section_image
from .structure import from_field_span, largest_ideal_in
from .trimap import TriangularMap
from .vfield import DEFAULT_MAX_DEGREE, DEFAULT_MAX_DIM, FieldSpan, VectorField, lie_closure, span_of

HALF = Fraction(1, 2)
LOOP_POINT = ("x", "y", "z")
TRANSVERSAL_PARAMS = ("k", "l", "m")


class KepkaError(ValueError):
    pass


class NonlinearSystem(KepkaError):
    pass


def _monomials(nvars: int, degree: int) -> list:
    out = [e for d in range(1, degree + 1)
           for e in itertools.product(range(d + 1), repeat=nvars) if sum(e) == d]
    return sorted(out, key=lambda e: (sum(e), tuple(-v for v in e)))


def general_poly(name: str, variables: Sequence[str], degree: int) -> tuple:
    """``sum c_e * var^e`` over ``1 <= |e| <= degree``; returns ``(poly, coefficient names)``."""
    variables = tuple(variables)
    total = Poly.zero()
    names = []
    for e in _monomials(len(variables), degree):
        cname = f"{name}_{''.join(map(str, e))}"
        names.append(cname)
        mono = Poly.const(1)
        for v, k in zip(variables, e):
            if k:
                mono = mono * Poly.var(v) ** k
        total = total + Poly.var(cname) * mono
    return total, names


# -- families ----------------------------------------------------------------

@dataclass(frozen=True)
class LoopShape:
    """Loop parameters as raw Polys; unknown coefficients are allowed (no validation)."""

    family: str
    params: tuple

    def __getitem__(self, name: str) -> Poly:
        return dict(self.params)[name]

    @property
    def n(self) -> int:
        return sum(1 for k, _ in self.params if k.startswith("v") and k[1:].isdigit())

    @property
    def m(self) -> int:
        return sum(1 for k, _ in self.params if k.startswith("u") and k[1:].isdigit())

    def vs(self) -> list:
        return [self[f"v{i}"] for i in range(1, self.n + 1)]

    def us(self) -> list:
        return [self[f"u{j}"] for j in range(1, self.m + 1)]


def loop_shape(family: str, **params) -> LoopShape:
    return LoopShape(family, tuple((k, Poly.coerce(Poly.parse(v) if isinstance(v, str) else v))
                                   for k, v in sorted(params.items())))


def left_family(spec: SectionSpec) -> tuple:
    """The left translations of the loop as a group-element family in ``x, y, z``."""
    return section_image(spec, tuple(Poly.var(c) for c in LOOP_POINT))


LV_READINGS = ("displayed", "swapped")


def lv_family(model: GroupModel, v, reading: str = "displayed") -> tuple:
    """Left translations of an LV loop (parameter ``v(x, z)``) placed in ``model``.

    ``FiliformR(n)``: ``g(x, v, 0.., y, z)``.  ``Amalg(n, m)``: ``v`` in the
    first a-slot, with the loop's ``y`` in the b-slot and ``z`` central
    (``displayed``) or the other way round (``swapped``).  ``G5``:
    ``g(x, v, y + xv/2, 0, z)``.
    """
    v = Poly.coerce(Poly.parse(v) if isinstance(v, str) else v)
    x, y, z = (Poly.var(c) for c in LOOP_POINT)
    zero = Poly.zero()
    if model.name == "FiliformR":
        return (x, v, *[zero] * (model.n - 1), y, z)
    if model.name == "Amalg":
        if reading not in LV_READINGS:
            raise KepkaError(f"reading must be one of {LV_READINGS}, not {reading!r}")
        b, k = (y, z) if reading == "displayed" else (z, y)
        return (x, v, *[zero] * (model.n - 1), b, *[zero] * model.m, k)
    if model.name == "G5":
        return (x, v, y + HALF * x * v, zero, z)
    raise KepkaError(f"no LV placement in {model.name}")


@dataclass(frozen=True)
class TransversalAnsatz:
    """``T`` with free parameters in the non-``S`` slots and unknown polynomials in the ``S`` slots."""

    model: GroupModel
    tag: str
    degree: int = 3
    params: tuple = TRANSVERSAL_PARAMS

    def __post_init__(self):
        if self.degree < 1:
            raise KepkaError("ansatz degree must be >= 1")
        free = self.free_slots()
        if len(free) != len(self.params):
            raise KepkaError(f"{self.model.name}/{self.tag} has {len(free)} free slots, "
                             f"{len(self.params)} parameters given")

    def s_slots(self) -> tuple:
        return self.model.subgroup_slots(self.tag)

    def free_slots(self) -> tuple:
        s = set(self.s_slots())
        return tuple(i for i in range(self.model.dim) if i not in s)

    def function_names(self) -> tuple:
        """``h1..`` for the slots, ``f1..`` for the second block of an amalgamated model."""
        slots = self.s_slots()
        if self.model.name == "Amalg" and self.tag == "ad":
            n = self.model.n
            return tuple(f"h{i + 1}" for i in range(n)) + tuple(f"f{j + 1}" for j in range(len(slots) - n))
        return tuple(f"h{i + 1}" for i in range(len(slots)))

    def unknown_functions(self) -> dict:
        """``name -> (poly, coefficient names)`` for every unknown slot function."""
        return {name: general_poly(name, self.params, self.degree) for name in self.function_names()}

    def family(self, functions: Mapping[str, Poly] | None = None) -> tuple:
        """Element family; ``functions`` overrides the unknown polynomials by name."""
        funcs = {k: p for k, (p, _) in self.unknown_functions().items()}
        if functions:
            funcs.update({k: Poly.coerce(Poly.parse(v) if isinstance(v, str) else v)
                          for k, v in functions.items()})
        g = [Poly.zero()] * self.model.dim
        for slot, name in zip(self.free_slots(), self.params):
            g[slot] = Poly.var(name)
        for slot, name in zip(self.s_slots(), self.function_names()):
            g[slot] = funcs[name]
        return tuple(g)

    def to_json(self) -> dict:
        return {"model": self.model.name, "model_params": self.model.params(), "subgroup": self.tag,
                "degree": self.degree, "params": list(self.params),
                "functions": list(self.function_names())}


# -- S-connectedness ---------------------------------------------------------

@dataclass(frozen=True)
class Residual:
    """Non-``S`` coordinates of the symbolic commutator; zero iff the families are S-connected."""

    slots: tuple
    polys: tuple

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.polys)

    def to_json(self) -> dict:
        return {"zero": self.is_zero(),
                "components": {f"slot{s + 1}": str(p) for s, p in zip(self.slots, self.polys)}}


def s_connected_check(model: GroupModel, tag: str, lam: Sequence, T: Sequence) -> Residual:
    """Commutators ``a^-1 b^-1 a b`` with ``a`` in ``T`` and ``b`` in ``lam``, projected off ``S``."""
    comm = model.commutator(tuple(T), tuple(lam))
    s = set(model.subgroup_slots(tag))
    slots = tuple(i for i in range(model.dim) if i not in s)
    return Residual(slots, tuple(Poly.coerce(comm[i]) for i in slots))


# -- ansatz solving ----------------------------------------------------------

@dataclass(frozen=True)
class AnsatzSolution:
    """Affine solution space ``particular + span(directions)`` over the unknown coefficients."""

    ansatz: TransversalAnsatz
    unknowns: tuple
    particular: tuple | None
    directions: tuple
    loop_unknowns: tuple = ()
    loop_templates: tuple = ()

    @property
    def solvable(self) -> bool:
        return self.particular is not None

    @property
    def unique(self) -> bool:
        return self.solvable and not self.directions

    def _values(self, weights: Sequence = ()) -> dict:
        vals = list(self.particular)
        for w, d in zip(weights, self.directions):
            vals = [a + w * b for a, b in zip(vals, d)]
        return dict(zip(self.unknowns, vals))

    def member(self, weights: Sequence = ()) -> dict:
        """Slot functions (and loop parameters) of the solution with the given direction weights."""
        if not self.solvable:
            raise KepkaError("the ansatz has no solution")
        vals = self._values(weights)
        out = {}
        for name, (poly, _) in self.ansatz.unknown_functions().items():
            out[name] = poly.subs(vals)
        for name, poly in self.loop_templates:
            out[name] = poly.subs(vals)
        return {k: _drop_unused(v) for k, v in out.items()}

    def functions(self) -> dict:
        return self.member()

    def direction_functions(self) -> list:
        """Each direction of the solution space as slot functions (homogeneous part)."""
        out = []
        for d in self.directions:
            vals = dict(zip(self.unknowns, d))
            item = {name: _drop_unused(poly.subs(vals))
                    for name, (poly, _) in self.ansatz.unknown_functions().items()}
            for name, poly in self.loop_templates:
                item[name] = _drop_unused(poly.subs(vals))
            out.append(item)
        return out

    def vanishes_identically(self, name: str) -> bool:
        """Whether the slot function ``name`` is zero in every solution."""
        if not self.solvable:
            return True
        if not self.member()[name].is_zero():
            return False
        return all(item[name].is_zero() for item in self.direction_functions())

    def forced_loop_form(self) -> dict:
        """General form of each unknown loop parameter over the solution space, with ``c1, c2..``."""
        if not self.loop_templates or not self.solvable:
            return {}
        base = self.member()
        dirs = self.direction_functions()
        out = {}
        for name, _ in self.loop_templates:
            p = base[name]
            for idx, item in enumerate(dirs, start=1):
                if not item[name].is_zero():
                    p = p + Poly.var(f"c{idx}") * item[name]
            out[name] = _drop_unused(p)
        return out

    def to_json(self) -> dict:
        out = {"ansatz": self.ansatz.to_json(), "unknown_count": len(self.unknowns),
               "solvable": self.solvable, "unique": self.unique,
               "solution_dim": len(self.directions) if self.solvable else None}
        if self.solvable:
            out["particular"] = {k: str(v) for k, v in sorted(self.member().items())}
            out["directions"] = [{k: str(v) for k, v in sorted(item.items()) if not v.is_zero()}
                                 for item in self.direction_functions()]
            if self.loop_templates:
                out["forced_loop_form"] = {k: str(v) for k, v in sorted(self.forced_loop_form().items())}
        return out


def _drop_unused(p: Poly) -> Poly:
    return p.with_vars(p.free_vars())


def linear_system(polys: Sequence[Poly], unknowns: Sequence[str]) -> tuple:
    """Rows and right-hand sides of ``polys == 0`` identically, affine in ``unknowns``."""
    unknowns = tuple(unknowns)
    index = {u: i for i, u in enumerate(unknowns)}
    rows, rhs = [], []
    for p in polys:
        others = [v for v in p.free_vars() if v not in index]
        for _, coef in sorted(p.coefficients_in(others).items()):
            if coef.total_degree() > 1:
                raise NonlinearSystem(f"residual coefficient {coef} is not affine in the unknowns")
            row = [Fraction(0)] * len(unknowns)
            const = Fraction(0)
            for exps, c in coef.terms.items():
                live = [(coef.vars[i], e) for i, e in enumerate(exps) if e]
                if not live:
                    const += c
                else:
                    row[index[live[0][0]]] += c
            rows.append(row)
            rhs.append(-const)
    return rows, rhs


def ansatz_solve(ansatz: TransversalAnsatz, lam: Sequence,
                 loop_unknowns: Mapping[str, tuple] | None = None) -> AnsatzSolution:
    """Solve the S-connectedness identity for the ansatz coefficients.

    ``loop_unknowns`` maps loop-parameter names to ``(poly, coefficient names)``
    when ``lam`` was built from unknown loop parameters; constraints forced on
    them come back through :meth:`AnsatzSolution.forced_loop_form`.
    """
    unknowns = [c for _, (_, names) in ansatz.unknown_functions().items() for c in names]
    templates = []
    for name, (poly, names) in sorted((loop_unknowns or {}).items()):
        unknowns += names
        templates.append((name, poly))
    res = s_connected_check(ansatz.model, ansatz.tag, lam, ansatz.family())
    rows, rhs = linear_system(res.polys, unknowns)
    sol, null = solve_affine(rows, rhs, len(unknowns))
    if sol is None:
        return AnsatzSolution(ansatz, tuple(unknowns), None, (), tuple(sorted(loop_unknowns or {})),
                              tuple(templates))
    return AnsatzSolution(ansatz, tuple(unknowns), tuple(sol), tuple(tuple(v) for v in null),
                          tuple(sorted(loop_unknowns or {})), tuple(templates))


# -- generation and core -----------------------------------------------------

def _left_mult(model: GroupModel, g: Sequence) -> TriangularMap:
    h = tuple(Poly.var(c) for c in model.coord_names())
    return TriangularMap(model.mul(tuple(g), h), model.coord_names())


def family_logs(model: GroupModel, family: Sequence, method: str = "symbolic", grid: int | None = None) -> list:
    """Logs of left multiplication by the family members, as fields on the group."""
    family = tuple(Poly.coerce(c) for c in family)
    params = sorted({v for c in family for v in c.free_vars()})
    coords = model.coord_names()
    if method == "symbolic":
        V = map_log(_left_mult(model, family))
        per: dict = {}
        for i, coef in enumerate(V.coeffs):
            for key, rest in coef.coefficients_in(params).items():
                per.setdefault(key, [Poly.zero()] * len(coords))[i] = rest
        fields = [VectorField(per[k], coords) for k in sorted(per)]
    elif method == "grid":
        deg = max([c.total_degree() for c in family] + [0])
        r = range(-(grid or deg + 1), (grid or deg + 1) + 1)
        fields = []
        for pt in itertools.product(r, repeat=len(params)):
            g = [c.at(dict(zip(params, pt))) for c in family]
            fields.append(map_log(_left_mult(model, g)))
    else:
        raise ValueError(f"unknown method {method!r}")
    return [X for X in fields if not X.is_zero()]


@lru_cache(maxsize=None)
def group_algebra(model: GroupModel) -> FieldSpan:
    """The model's Lie algebra as right-invariant fields (logs of left multiplications)."""
    g = symbolic_element(model, "p")
    return lie_closure(family_logs(model, g))


@dataclass(frozen=True)
class GenerationResult:
    ok: bool
    dim: int
    target: int

    def to_json(self) -> dict:
        return {"generates": self.ok, "dim": self.dim, "group_dim": self.target}


def generation_check(model: GroupModel, families: Sequence[Sequence], method: str = "symbolic",
                     grid: int | None = None, max_dim: int = DEFAULT_MAX_DIM,
                     max_degree: int = DEFAULT_MAX_DEGREE) -> GenerationResult:
    """Whether the families generate the whole model (closure dimension equals group dimension)."""
    gens = [X for fam in families for X in family_logs(model, fam, method, grid)]
    if not gens:
        return GenerationResult(False, 0, model.dim)
    S = lie_closure(gens, max_dim=max_dim, max_degree=max_degree)
    return GenerationResult(S.dim == model.dim, S.dim, model.dim)


def subgroup_span(model: GroupModel, tag: str) -> FieldSpan:
    slots = model.subgroup_slots(tag)
    g = [Poly.zero()] * model.dim
    for j, s in enumerate(slots):
        g[s] = Poly.var(f"s{j + 1}")
    return span_of(family_logs(model, g), model.coord_names())


@dataclass(frozen=True)
class CoreResult:
    trivial: bool
    core_dim: int
    subgroup_dim: int

    def to_json(self) -> dict:
        return {"trivial": self.trivial, "core_dim": self.core_dim, "subgroup_dim": self.subgroup_dim}


def core_check(model: GroupModel, tag: str) -> CoreResult:
    """Largest ideal of the model algebra inside the subgroup's subalgebra."""
    A = group_algebra(model)
    L = from_field_span(A)
    sub = subgroup_span(model, tag)
    rows = [A.coordinates(X) for X in sub.basis]
    core = largest_ideal_in(L, rows)
    return CoreResult(not core, len(core), sub.dim)


# -- two-sided identities ----------------------------------------------------

def _sgn_term(base: Poly, i: int) -> Poly:
    return base ** i * Fraction((-1) ** i, factorial(i))


def two_sided_residual(vs: Sequence, ss: Sequence) -> Poly:
    """LHS - RHS of the two-sided identity for ``F_{n+2} x R`` with ``v_i(x)`` and ``s_i(k)``.

    ``sum (-1)^i x^i/i! (s_i(k) + v_i(k)) = sum (-1)^i k^i/i! v_i(x)``.
    """
    x, k = Poly.var("x"), Poly.var("k")
    lhs, rhs = Poly.zero(), Poly.zero()
    for i, (v, s) in enumerate(zip(vs, ss), start=1):
        v, s = Poly.coerce(v), Poly.coerce(s)
        lhs = lhs + _sgn_term(x, i) * (s + v.subs({"x": k}))
        rhs = rhs + _sgn_term(k, i) * v
    return lhs - rhs


def two_sided_amalg_residual(vs: Sequence, us: Sequence, ss: Sequence, fs: Sequence) -> Poly:
    """LHS - RHS of the amalgamated two-sided identity in ``x, y, p, q``."""
    x, y, p, q = (Poly.var(c) for c in ("x", "y", "p", "q"))
    swap = {"x": p, "y": q}
    lhs, rhs = Poly.zero(), Poly.zero()
    for i, (v, s) in enumerate(zip(vs, ss), start=1):
        v, s = Poly.coerce(v), Poly.coerce(s)
        lhs = lhs + _sgn_term(x, i) * (s + v.subs(swap))
        rhs = rhs + _sgn_term(p, i) * v
    for j, (u, f) in enumerate(zip(us, fs), start=1):
        u, f = Poly.coerce(u), Poly.coerce(f)
        lhs = lhs + _sgn_term(y, j) * (f + u.subs(swap))
        rhs = rhs + _sgn_term(q, j) * u
    return lhs - rhs


def two_sided_model_residual(spec: SectionSpec, s_functions: Sequence) -> Residual:
    """The same condition derived in the group model.

    ``sigma(X) rep(P)`` and ``sigma(P) s(P) rep(X)`` must lie in one left coset
    of ``S``; ``s_functions`` fill the ``S`` slots (as polynomials in ``p, q, r``).
    """
    M = spec.model
    X = tuple(Poly.var(c) for c in LOOP_POINT)
    P = tuple(Poly.var(c) for c in ("p", "q", "r"))
    slots = M.subgroup_slots(spec.tag)
    if len(s_functions) != len(slots):
        raise KepkaError(f"{len(slots)} subgroup functions needed, got {len(s_functions)}")
    s_elem = [Poly.zero()] * M.dim
    for slot, f in zip(slots, s_functions):
        s_elem[slot] = Poly.coerce(Poly.parse(f) if isinstance(f, str) else f)
    g1 = M.mul(section_image(spec, X), spec.representative(P))
    g2 = M.mul(M.mul(section_image(spec, P), tuple(s_elem)), spec.representative(X))
    diff = M.mul(M.inv(g1), g2)
    rest = tuple(i for i in range(M.dim) if i not in set(slots))
    return Residual(rest, tuple(Poly.coerce(diff[i]) for i in rest))


# -- report ------------------------------------------------------------------

@dataclass(frozen=True)
class KepkaReport:
    model: GroupModel
    tag: str
    degree: int
    residual: Residual
    solution: AnsatzSolution | None
    generation: GenerationResult | None
    generation_all: GenerationResult | None
    core: CoreResult
    notes: tuple = field(default=())

    @property
    def connected(self) -> bool:
        return self.residual.is_zero()

    @property
    def ok(self) -> bool:
        gen = self.generation is not None and self.generation.ok
        return self.connected and gen and self.core.trivial

    def to_json(self) -> dict:
        return {
            "model": self.model.name, "model_params": self.model.params(), "subgroup": self.tag,
            "ansatz_degree": self.degree,
            "quantifier": f"transversals of the displayed shape with unknowns of degree <= {self.degree}",
            "s_connected": self.connected,
            "residual": self.residual.to_json(),
            "solution": None if self.solution is None else self.solution.to_json(),
            "generation": None if self.generation is None else self.generation.to_json(),
            "generation_all_solutions": None if self.generation_all is None else self.generation_all.to_json(),
            "core": self.core.to_json(),
            "verdict": self.ok,
            "notes": list(self.notes),
        }


def check_transversal(model: GroupModel, tag: str, lam: Sequence, functions: Mapping[str, object],
                      degree: int = 3, **caps) -> KepkaReport:
    """All three conditions for one explicit transversal."""
    ansatz = TransversalAnsatz(model, tag, degree)
    T = ansatz.family(functions)
    res = s_connected_check(model, tag, lam, T)
    gen = generation_check(model, [lam, T], **caps)
    return KepkaReport(model, tag, degree, res, None, gen, None, core_check(model, tag))


def solve_transversal(model: GroupModel, tag: str, lam: Sequence, degree: int = 3,
                      loop_unknowns: Mapping[str, tuple] | None = None,
                      lam_builder=None, **caps) -> KepkaReport:
    """Solve the ansatz, then test generation for a solution and for all solutions together.

    With unknown loop parameters, ``lam_builder(values)`` rebuilds the left
    family from concrete loop parameters of a solution member.
    """
    ansatz = TransversalAnsatz(model, tag, degree)
    sol = ansatz_solve(ansatz, lam, loop_unknowns)
    core = core_check(model, tag)
    notes = []
    if not sol.solvable:
        res = s_connected_check(model, tag, lam, ansatz.family())
        return KepkaReport(model, tag, degree, res, sol, None, None, core,
                           ("no transversal of the displayed shape is S-connected",))
    # one member: all direction weights 1
    weights = [1] * len(sol.directions)
    member = sol.member(weights)
    lam_member = lam_builder(member) if lam_builder else lam
    T = ansatz.family({k: v for k, v in member.items() if k in ansatz.function_names()})
    res = s_connected_check(model, tag, lam_member, T)
    gen = generation_check(model, [lam_member, T], **caps)
    notes.append("generation shown for the solution with every free direction weight = 1")
    gen_all = None
    if sol.directions:
        # union over the whole solution space: failure here rules out every solution
        t_vars = [Poly.var(f"t{i + 1}") for i in range(len(sol.directions))]
        generic = dict(sol.member())
        for t, item in zip(t_vars, sol.direction_functions()):
            for name, p in item.items():
                generic[name] = generic[name] + t * p
        lam_all = lam_builder(generic) if lam_builder else lam
        T_all = ansatz.family({k: generic[k] for k in ansatz.function_names()})
        gen_all = generation_check(model, [lam_all, T_all], **caps)
        notes.append("generation_all_solutions closes over the union of all solutions; "
                     "a failure there rules out every solution")
    return KepkaReport(model, tag, degree, res, sol, gen, gen_all, core, tuple(notes))


def describe_solution(sol: AnsatzSolution) -> str:
    if not sol.solvable:
        return "no solution"
    parts = [f"{k} = {v}" for k, v in sorted(sol.member().items())]
    return ", ".join(parts) + ("" if sol.unique else f" (+ {len(sol.directions)} free directions)")


__all__ = [
    "TransversalAnsatz", "Residual", "AnsatzSolution", "GenerationResult", "CoreResult", "KepkaReport",
    "LoopShape", "loop_shape", "left_family", "lv_family", "general_poly", "s_connected_check",
    "ansatz_solve", "generation_check", "group_algebra", "subgroup_span", "core_check",
    "two_sided_residual", "two_sided_amalg_residual", "two_sided_model_residual",
    "check_transversal", "solve_transversal", "describe_solution",
]
