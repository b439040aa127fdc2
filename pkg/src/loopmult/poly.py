"""Exact multivariate polynomials over the rationals.

A :class:`Poly` carries an ordered tuple of variable names and a map from
exponent vectors to nonzero :class:`fractions.Fraction` coefficients.
Binary operations align operands onto the union of their variables, ordered
by :func:`var_key` (``x, y, z, k, l, m, a, b, c`` first, everything else
after in natural order).  Equality and hashing ignore declared-but-unused
variables, so ``x`` over ``(x,)`` equals ``x`` over ``(x, z)``.

Text syntax is the usual one: ``3/2*x^2*z - z``; ``**`` is accepted as a
synonym for ``^``.
"""
from __future__ import annotations

import ast
import re
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from .linalg import rank

CANONICAL_VARS = ("x", "y", "z", "k", "l", "m", "a", "b", "c")

Scalar = Union[int, Fraction]


class PolyError(ValueError):
    pass


def var_key(name: str):
    if name in CANONICAL_VARS:
        return (0, CANONICAL_VARS.index(name), ())
    parts = tuple((0, int(p), "") if p.isdigit() else (1, 0, p)
                  for p in re.split(r"(\d+)", name) if p)
    return (1, 0, parts)


def sort_vars(names: Iterable[str]) -> tuple:
    return tuple(sorted(set(names), key=var_key))


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/2"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PolyError(f"not a rational number: {value!r}") from exc
    if isinstance(value, Poly) and value.is_constant():
        return value.constant_value()
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _scalar(value):
    """Fraction for int/Fraction operands, None for anything else."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return None


def _glex_key(exps: tuple):
    return (sum(exps), exps)


class Poly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Scalar] | None = None,
                 variables: Sequence[str] = ()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise PolyError(f"repeated variable in {variables}")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise PolyError(
                    f"exponent vector {exps} does not match variables {variables}")
            c = as_rational(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "vars", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "Poly":
        return cls({}, variables)

    @classmethod
    def const(cls, value, variables: Sequence[str] = ()) -> "Poly":
        variables = tuple(variables)
        return cls({(0,) * len(variables): as_rational(value)}, variables)

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "Poly":
        variables = (name,) if variables is None else tuple(variables)
        if name not in variables:
            raise PolyError(f"{name!r} not among {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls({exps: 1}, variables)

    @classmethod
    def vars_of(cls, *names: str) -> tuple:
        """Convenience: ``x, y = Poly.vars_of("x", "y")``."""
        return tuple(cls.var(n) for n in names)

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        return cls.const(value)

    # -- variable bookkeeping ---------------------------------------------

    def free_vars(self) -> tuple:
        used = set()
        for exps in self.terms:
            used.update(v for v, e in zip(self.vars, exps) if e)
        return tuple(v for v in self.vars if v in used)

    def with_vars(self, variables: Sequence[str]) -> "Poly":
        """Re-express over ``variables`` (must contain every free variable)."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        missing = set(self.free_vars()) - set(variables)
        if missing:
            raise PolyError(f"cannot drop variables {sorted(missing)} in use")
        pos = {v: i for i, v in enumerate(variables)}
        out = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.vars, exps):
                if e:
                    new[pos[v]] = e
            out[tuple(new)] = c
        return Poly(out, variables)

    def _align(self, other: "Poly"):
        if self.vars == other.vars:
            return self, other
        union = sort_vars(self.vars + other.vars)
        return self.with_vars(union), other.with_vars(union)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            q = _scalar(other)
            if q is None:
                return NotImplemented
            other = Poly.const(q, self.vars)
        a, b = self._align(other)
        out = dict(a.terms)
        for exps, c in b.terms.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return Poly(out, a.vars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.vars)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, Poly):
            q = _scalar(other)
            if q is None:
                return NotImplemented
            other = Poly.const(q, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        if _scalar(other) is None:
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            q = _scalar(other)
            if q is None:
                return NotImplemented
            if not q:
                return Poly.zero(self.vars)
            return Poly({e: c * q for e, c in self.terms.items()}, self.vars)
        a, b = self._align(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out, a.vars)

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = as_rational(other)
        if not q:
            raise ZeroDivisionError("polynomial division by zero")
        return self * (1 / q)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolyError("exponent must be a nonnegative integer")
        result = Poly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------

    def _canonical(self):
        return frozenset(
            (tuple((v, e) for v, e in zip(self.vars, exps) if e), c)
            for exps, c in self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, Poly):
            q = _scalar(other)
            if q is None:
                return NotImplemented
            return self.is_constant() and self.constant_value() == q
        return self._canonical() == other._canonical()

    def __hash__(self):
        if self._hash is None:
            h = hash(self._canonical())
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _glex_key(t[0]), reverse=True)

    def coefficients_in(self, names: Sequence[str]) -> dict:
        """Split as ``sum(monomial(names) * coefficient)``.

        Returns a map from exponent tuples over ``names`` to Polys in the
        remaining variables.
        """
        names = tuple(names)
        idx = [self.vars.index(n) if n in self.vars else None for n in names]
        rest = tuple(v for v in self.vars if v not in names)
        rest_idx = [self.vars.index(v) for v in rest]
        groups: dict = {}
        for exps, c in self.terms.items():
            key = tuple(exps[i] if i is not None else 0 for i in idx)
            sub = tuple(exps[i] for i in rest_idx)
            groups.setdefault(key, {})[sub] = c
        return {k: Poly(t, rest) for k, t in groups.items()}

    # -- evaluation and substitution ----------------------------------------

    def eval(self, point: Sequence) -> Fraction:
        """Exact value at ``point`` (one scalar per declared variable)."""
        point = tuple(point)
        if len(point) != len(self.vars):
            raise PolyError(
                f"point has arity {len(point)}, polynomial has {len(self.vars)} variables")
        point = tuple(as_rational(p) for p in point)
        total = Fraction(0)
        for exps, c in self.terms.items():
            t = c
            for p, e in zip(point, exps):
                if e:
                    t *= p ** e
            total += t
        return total

    def subs(self, mapping: Mapping[str, object]):
        """Substitute scalars or Polys for some variables.

        Returns a Poly (over the untouched variables plus those of any Poly
        images); unknown names in ``mapping`` are ignored.
        """
        images = {v: mapping[v] for v in self.vars if v in mapping}
        if not images:
            return self
        keep = tuple(v for v in self.vars if v not in images)
        pvars = list(keep)
        for img in images.values():
            if isinstance(img, Poly):
                pvars.extend(img.vars)
        out_vars = sort_vars(pvars)
        power_cache: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in power_cache:
                img = images[v]
                if isinstance(img, Poly):
                    power_cache[key] = img.with_vars(out_vars) ** e
                else:
                    power_cache[key] = as_rational(img) ** e
            return power_cache[key]

        keep_pos = {v: out_vars.index(v) for v in keep}
        acc: dict = {}
        poly_acc = Poly.zero(out_vars)
        for exps, c in self.terms.items():
            mono = [0] * len(out_vars)
            scalar = Fraction(c)
            pfactor = None
            for v, e in zip(self.vars, exps):
                if not e:
                    continue
                if v in images:
                    val = power(v, e)
                    if isinstance(val, Poly):
                        pfactor = val if pfactor is None else pfactor * val
                    else:
                        scalar *= val
                else:
                    mono[keep_pos[v]] = e
            if not scalar:
                continue
            if pfactor is None:
                m = tuple(mono)
                acc[m] = acc.get(m, 0) + scalar
            else:
                poly_acc = poly_acc + pfactor * Poly({tuple(mono): scalar}, out_vars)
        return poly_acc + Poly(acc, out_vars)

    def at(self, mapping: Mapping[str, object]):
        """Substitute by name; a Fraction when every free variable gets a scalar."""
        free = self.free_vars()
        if all(v in mapping and not isinstance(mapping[v], Poly) for v in free):
            vals = [as_rational(mapping[v]) if v in free else 0 for v in self.vars]
            return self.eval(vals)
        return self.subs(mapping)

    def __call__(self, *args):
        """Evaluate positionally; returns a Fraction when every argument is scalar."""
        if len(args) != len(self.vars):
            raise PolyError(
                f"expected {len(self.vars)} arguments {self.vars}, got {len(args)}")
        if not any(isinstance(a, Poly) for a in args):
            return self.eval(args)
        return self.subs(dict(zip(self.vars, args)))

    def shift(self, offsets: Sequence) -> "Poly":
        """The polynomial ``q`` with ``q(v) = p(v + offsets)``."""
        offsets = tuple(as_rational(o) for o in offsets)
        if len(offsets) != len(self.vars):
            raise PolyError(
                f"offset arity {len(offsets)} != variable arity {len(self.vars)}")
        out: dict = {}
        for exps, c in self.terms.items():
            # expand each (v_i + o_i)^e_i binomially
            factors = []
            for e, o in zip(exps, offsets):
                factors.append([(j, comb(e, j) * o ** (e - j)) for j in range(e + 1)
                                if o or j == e])
            for combo in product(*factors):
                coef = c
                for _, f in combo:
                    coef *= f
                if coef:
                    key = tuple(j for j, _ in combo)
                    out[key] = out.get(key, 0) + coef
        return Poly(out, self.vars)

    def diff(self, var: str) -> "Poly":
        if var not in self.vars:
            raise PolyError(f"unknown variable {var!r} (have {self.vars})")
        i = self.vars.index(var)
        out = {}
        for exps, c in self.terms.items():
            if exps[i]:
                e = list(exps)
                e[i] -= 1
                out[tuple(e)] = c * exps[i]
        return Poly(out, self.vars)

    # -- text -------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}"
                            for v, e in zip(self.vars, exps) if e)
            mag = abs(c)
            if not mono:
                body = fmt_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{fmt_rational(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={self.vars})"

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> "Poly":
        """Parse ``3/2*x^2*z - z``.  Only +, -, *, / by constants and ^ are allowed."""
        if not isinstance(text, str) or not text.strip():
            raise PolyError("empty polynomial string")
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise PolyError(f"cannot parse polynomial {text!r}: {exc.msg}") from exc
        allowed = None if variables is None else tuple(variables)
        result = _ast_to_poly(tree.body, allowed, text)
        if allowed is not None:
            return result.with_vars(allowed)
        return result.with_vars(sort_vars(result.free_vars()))


def _ast_to_poly(node, allowed, text) -> Poly:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return Poly.const(node.value)
        raise PolyError(f"only integer literals are allowed in {text!r}")
    if isinstance(node, ast.Name):
        if allowed is not None and node.id not in allowed:
            raise PolyError(f"variable {node.id!r} not allowed here (allowed: {allowed})")
        return Poly.var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _ast_to_poly(node.operand, allowed, text)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        left = _ast_to_poly(node.left, allowed, text)
        if isinstance(node.op, ast.Pow):
            right = _ast_to_poly(node.right, allowed, text)
            if not right.is_constant() or right.constant_value().denominator != 1 \
                    or right.constant_value() < 0:
                raise PolyError(f"exponent must be a nonnegative integer in {text!r}")
            return left ** int(right.constant_value())
        right = _ast_to_poly(node.right, allowed, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant():
                raise PolyError(f"division by a non-constant in {text!r}")
            return left / right.constant_value()
    raise PolyError(f"unsupported syntax in polynomial {text!r}")


# -- module-level operations ----------------------------------------------

def poly_eval(p: Poly, point: Sequence) -> Fraction:
    return p.eval(point)


def poly_shift(p: Poly, offsets: Sequence) -> Poly:
    return p.shift(offsets)


def poly_diff(p: Poly, var: str) -> Poly:
    return p.diff(var)


def coefficient_vector(polys: Sequence[Poly]) -> list:
    """Stack the coefficients of ``polys`` over a shared monomial index."""
    monos = sorted({e for p in polys for e in p.terms}, key=_glex_key, reverse=True)
    return [[p.terms.get(m, Fraction(0)) for m in monos] for p in polys]


def translate_span_dim(p: Poly) -> int:
    """Dimension of the span of all translates ``p(v + beta)``.

    Shifts over the integer grid ``{0..deg}`` in each variable suffice: a
    translate is a polynomial of degree at most ``deg`` in each offset, so
    interpolation on ``deg + 1`` nodes per offset recovers every coefficient
    of that polynomial, hence the full span.  The zero polynomial spans {0}.
    """
    if p.is_zero():
        return 0
    free = p.free_vars()
    q = p.with_vars(free)
    d = q.total_degree()
    shifts = [q.shift(beta) for beta in product(range(d + 1), repeat=len(free))]
    return rank(coefficient_vector(shifts))
