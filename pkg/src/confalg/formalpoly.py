"""Polynomials in the formal variables of the lambda-bracket calculus.

There are exactly four variables, ∂ < λ < μ < ν, rendered as ``D x y z``.
Coefficients are :class:`~confalg.paramfield.ParamFraction` values; a term map
is keyed by 4-tuples of exponents.
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from math import factorial
from typing import Mapping

from .paramfield import ParameterMismatch, ParamField, ParamFraction

NEG_INF = float("-inf")


class Var(IntEnum):
    PARTIAL = 0
    LAMBDA = 1
    MU = 2
    NU = 3

    @property
    def symbol(self) -> str:
        return "Dxyz"[self]


PARTIAL, LAMBDA, MU, NU = Var.PARTIAL, Var.LAMBDA, Var.MU, Var.NU
_ZERO4 = (0, 0, 0, 0)


def _unit(v: int, k: int = 1):
    e = [0, 0, 0, 0]
    e[v] = k
    return tuple(e)


def _formal_key(e):
    return (sum(e), e)


class FormalPolynomial:
    """Sparse polynomial in ∂, λ, μ, ν over a parameter field. Treat as immutable."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: ParamField, terms: dict | None = None):
        self.field = field
        self.terms = terms if terms is not None else {}
        self._hash = None

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field: ParamField) -> "FormalPolynomial":
        return cls(field, {})

    @classmethod
    def const(cls, field: ParamField, c) -> "FormalPolynomial":
        c = field(c)
        return cls(field, {_ZERO4: c} if c else {})

    @classmethod
    def var(cls, field: ParamField, v: Var) -> "FormalPolynomial":
        return cls(field, {_unit(v): field.one()})

    @classmethod
    def from_terms(cls, field: ParamField, terms: Mapping) -> "FormalPolynomial":
        out = {}
        for e, c in terms.items():
            c = field(c)
            if c:
                out[tuple(e) + (0,) * (4 - len(e))] = c
        return cls(field, out)

    # predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and _ZERO4 in t)

    def constant_coefficient(self) -> ParamFraction:
        return self.terms.get(_ZERO4, self.field.zero())

    def variables(self) -> set:
        return {Var(i) for e in self.terms for i in range(4) if e[i]}

    def involves(self, v: Var) -> bool:
        return any(e[v] for e in self.terms)

    def __eq__(self, other):
        if isinstance(other, FormalPolynomial):
            return self.field is other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction, ParamFraction)):
            return self.is_constant() and self.constant_coefficient() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # arithmetic ---------------------------------------------------------------

    def _lift(self, other) -> "FormalPolynomial":
        if isinstance(other, FormalPolynomial):
            if other.field is not self.field:
                raise ParameterMismatch(f"{self.field.names} vs {other.field.names}")
            return other
        return FormalPolynomial.const(self.field, other)

    def __neg__(self):
        return FormalPolynomial(self.field, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return FormalPolynomial(self.field, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FormalPolynomial":
        c = self.field(c) if not isinstance(c, ParamFraction) else c
        if not c:
            return FormalPolynomial(self.field, {})
        if c.is_one():
            return self
        return FormalPolynomial(self.field, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, FormalPolynomial):
            return self.scale(other)
        if other.field is not self.field:
            raise ParameterMismatch(f"{self.field.names} vs {other.field.names}")
        a, b = self.terms, other.terms
        if not a or not b:
            return FormalPolynomial(self.field, {})
        if len(a) == 1 and _ZERO4 in a:
            return other.scale(a[_ZERO4])
        if len(b) == 1 and _ZERO4 in b:
            return self.scale(b[_ZERO4])
        out: dict = {}
        for (a0, a1, a2, a3), c1 in a.items():
            for (b0, b1, b2, b3), c2 in b.items():
                e = (a0 + b0, a1 + b1, a2 + b2, a3 + b3)
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return FormalPolynomial(self.field, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = FormalPolynomial.const(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus operations -------------------------------------------------------

    def degree(self, v: Var):
        """Largest exponent of ``v``; NEG_INF for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(e[v] for e in self.terms)

    def coefficient(self, v: Var, k: int) -> "FormalPolynomial":
        """Coefficient of v**k, a polynomial free of ``v``."""
        out = {}
        for e, c in self.terms.items():
            if e[v] == k:
                e2 = list(e)
                e2[v] = 0
                out[tuple(e2)] = c
        return FormalPolynomial(self.field, out)

    def rename(self, v: Var, w: Var) -> "FormalPolynomial":
        """Substitute v ↦ w for a variable w that does not occur."""
        if v == w or not self.terms:
            return self
        out = {}
        for e, c in self.terms.items():
            if e[w]:
                raise ValueError(f"{w.name} already occurs; rename is not a substitution")
            e2 = list(e)
            e2[w], e2[v] = e[v], 0
            out[tuple(e2)] = c
        return FormalPolynomial(self.field, out)

    def substitute(self, v: Var, image: "FormalPolynomial") -> "FormalPolynomial":
        """Ring homomorphism v ↦ image, for an affine image."""
        image = self._lift(image)
        if any(sum(e) > 1 for e in image.terms):
            raise ValueError("substitution image must have total degree <= 1")
        if not any(e[v] for e in self.terms):
            return self
        if image == FormalPolynomial.var(self.field, v):
            return self
        powers = [FormalPolynomial.const(self.field, 1)]
        out = FormalPolynomial(self.field, {})
        grouped: dict = {}
        for e, c in self.terms.items():
            k = e[v]
            e2 = list(e)
            e2[v] = 0
            grouped.setdefault(k, {})[tuple(e2)] = c
        for k in sorted(grouped):
            while len(powers) <= k:
                powers.append(powers[-1] * image)
            out = out + FormalPolynomial(self.field, grouped[k]) * powers[k]
        return out

    def derivative(self, v: Var = PARTIAL) -> "FormalPolynomial":
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            if k:
                e2 = list(e)
                e2[v] = k - 1
                out[tuple(e2)] = c * k
        return FormalPolynomial(self.field, out)

    def divmod_partial(self, g: "FormalPolynomial"):
        """Division with remainder in ∂ over the coefficient field; both operands must
        be polynomials in ∂ alone."""
        if not g.terms:
            raise ZeroDivisionError("division by zero polynomial")
        for f in (self, g):
            if any(e[1] or e[2] or e[3] for e in f.terms):
                raise ValueError("divmod_partial needs polynomials in ∂ only")
        dg = g.degree(PARTIAL)
        lead_inv = g.terms[_unit(PARTIAL, dg) if dg else _ZERO4].inverse()
        q = FormalPolynomial(self.field, {})
        r = self
        while r.terms:
            dr = r.degree(PARTIAL)
            if dr < dg:
                break
            c = r.terms[_unit(PARTIAL, dr) if dr else _ZERO4] * lead_inv
            t = FormalPolynomial(self.field, {_unit(PARTIAL, dr - dg) if dr > dg else _ZERO4: c})
            q = q + t
            r = r - t * g
        return q, r

    def map_coefficients(self, fn, field: ParamField | None = None) -> "FormalPolynomial":
        field = field or self.field
        out = {}
        for e, c in self.terms.items():
            c2 = fn(c)
            if c2:
                out[e] = c2
        return FormalPolynomial(field, out)

    def embed(self, field: ParamField) -> "FormalPolynomial":
        if field is self.field:
            return self
        return self.map_coefficients(lambda c: c.embed(field), field)

    def substitute_params(self, assignment, field: ParamField | None = None) -> "FormalPolynomial":
        if field is None:
            field = self.field.without(n for n in self.field.names if n in assignment)
        return self.map_coefficients(lambda c: c.substitute(assignment, field), field)

    def occurring_params(self) -> set:
        out = set()
        for c in self.terms.values():
            out |= c.occurring()
        return out

    # text ---------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_formal_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                "Dxyz"[i] if k == 1 else f"{'Dxyz'[i]}^{k}" for i, k in enumerate(e) if k
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
                continue
            if c.is_one():
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            elif c.den.is_one() and len(c.num.terms) == 1:
                parts.append(f"{cs}*{mono}")
            else:
                parts.append(f"({cs})*{mono}")
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __repr__(self):
        return f"FormalPolynomial({self})"


def fp_arith(op: str, x: FormalPolynomial, y) -> FormalPolynomial:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "scale":
        return x.scale(y)
    raise ValueError(f"unknown operation {op!r}")


def substitute_linear(x: FormalPolynomial, v: Var, image: FormalPolynomial) -> FormalPolynomial:
    return x.substitute(v, image)


def coefficient_extract(x: FormalPolynomial, v: Var, k: int) -> FormalPolynomial:
    return x.coefficient(v, k)


def fp_degree(x: FormalPolynomial, v: Var):
    return x.degree(v)


def kth_coefficient(x: FormalPolynomial, v: Var, k: int) -> FormalPolynomial:
    """k! times the coefficient of v**k (the k-th product convention)."""
    return x.coefficient(v, k).scale(factorial(k))
