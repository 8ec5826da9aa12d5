"""Lie conformal superalgebra presentations and the λ-bracket engine.

A presentation is a finite list of generators (free K[∂]-basis) and a table of
λ-brackets between generators. Values are :class:`~confalg.freemod.Element`
objects whose coefficients are polynomials in ∂ and λ. Only one orientation of
each pair needs to be stored; the other is derived by super skew-symmetry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .formalpoly import LAMBDA, MU, NU, PARTIAL, FormalPolynomial, Var
from .freemod import Element, SpanExpressor, invert
from .paramfield import ParamField
from .report import CheckItem, Report

EVEN, ODD = 0, 1
_PARITY_NAMES = {"even": EVEN, "odd": ODD}
_INDEXED = re.compile(r"^([A-Za-z][A-Za-z]*)_(\d+)$")


def parse_parity(s) -> int:
    if s in (EVEN, ODD):
        return s
    return _PARITY_NAMES[s]


def parity_name(p: int) -> str:
    return "odd" if p else "even"


@dataclass(frozen=True)
class GeneratorSymbol:
    family: str
    grade: int
    parity: int
    indexed: bool = True

    @property
    def name(self) -> str:
        return f"{self.family}_{self.grade}" if self.indexed else self.family

    @classmethod
    def from_name(cls, name: str, parity, grade: int | None = None) -> "GeneratorSymbol":
        m = _INDEXED.match(name)
        if m:
            g = int(m.group(2))
            if grade is not None and grade != g:
                raise ValueError(f"{name}: declared grade {grade} disagrees with index")
            return cls(m.group(1), g, parse_parity(parity), True)
        return cls(name, grade or 0, parse_parity(parity), False)

    def __str__(self):
        return self.name


class UnknownGenerator(KeyError):
    pass


def _var_poly(field: ParamField, v: Var) -> FormalPolynomial:
    return FormalPolynomial.var(field, v)


def _only_partial_lambda(e: Element) -> bool:
    return all(not (t[2] or t[3]) for f in e.coeffs.values() for t in f.terms)


def skew_image(value: Element, sign: int) -> Element:
    """``sign`` times ``value`` with λ ↦ −λ−∂ (the super skew rule)."""
    f = value.field
    img = -(_var_poly(f, LAMBDA) + _var_poly(f, PARTIAL))
    out = value.substitute(LAMBDA, img)
    return out if sign == 1 else -out


def sesquilinear(x: Element, y: Element, lookup: Callable[[str, str], Element], out_var: Var) -> Element:
    """Extend a generator table to [x_{out} y] using sesquilinearity.

    ``lookup(a, b)`` returns the λ-bracket (or λ-action) of basis symbols in
    the variables ∂, λ. Coefficients of ``x`` and ``y`` may involve other
    formal variables, treated as constants, but not ``out_var``.
    """
    if out_var == PARTIAL:
        raise ValueError("the output variable must be a λ-type variable")
    field = x.field
    d = _var_poly(field, PARTIAL)
    o = _var_poly(field, out_var)
    result = Element(field)
    left = {}
    for a, f in x.coeffs.items():
        if f.involves(out_var):
            raise ValueError(f"coefficient of {a} already involves {out_var.symbol}")
        left[a] = f.substitute(PARTIAL, -o)
    right = {}
    for b, g in y.coeffs.items():
        if g.involves(out_var):
            raise ValueError(f"coefficient of {b} already involves {out_var.symbol}")
        right[b] = g.substitute(PARTIAL, d + o)
    for a, fa in left.items():
        for b, gb in right.items():
            val = lookup(a, b)
            if not val:
                continue
            if out_var != LAMBDA:
                val = val.rename(LAMBDA, out_var)
            result = result + val.scale(fa * gb)
    return result


class AlgebraPresentation:
    """Generators with parities and grades, plus a λ-bracket table."""

    def __init__(
        self,
        field: ParamField,
        gens: Sequence[GeneratorSymbol],
        table: Mapping[tuple, Element],
        bound: int | None = None,
        name: str = "algebra",
    ):
        self.field = field
        self.gens = tuple(gens)
        self.name = name
        self.bound = bound
        self.by_name = {g.name: g for g in self.gens}
        if len(self.by_name) != len(self.gens):
            raise ValueError("duplicate generator")
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        self.table = {}
        for (a, b), v in table.items():
            for s in (a, b):
                if s not in self.by_name:
                    raise UnknownGenerator(s)
            if v.field is not field:
                v = v.embed(field)
            if not _only_partial_lambda(v):
                raise ValueError(f"[{a} λ {b}] may only involve ∂ and λ")
            par = (self.by_name[a].parity + self.by_name[b].parity) % 2
            for s in v.coeffs:
                if s not in self.by_name:
                    raise UnknownGenerator(s)
                if self.by_name[s].parity != par:
                    raise ValueError(f"[{a} λ {b}] has a term on {s} of the wrong parity")
            if v:
                self.table[(a, b)] = v
        if bound is not None:
            for g in self.gens:
                if g.grade > bound:
                    raise ValueError(f"{g.name} exceeds the grade bound {bound}")
        self._cache: dict = {}

    # basic access -------------------------------------------------------------

    @property
    def names(self) -> list:
        return [g.name for g in self.gens]

    def parity(self, name: str) -> int:
        try:
            return self.by_name[name].parity
        except KeyError:
            raise UnknownGenerator(name) from None

    def element_parity(self, x: Element):
        """Common parity of the support, or None if mixed or zero."""
        ps = {self.parity(s) for s in x.coeffs}
        return ps.pop() if len(ps) == 1 else None

    def gen(self, name: str, coeff=1) -> Element:
        if name not in self.by_name:
            raise UnknownGenerator(name)
        return Element.basis(self.field, name, coeff)

    def elem(self, terms: Mapping[str, object]) -> Element:
        """Element from a {name: coefficient} map; coefficients may be scalars or polynomials."""
        out = Element(self.field)
        for k, c in terms.items():
            out = out + self.gen(k, c)
        return out

    def lookup(self, a: str, b: str) -> Element:
        """[a_λ b] for generators, from the table or by skew-symmetry."""
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if a not in self.by_name:
            raise UnknownGenerator(a)
        if b not in self.by_name:
            raise UnknownGenerator(b)
        v = self.table.get(key)
        if v is None:
            rev = self.table.get((b, a))
            if rev is None:
                v = Element(self.field)
            else:
                sign = -1 if self.parity(a) * self.parity(b) == 0 else 1
                v = skew_image(rev, sign)
        self._cache[key] = v
        return v

    def bracket(self, x: Element, y: Element, out_var: Var = LAMBDA) -> Element:
        for e in (x, y):
            for s in e.coeffs:
                if s not in self.by_name:
                    raise UnknownGenerator(s)
        return sesquilinear(x, y, self.lookup, out_var)

    def stored_pairs(self) -> list:
        return sorted(self.table, key=lambda k: (self.index[k[0]], self.index[k[1]]))

    def with_entry(self, a: str, b: str, value: Element) -> "AlgebraPresentation":
        """Copy with [a_λ b] replaced; the reverse orientation keeps its current value."""
        table = dict(self.table)
        table[(b, a)] = self.lookup(b, a)
        table[(a, b)] = value
        if a == b:
            table[(a, a)] = value
        return AlgebraPresentation(self.field, self.gens, table, self.bound, self.name)

    def renamed(self, name: str) -> "AlgebraPresentation":
        return AlgebraPresentation(self.field, self.gens, self.table, self.bound, name)

    def embed(self, field: ParamField) -> "AlgebraPresentation":
        if field is self.field:
            return self
        table = {k: v.embed(field) for k, v in self.table.items()}
        return AlgebraPresentation(field, self.gens, table, self.bound, self.name)

    def canonical_table(self) -> dict:
        """One orientation per unordered pair (declaration order), nonzero values only."""
        out = {}
        for i, a in enumerate(self.gens):
            for b in self.gens[i:]:
                v = self.lookup(a.name, b.name)
                if v:
                    out[(a.name, b.name)] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraPresentation):
            return NotImplemented
        if self.field is not other.field or self.gens != other.gens or self.bound != other.bound:
            return False
        return all(
            self.lookup(a, b) == other.lookup(a, b) for a in self.names for b in self.names
        )

    __hash__ = None

    def __repr__(self):
        return f"AlgebraPresentation({self.name}, {len(self.gens)} generators)"


# checks ---------------------------------------------------------------------


def bracket(alg: AlgebraPresentation, x: Element, y: Element, out_var: Var = LAMBDA) -> Element:
    return alg.bracket(x, y, out_var)


def kth_product(alg: AlgebraPresentation, a: Element, b: Element, k: int) -> Element:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return alg.bracket(a, b, LAMBDA).coefficient(LAMBDA, k).scale(factorial(k))


def _sign(alg, a: str, b: str) -> int:
    return -1 if alg.parity(a) and alg.parity(b) else 1


def skew_residual(alg: AlgebraPresentation, a: str, b: str) -> Element:
    """[a_λ b] + (−1)^{|a||b|} [b_{−λ−∂} a], read directly from the stored data."""
    ab = alg.table.get((a, b))
    ba = alg.table.get((b, a))
    if ab is None and ba is None:
        return Element(alg.field)
    ab = alg.lookup(a, b) if ab is None else ab
    ba = alg.lookup(b, a) if ba is None else ba
    return ab + skew_image(ba, _sign(alg, a, b))


def check_skew(alg: AlgebraPresentation) -> Report:
    items = []
    n = 0
    for i, a in enumerate(alg.names):
        for b in alg.names[i:]:
            n += 1
            r = skew_residual(alg, a, b)
            if r:
                items.append(CheckItem("skew", (a, b), r.format(alg.names), False, r))
    return Report(items, {"skew": n})


def jacobi_residual(alg: AlgebraPresentation, a: str, b: str, c: str) -> Element:
    """[a_λ[b_μ c]] − [[a_λ b]_{λ+μ} c] − (−1)^{|a||b|}[b_μ[a_λ c]] in ∂, λ, μ."""
    f = alg.field
    A, B, C = alg.gen(a), alg.gen(b), alg.gen(c)
    lhs = alg.bracket(A, alg.bracket(B, C, MU), LAMBDA)
    mid = alg.bracket(alg.bracket(A, B, LAMBDA), C, NU)
    mid = mid.substitute(NU, _var_poly(f, LAMBDA) + _var_poly(f, MU))
    rhs2 = alg.bracket(B, alg.bracket(A, C, LAMBDA), MU)
    if _sign(alg, a, b) == -1:
        rhs2 = -rhs2
    return lhs - mid - rhs2


def check_jacobi(alg: AlgebraPresentation, triples: Iterable[tuple] | None = None) -> Report:
    items = []
    n = 0
    if triples is None:
        names = alg.names
        triples = ((a, b, c) for a in names for b in names for c in names)
    for a, b, c in triples:
        n += 1
        r = jacobi_residual(alg, a, b, c)
        if r:
            items.append(CheckItem("jacobi", (a, b, c), r.format(alg.names), False, r))
    return Report(items, {"jacobi": n})


def check_algebra(alg: AlgebraPresentation) -> Report:
    return check_skew(alg).extend(check_jacobi(alg))


# constructions -----------------------------------------------------------------


def truncate(alg: AlgebraPresentation, n: int) -> AlgebraPresentation:
    """Quotient by the span of generators of grade > n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if alg.bound is not None and n > alg.bound:
        raise ValueError(f"cannot truncate to {n} above the current bound {alg.bound}")
    gens = [g for g in alg.gens if g.grade <= n]
    keep = {g.name for g in gens}
    table = {}
    for (a, b), v in alg.table.items():
        if a in keep and b in keep:
            table[(a, b)] = Element(alg.field, {k: f for k, f in v.coeffs.items() if k in keep})
    return AlgebraPresentation(alg.field, gens, table, n, alg.name)


def _check_images(alg: AlgebraPresentation, new_gens, images):
    for g in new_gens:
        img = images[g.name]
        for s in img.coeffs:
            if s not in alg.by_name:
                raise UnknownGenerator(s)
        p = alg.element_parity(img)
        if img and p is None:
            raise ValueError(f"image of {g.name} is not parity-homogeneous")
        if img and p != g.parity:
            raise ValueError(f"image of {g.name} has parity {parity_name(p)}")


def transport_structure(
    src: AlgebraPresentation,
    new_gens: Sequence[GeneratorSymbol],
    images: Mapping[str, Element],
    bound: int | None = None,
    name: str | None = None,
) -> AlgebraPresentation:
    """Presentation on the K[∂]-span of ``images`` (keyed by new generator names).

    The images must be independent and span a subalgebra; the result makes
    the map new name ↦ image an isomorphism onto that subalgebra.
    """
    images = {g.name: images[g.name].embed(src.field) for g in new_gens}
    _check_images(src, new_gens, images)
    express = SpanExpressor([g.name for g in new_gens], [images[g.name] for g in new_gens], src.names, src.field).express
    table = {}
    for i, a in enumerate(new_gens):
        for b in new_gens[i:]:
            v = src.bracket(images[a.name], images[b.name], LAMBDA)
            v = express(v)
            if v:
                table[(a.name, b.name)] = v
    return AlgebraPresentation(src.field, new_gens, table, bound if bound is not None else src.bound, name or src.name)


def change_basis(
    alg: AlgebraPresentation,
    new_gens: Sequence[GeneratorSymbol],
    images: Mapping[str, Element],
    bound: int | None = None,
    name: str | None = None,
) -> AlgebraPresentation:
    """Rewrite ``alg`` in a new K[∂]-basis; the images must be invertible over K[∂]."""
    invert({g.name: images[g.name].embed(alg.field) for g in new_gens}, alg.names, alg.field)
    return transport_structure(alg, new_gens, images, bound, name)


def specialize_algebra(alg: AlgebraPresentation, assignment: Mapping[str, object]) -> AlgebraPresentation:
    from fractions import Fraction

    assignment = {k: Fraction(v) for k, v in assignment.items()}
    field = alg.field.without(k for k in assignment)
    table = {k: v.substitute_params(assignment, field) for k, v in alg.table.items()}
    return AlgebraPresentation(field, alg.gens, table, alg.bound, alg.name)


def restrict_field(alg: AlgebraPresentation) -> AlgebraPresentation:
    """Drop parameters that no bracket coefficient uses."""
    used = set()
    for v in alg.table.values():
        for f in v.coeffs.values():
            used |= f.occurring_params()
    field = ParamField(n for n in alg.field.names if n in used)
    if field is alg.field:
        return alg
    table = {k: v.substitute_params({}, field) for k, v in alg.table.items()}
    return AlgebraPresentation(field, alg.gens, table, alg.bound, alg.name)


# morphisms ------------------------------------------------------------------------


class MorphismPresentation:
    """K[∂]-linear map given on generators; must preserve parity."""

    def __init__(self, source: AlgebraPresentation, target: AlgebraPresentation, images: Mapping[str, Element]):
        self.source = source
        self.target = target
        field = target.field
        if source.field is not field:
            field = source.field.union(target.field)
            self.source = source.embed(field)
            self.target = target.embed(field)
        self.field = field
        self.images = {}
        for g in self.source.gens:
            img = images.get(g.name, Element(field))
            img = img.embed(field)
            for s in img.coeffs:
                if s not in self.target.by_name:
                    raise UnknownGenerator(s)
            p = self.target.element_parity(img)
            if img and p != g.parity:
                raise ValueError(f"image of {g.name} does not have parity {parity_name(g.parity)}")
            self.images[g.name] = img
        for k in images:
            if k not in self.source.by_name:
                raise UnknownGenerator(k)

    def apply(self, x: Element) -> Element:
        return x.linear_image(self.images, self.field)


def check_morphism(m: MorphismPresentation) -> Report:
    items = []
    n = 0
    src, tgt = m.source, m.target
    for a in src.names:
        for b in src.names:
            n += 1
            lhs = m.apply(src.lookup(a, b))
            rhs = tgt.bracket(m.images[a], m.images[b], LAMBDA)
            r = lhs - rhs
            if r:
                items.append(CheckItem("morphism", (a, b), r.format(tgt.names), False, r))
    return Report(items, {"morphism": n})
