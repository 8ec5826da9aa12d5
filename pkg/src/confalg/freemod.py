"""Vectors in free modules over K[∂] (K = Q(params)), and echelon forms.

An :class:`Element` maps basis names to formal polynomials. Algebra elements,
bracket values (which also carry λ-type variables) and module vectors all use
it; the presentation that owns the basis knows parities and grades.

The echelon routines work over the univariate ring K[∂] by Euclidean row
reduction, which is all that finite free modules need.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .formalpoly import PARTIAL, FormalPolynomial, Var
from .paramfield import ParameterMismatch, ParamField, ParamFraction


class NotInvertible(ValueError):
    """A square K[∂]-matrix has no inverse over K[∂]."""


class DependentImages(ValueError):
    """Vectors expected to be K[∂]-independent are not."""


class Element:
    """Finite K[∂, λ, ...]-combination of named basis symbols; no zero coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ParamField, coeffs: Mapping[str, FormalPolynomial] | None = None):
        self.field = field
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}
        for v in self.coeffs.values():
            if v.field is not field:
                raise ParameterMismatch(f"{v.field.names} vs {field.names}")

    @classmethod
    def basis(cls, field: ParamField, name: str, coeff=1) -> "Element":
        if not isinstance(coeff, FormalPolynomial):
            coeff = FormalPolynomial.const(field, coeff)
        return cls(field, {name: coeff})

    @classmethod
    def zero(cls, field: ParamField) -> "Element":
        return cls(field)

    def items(self):
        return self.coeffs.items()

    def support(self) -> set:
        return set(self.coeffs)

    def __getitem__(self, name: str) -> FormalPolynomial:
        c = self.coeffs.get(name)
        return c if c is not None else FormalPolynomial.zero(self.field)

    def __contains__(self, name):
        return name in self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.field is other.field and self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    # arithmetic ---------------------------------------------------------------

    def _check(self, other: "Element"):
        if other.field is not self.field:
            raise ParameterMismatch(f"{self.field.names} vs {other.field.names}")

    def __add__(self, other: "Element") -> "Element":
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k)
            out[k] = v if s is None else s + v
        return Element(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.field, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        """Multiply every coefficient by a scalar or formal polynomial."""
        if isinstance(c, FormalPolynomial):
            if c.is_constant():
                c = c.constant_coefficient()
            else:
                return Element(self.field, {k: v * c for k, v in self.coeffs.items()})
        c = self.field(c) if not isinstance(c, ParamFraction) else c
        if c.is_one():
            return self
        return Element(self.field, {k: v.scale(c) for k, v in self.coeffs.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    # coefficientwise maps --------------------------------------------------------

    def map(self, fn, field: ParamField | None = None) -> "Element":
        return Element(field or self.field, {k: fn(v) for k, v in self.coeffs.items()})

    def substitute(self, v: Var, image: FormalPolynomial) -> "Element":
        return self.map(lambda f: f.substitute(v, image))

    def rename(self, v: Var, w: Var) -> "Element":
        return self.map(lambda f: f.rename(v, w))

    def coefficient(self, v: Var, k: int) -> "Element":
        return self.map(lambda f: f.coefficient(v, k))

    def degree(self, v: Var):
        return max((f.degree(v) for f in self.coeffs.values()), default=float("-inf"))

    def involves(self, v: Var) -> bool:
        return any(f.involves(v) for f in self.coeffs.values())

    def embed(self, field: ParamField) -> "Element":
        return self.map(lambda f: f.embed(field), field)

    def substitute_params(self, assignment, field: ParamField) -> "Element":
        return self.map(lambda f: f.substitute_params(assignment, field), field)

    def relabel(self, mapping: Mapping[str, str]) -> "Element":
        return Element(self.field, {mapping.get(k, k): v for k, v in self.coeffs.items()})

    def linear_image(self, images: Mapping[str, "Element"], field: ParamField | None = None) -> "Element":
        """Apply the K[∂, ...]-linear map sending each basis name to ``images[name]``."""
        out = Element(field or self.field)
        for k, f in self.coeffs.items():
            out = out + images[k].scale(f)
        return out

    # text -------------------------------------------------------------------

    def format(self, order: Sequence[str] | None = None) -> str:
        if not self.coeffs:
            return "0"
        names = list(order) if order is not None else sorted(self.coeffs)
        names += sorted(k for k in self.coeffs if k not in names)
        parts = []
        for k in names:
            f = self.coeffs.get(k)
            if f is None:
                continue
            if f == 1:
                parts.append(k)
            elif f == -1:
                parts.append(f"-{k}")
            else:
                s = str(f)
                parts.append(f"{s}*{k}" if len(f.terms) == 1 and " " not in s else f"({s})*{k}")
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Element({self})"


def _pdeg(f: FormalPolynomial) -> int:
    return int(f.degree(PARTIAL))


def _require_partial_only(rows: Iterable[Element]):
    for r in rows:
        for f in r.coeffs.values():
            if any(e[1] or e[2] or e[3] for e in f.terms):
                raise ValueError("echelon reduction needs coefficients in ∂ only")


def _lead(f: FormalPolynomial) -> ParamFraction:
    d = _pdeg(f)
    return f.terms[(d, 0, 0, 0)]


def echelon(rows: Sequence[Element], order: Sequence[str], tracked: Sequence[Element] | None = None):
    """Row-reduce over K[∂].

    Returns a list of ``(column, row, tracked_row)`` with strictly increasing
    pivot columns (by ``order``) and monic pivots; zero rows are dropped, and
    for each dropped row its tracked combination is reported in the second
    return value (a K[∂]-relation among the inputs).
    """
    _require_partial_only(rows)
    if tracked is None:
        work = [(r, None) for r in rows]
    else:
        work = list(zip(rows, tracked))
    relations = []
    out = []
    for col in order:
        cand = [w for w in work if col in w[0].coeffs]
        rest = [w for w in work if col not in w[0].coeffs]
        while len(cand) > 1:
            cand.sort(key=lambda w: _pdeg(w[0].coeffs[col]))
            piv = cand[0]
            keep = [piv]
            for r, t in cand[1:]:
                q, _ = r.coeffs[col].divmod_partial(piv[0].coeffs[col])
                r2 = r - piv[0].scale(q)
                t2 = None if t is None else t - piv[1].scale(q)
                if col in r2.coeffs:
                    keep.append((r2, t2))
                else:
                    rest.append((r2, t2))
            cand = keep
        if cand:
            r, t = cand[0]
            inv = _lead(r.coeffs[col]).inverse()
            out.append((col, r.scale(inv), None if t is None else t.scale(inv)))
        work = []
        for r, t in rest:
            if r:
                work.append((r, t))
            else:
                relations.append(t)
    for r, t in work:
        # support outside ``order``: keep as unreduced trailing rows
        raise ValueError(f"row {r} has support outside the declared basis order")
    return out, relations


class SubmoduleBasis:
    """Triangular generating set of a K[∂]-submodule of a free module."""

    def __init__(self, gens: Sequence[Element], order: Sequence[str], field: ParamField):
        self.order = list(order)
        self.field = field
        self.gens = list(gens)
        rows, _ = echelon(self.gens, self.order, None)
        self.rows = rows

    def __len__(self):
        return len(self.rows)

    def elements(self) -> list:
        return [r for _, r, _ in self.rows]

    def reduce(self, x: Element):
        """Leading-position division: returns (quotients per row, remainder)."""
        _require_partial_only([x])
        quotients = []
        for col, row, _ in self.rows:
            c = x.coeffs.get(col)
            if c is None:
                quotients.append(FormalPolynomial.zero(self.field))
                continue
            q, _ = c.divmod_partial(row.coeffs[col])
            quotients.append(q)
            if q:
                x = x - row.scale(q)
        return quotients, x

    def membership(self, x: Element) -> Element:
        return self.reduce(x)[1]

    def contains(self, x: Element) -> bool:
        return not self.membership(x)


def membership(basis: SubmoduleBasis, x: Element) -> Element:
    return basis.membership(x)


def invert(images: Mapping[str, Element], old_order: Sequence[str], field: ParamField) -> dict:
    """Invert a change of basis over K[∂].

    ``images`` maps each new name to an element over the old basis. Returns a
    dict mapping each old name to an element over the new names.
    """
    new_names = list(images)
    rows = [images[n] for n in new_names]
    tracked = [Element.basis(field, n) for n in new_names]
    piv, relations = echelon(rows, old_order, tracked)
    if relations:
        raise DependentImages("images are K[∂]-linearly dependent")
    if len(piv) != len(old_order) or len(new_names) != len(old_order):
        raise NotInvertible("images do not form a basis")
    for col, row, _ in piv:
        if _pdeg(row.coeffs[col]) != 0:
            raise NotInvertible(f"pivot on {col} is not a unit in K[∂]")
    # back substitution: clear entries above the unit pivots
    piv = [[col, row, t] for col, row, t in piv]
    for i in range(len(piv) - 1, -1, -1):
        col, row, t = piv[i]
        for j in range(i):
            c = piv[j][1].coeffs.get(col)
            if c is not None:
                piv[j][1] = piv[j][1] - row.scale(c)
                piv[j][2] = piv[j][2] - t.scale(c)
    return {col: t for col, _, t in piv}


class SpanExpressor:
    """Rewrite vectors of span(vectors) as combinations of named vectors.

    Coefficients of the input may involve λ-type variables; each power of
    those is treated separately, so the vectors themselves must involve ∂
    only. Raises ValueError for inputs outside the span.
    """

    def __init__(self, names: Sequence[str], vectors: Sequence[Element], order: Sequence[str], field: ParamField):
        self.field = field
        tracked = [Element.basis(field, n) for n in names]
        self.rows, relations = echelon(vectors, order, tracked)
        if relations:
            raise DependentImages("vectors are K[∂]-linearly dependent")

    def _reduce(self, x: Element):
        part = Element(self.field)
        for col, row, t in self.rows:
            c = x.coeffs.get(col)
            if c is None:
                continue
            q, _ = c.divmod_partial(row.coeffs[col])
            if q:
                x = x - row.scale(q)
                part = part + t.scale(q)
        return part, x

    def remainder(self, x: Element) -> Element:
        """Remainder of x (λ-type variables allowed) after reduction; zero iff x is in the span."""
        out = Element(self.field)
        for mono, xk in _split_lambda(x):
            _, r = self._reduce(xk)
            out = out + r.scale(mono)
        return out

    def express(self, x: Element) -> Element:
        out = Element(self.field)
        for mono, xk in _split_lambda(x):
            part, r = self._reduce(xk)
            if r:
                raise ValueError(f"{x} does not lie in the span")
            out = out + part.scale(mono)
        return out


def _split_lambda(x: Element):
    """Yield (monomial in λ, μ, ν; coefficient vector in ∂ only)."""
    groups: dict = {}
    for k, f in x.coeffs.items():
        for e, c in f.terms.items():
            groups.setdefault(e[1:], {}).setdefault(k, {})[(e[0], 0, 0, 0)] = c
    for rest in sorted(groups):
        mono = FormalPolynomial(x.field, {(0,) + rest: x.field.one()})
        vec = Element(x.field, {k: FormalPolynomial(x.field, t) for k, t in groups[rest].items()})
        yield mono, vec


def independent(vectors: Sequence[Element], order: Sequence[str], field: ParamField) -> bool:
    tracked = [Element.basis(field, f"#{i}") for i in range(len(vectors))]
    _, relations = echelon(vectors, order, tracked)
    return not relations
