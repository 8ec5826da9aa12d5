"""Exact rational functions over Q in a declared, ordered set of parameters.

A :class:`ParamField` names the parameters (``p``, ``a``, ``sigma``, ...).
Polynomials are sparse maps from exponent tuples to :class:`fractions.Fraction`
coefficients; fractions are kept in a normal form: numerator and denominator
coprime, and the denominator's leading coefficient (graded lex order over the
declared parameter order) equal to 1.

Multivariate gcds are delegated to SymPy's sparse polynomial rings; everything
else is plain Python on dicts.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from sympy import QQ
from sympy.polys.rings import ring as _sympy_ring

Rational = Union[int, Fraction]


class ParameterMismatch(ValueError):
    """Operands live over different parameter lists."""


class DenominatorVanishes(ZeroDivisionError):
    """A specialization sends a denominator to zero."""


class ParamField:
    """The field Q(names...). Instances are interned: equal names give the same object."""

    __slots__ = ("names", "nvars", "index", "zero_exp", "_zero", "_one", "__weakref__")
    _interned: dict = {}

    def __new__(cls, names: Iterable[str] = ()):
        names = tuple(names)
        cached = cls._interned.get(names)
        if cached is not None:
            return cached
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate parameter names in {names}")
        self = super().__new__(cls)
        self.names = names
        self.nvars = len(names)
        self.index = {n: i for i, n in enumerate(names)}
        self.zero_exp = (0,) * len(names)
        self._zero = None
        self._one = None
        cls._interned[names] = self
        return self

    @classmethod
    def of(cls, *names: str) -> "ParamField":
        return cls(names)

    def __repr__(self):
        return f"ParamField{self.names!r}"

    def __reduce__(self):
        return (ParamField, (self.names,))

    # constructors -------------------------------------------------------

    def poly(self, terms: Mapping) -> "ParamPolynomial":
        return ParamPolynomial(self, {e: Fraction(c) for e, c in terms.items() if c})

    def constant_poly(self, c: Rational) -> "ParamPolynomial":
        c = Fraction(c)
        return ParamPolynomial(self, {self.zero_exp: c} if c else {})

    def gen_poly(self, name: str) -> "ParamPolynomial":
        exp = [0] * self.nvars
        exp[self.index[name]] = 1
        return ParamPolynomial(self, {tuple(exp): Fraction(1)})

    def zero(self) -> "ParamFraction":
        if self._zero is None:
            self._zero = ParamFraction._raw(self.constant_poly(0), self.constant_poly(1))
        return self._zero

    def one(self) -> "ParamFraction":
        if self._one is None:
            self._one = ParamFraction._raw(self.constant_poly(1), self.constant_poly(1))
        return self._one

    def gen(self, name: str) -> "ParamFraction":
        return ParamFraction._raw(self.gen_poly(name), self.one().den)

    def gens(self) -> tuple:
        return tuple(self.gen(n) for n in self.names)

    def __call__(self, value) -> "ParamFraction":
        """Coerce an int, Fraction, parameter name, polynomial or fraction into this field."""
        if isinstance(value, ParamFraction):
            return value if value.field is self else value.embed(self)
        if isinstance(value, ParamPolynomial):
            value = value if value.field is self else value.embed(self)
            return ParamFraction._raw(value, self.one().den)
        if isinstance(value, str):
            return self.gen(value)
        if isinstance(value, (int, Fraction)):
            if value == 0:
                return self.zero()
            if value == 1:
                return self.one()
            return ParamFraction._raw(self.constant_poly(value), self.one().den)
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    # field bookkeeping ----------------------------------------------------

    def union(self, other: "ParamField | Iterable[str]") -> "ParamField":
        extra = other.names if isinstance(other, ParamField) else tuple(other)
        return ParamField(self.names + tuple(n for n in extra if n not in self.index))

    def without(self, names: Iterable[str]) -> "ParamField":
        drop = set(names)
        return ParamField(n for n in self.names if n not in drop)

    def sympy_ring(self):
        return _ring_for(self.names)


@lru_cache(maxsize=None)
def _ring_for(names):
    return _sympy_ring(",".join(names), QQ)[0]


def _grlex_key(exp):
    return (sum(exp), exp)


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class ParamPolynomial:
    """Sparse polynomial over Q in the parameters of ``field``."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: ParamField, terms: dict):
        # callers guarantee: Fraction coefficients, no zeros, exponent tuples of length nvars
        self.field = field
        self.terms = terms
        self._hash = None

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and self.field.zero_exp in t)

    def is_one(self) -> bool:
        t = self.terms
        return len(t) == 1 and t.get(self.field.zero_exp) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(self.field.zero_exp, Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, ParamPolynomial):
            return self.field is other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.names, frozenset(self.terms.items())))
        return self._hash

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "ParamPolynomial"):
        if other.field is not self.field:
            raise ParameterMismatch(f"{self.field.names} vs {other.field.names}")

    def __neg__(self):
        return ParamPolynomial(self.field, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, ParamPolynomial):
            other = self.field.constant_poly(other)
        self._check(other)
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
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return ParamPolynomial(self.field, out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ParamPolynomial):
            other = self.field.constant_poly(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Rational) -> "ParamPolynomial":
        c = Fraction(c)
        if not c:
            return ParamPolynomial(self.field, {})
        if c == 1:
            return self
        return ParamPolynomial(self.field, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, ParamPolynomial):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return ParamPolynomial(self.field, {})
        if len(a) == 1 and self.field.zero_exp in a:
            return other.scale(a[self.field.zero_exp])
        if len(b) == 1 and self.field.zero_exp in b:
            return self.scale(b[self.field.zero_exp])
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return ParamPolynomial(self.field, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = self.field.constant_poly(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # structure ----------------------------------------------------------------

    def leading(self):
        """Leading (exponent, coefficient) under graded lex order."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def monic(self) -> "ParamPolynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.leading()[1])

    def occurring(self) -> set:
        names = self.field.names
        return {names[i] for e in self.terms for i, k in enumerate(e) if k}

    def embed(self, field: ParamField) -> "ParamPolynomial":
        """Re-express over ``field``, which must contain every parameter that occurs."""
        if field is self.field:
            return self
        pos = []
        for i, n in enumerate(self.field.names):
            j = field.index.get(n)
            if j is None and any(e[i] for e in self.terms):
                raise ParameterMismatch(f"parameter {n!r} missing from {field.names}")
            pos.append(j)
        out = {}
        for e, c in self.terms.items():
            new = [0] * field.nvars
            for i, k in enumerate(e):
                if k:
                    new[pos[i]] = k
            out[tuple(new)] = c
        return ParamPolynomial(field, out)

    def evaluate(self, assignment: Mapping[str, Rational], field: ParamField | None = None) -> "ParamPolynomial":
        """Substitute rational values for some parameters; result lives over ``field``
        (default: this field minus the assigned names)."""
        names = self.field.names
        if field is None:
            field = self.field.without(n for n in names if n in assignment)
        vals = [Fraction(assignment[n]) if n in assignment else None for n in names]
        keep = [field.index.get(n) if vals[i] is None else None for i, n in enumerate(names)]
        out: dict = {}
        for e, c in self.terms.items():
            new = [0] * field.nvars
            for i, k in enumerate(e):
                if not k:
                    continue
                if vals[i] is None:
                    if keep[i] is None:
                        raise ParameterMismatch(f"parameter {names[i]!r} missing from {field.names}")
                    new[keep[i]] = k
                else:
                    c *= vals[i] ** k
            if c:
                key = tuple(new)
                s = out.get(key)
                out[key] = c if s is None else s + c
        return ParamPolynomial(field, {e: c for e, c in out.items() if c})

    # sympy bridge -----------------------------------------------------------

    def to_sympy(self):
        R = self.field.sympy_ring()
        return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in self.terms.items()})

    @classmethod
    def from_sympy(cls, field: ParamField, f) -> "ParamPolynomial":
        return cls(field, {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in f.items() if c})

    # text -------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.field.names
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(_format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_format_rational(c)}*{mono}")
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __repr__(self):
        return f"ParamPolynomial({self})"


def poly_gcd(x: ParamPolynomial, y: ParamPolynomial) -> ParamPolynomial:
    """Greatest common divisor, normalized to leading coefficient 1 (gcd(0, 0) = 0)."""
    x._check(y)
    if not y.terms:
        return x.monic()
    if not x.terms:
        return y.monic()
    if x.is_constant() or y.is_constant():
        return x.field.constant_poly(1)
    if x == y:
        return x.monic()
    g = x.to_sympy().gcd(y.to_sympy())
    return ParamPolynomial.from_sympy(x.field, g).monic()


def _cofactors(x: ParamPolynomial, y: ParamPolynomial):
    """(gcd, x/gcd, y/gcd) with gcd monic in graded lex order; fast paths for constants."""
    field = x.field
    if x.is_constant() or y.is_constant():
        return field.constant_poly(1), x, y
    if x == y:
        lc = x.leading()[1]
        one = field.constant_poly(lc)
        return x.scale(1 / lc), one, one
    g, cx, cy = x.to_sympy().cofactors(y.to_sympy())
    g = ParamPolynomial.from_sympy(field, g)
    cx = ParamPolynomial.from_sympy(field, cx)
    cy = ParamPolynomial.from_sympy(field, cy)
    lc = g.leading()[1]
    return g.scale(1 / lc), cx.scale(lc), cy.scale(lc)


class ParamFraction:
    """Element of Q(params) in canonical form ``num/den``."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, num: ParamPolynomial, den: ParamPolynomial | None = None):
        field = num.field
        if den is None:
            den = field.constant_poly(1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        _, n, d = _cofactors(num, den)
        self._set(n, d)

    def _set(self, num, den):
        self.field = num.field
        self._hash = None
        if not num.terms:
            self.num = num
            self.den = self.field.constant_poly(1)
            return
        lc = den.leading()[1]
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: ParamPolynomial, den: ParamPolynomial) -> "ParamFraction":
        self = object.__new__(cls)
        self._set(num, den)
        return self

    # predicates ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __eq__(self, other):
        if isinstance(other, ParamFraction):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_one() and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # arithmetic ---------------------------------------------------------------

    def _coerce(self, other) -> "ParamFraction":
        if isinstance(other, ParamFraction):
            if other.field is not self.field:
                raise ParameterMismatch(f"{self.field.names} vs {other.field.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __neg__(self):
        return ParamFraction._raw(-self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        d1, d2 = self.den, other.den
        if d1.is_one() and d2.is_one():
            return ParamFraction._raw(self.num + other.num, d1)
        if d1 == d2:
            return ParamFraction(self.num + other.num, d1)
        return ParamFraction(self.num * d2 + other.num * d1, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num.terms or not other.num.terms:
            return self.field.zero()
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1.is_one() and d2.is_one():
            return ParamFraction._raw(n1 * n2, d1)
        _, n1, d2 = _cofactors(n1, d2)
        _, n2, d1 = _cofactors(n2, d1)
        return ParamFraction._raw(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "ParamFraction":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero")
        return ParamFraction._raw(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return ParamFraction._raw(self.num ** k, self.den ** k)

    # field changes ----------------------------------------------------------

    def embed(self, field: ParamField) -> "ParamFraction":
        if field is self.field:
            return self
        return ParamFraction._raw(self.num.embed(field), self.den.embed(field))

    def occurring(self) -> set:
        return self.num.occurring() | self.den.occurring()

    def substitute(self, assignment: Mapping[str, Rational], field: ParamField | None = None) -> "ParamFraction":
        """Partially specialize; raises DenominatorVanishes if the denominator becomes 0."""
        if field is None:
            field = self.field.without(n for n in self.field.names if n in assignment)
        num = self.num.evaluate(assignment, field)
        den = self.den.evaluate(assignment, field)
        if den.is_zero():
            raise DenominatorVanishes(f"denominator {self.den} vanishes at {dict(assignment)}")
        return ParamFraction(num, den)

    # text -------------------------------------------------------------------

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        num, den = str(self.num), str(self.den)
        if len(self.num.terms) > 1 or num.startswith("-"):
            num = f"({num})"
        if not (len(self.den.terms) == 1 and den.isidentifier()):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"ParamFraction({self})"


def frac_arith(op: str, x: ParamFraction, y: ParamFraction | None = None) -> ParamFraction:
    """Dispatch ``add``, ``sub``, ``mul`` or ``neg``."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown operation {op!r}")


def frac_inv(x: ParamFraction) -> ParamFraction:
    return x.inverse()


def specialize(x: ParamFraction, assignment: Mapping[str, Rational]) -> Fraction:
    """Evaluate exactly at a rational point covering every occurring parameter."""
    missing = x.occurring() - set(assignment)
    if missing:
        raise KeyError(f"no value for parameters {sorted(missing)}")
    full = {n: assignment.get(n, 0) for n in x.field.names}
    return x.substitute(full, ParamField()).constant_value()
