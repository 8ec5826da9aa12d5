"""Conformal modules: presentations, the module axiom, and the built-in families.

A module is a free K[∂]-module of finite rank with a λ-action table
(generator, basis vector) ↦ vector with coefficients in ∂ and λ.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (
    EVEN,
    ODD,
    AlgebraPresentation,
    UnknownGenerator,
    sesquilinear,
    specialize_algebra,
)
from .formalpoly import LAMBDA, MU, NU, FormalPolynomial, Var
from .freemod import Element
from .library import S_p, lin, sh
from .paramfield import ParamField
from .report import CheckItem, Report

GENERIC_P = "generic"
P_IS_MINUS_ONE = "pminus1"
MODES = (GENERIC_P, P_IS_MINUS_ONE)


@dataclass(frozen=True)
class BasisVector:
    name: str
    parity: int


class ModulePresentation:
    """Basis vectors with parities and a λ-action table over an algebra."""

    def __init__(
        self,
        algebra: AlgebraPresentation,
        vectors: Sequence[BasisVector],
        table: Mapping[tuple, Element],
        name: str = "module",
        mode: str = GENERIC_P,
        field: ParamField | None = None,
    ):
        field = field or algebra.field
        if not set(algebra.field.names) <= set(field.names):
            field = algebra.field.union(field)
        self.field = field
        self.algebra = algebra.embed(field)
        self.vectors = tuple(vectors)
        self.name = name
        self.mode = mode
        self.by_name = {v.name: v for v in self.vectors}
        if len(self.by_name) != len(self.vectors):
            raise ValueError("duplicate basis vector")
        clash = set(self.by_name) & set(self.algebra.by_name)
        if clash:
            raise ValueError(f"names used for both generators and vectors: {sorted(clash)}")
        self.table = {}
        for (g, v), val in table.items():
            if g not in self.algebra.by_name:
                raise UnknownGenerator(g)
            if v not in self.by_name:
                raise UnknownGenerator(v)
            val = val.embed(field)
            par = (self.algebra.parity(g) + self.by_name[v].parity) % 2
            for s, f in val.coeffs.items():
                if s not in self.by_name:
                    raise UnknownGenerator(s)
                if self.by_name[s].parity != par:
                    raise ValueError(f"{g} λ {v} has a term on {s} of the wrong parity")
                if f.involves(MU) or f.involves(NU):
                    raise ValueError(f"{g} λ {v} may only involve ∂ and λ")
            if val:
                self.table[(g, v)] = val

    @property
    def names(self) -> list:
        return [v.name for v in self.vectors]

    def parity(self, name: str) -> int:
        try:
            return self.by_name[name].parity
        except KeyError:
            raise UnknownGenerator(name) from None

    def vec(self, name: str, coeff=1) -> Element:
        if name not in self.by_name:
            raise UnknownGenerator(name)
        return Element.basis(self.field, name, coeff)

    def lookup(self, g: str, v: str) -> Element:
        if g not in self.algebra.by_name:
            raise UnknownGenerator(g)
        if v not in self.by_name:
            raise UnknownGenerator(v)
        val = self.table.get((g, v))
        return val if val is not None else Element(self.field)

    def act(self, a: Element, v: Element, out_var: Var = LAMBDA) -> Element:
        for s in a.coeffs:
            if s not in self.algebra.by_name:
                raise UnknownGenerator(s)
        for s in v.coeffs:
            if s not in self.by_name:
                raise UnknownGenerator(s)
        return sesquilinear(a, v, self.lookup, out_var)

    def with_action(self, g: str, v: str, value: Element) -> "ModulePresentation":
        table = dict(self.table)
        table[(g, v)] = value
        return ModulePresentation(self.algebra, self.vectors, table, self.name, self.mode, self.field)

    def renamed(self, name: str) -> "ModulePresentation":
        return ModulePresentation(self.algebra, self.vectors, self.table, name, self.mode, self.field)

    def __eq__(self, other):
        if not isinstance(other, ModulePresentation):
            return NotImplemented
        return (
            self.field is other.field
            and self.vectors == other.vectors
            and self.algebra == other.algebra
            and self.table == other.table
        )

    __hash__ = None

    def __repr__(self):
        return f"ModulePresentation({self.name}, rank {len(self.vectors)})"


def act(mod: ModulePresentation, a: Element, v: Element, out_var: Var = LAMBDA) -> Element:
    return mod.act(a, v, out_var)


def module_residual(mod: ModulePresentation, a: str, b: str, v: str) -> Element:
    """a_λ(b_μ v) − (−1)^{|a||b|} b_μ(a_λ v) − [a_λ b]_{λ+μ} v."""
    alg, f = mod.algebra, mod.field
    A, Bg, V = alg.gen(a), alg.gen(b), mod.vec(v)
    first = mod.act(A, mod.act(Bg, V, MU), LAMBDA)
    second = mod.act(Bg, mod.act(A, V, LAMBDA), MU)
    if alg.parity(a) and alg.parity(b):
        second = -second
    third = mod.act(alg.bracket(A, Bg, LAMBDA), V, NU)
    third = third.substitute(NU, FormalPolynomial.var(f, LAMBDA) + FormalPolynomial.var(f, MU))
    return first - second - third


def check_module(mod: ModulePresentation) -> Report:
    items = []
    n = 0
    gens = mod.algebra.names
    for a in gens:
        for b in gens:
            for v in mod.names:
                n += 1
                r = module_residual(mod, a, b, v)
                if r:
                    items.append(CheckItem("module", (a, b, v), r.format(mod.names), False, r))
    return Report(items, {"module": n})


def vanishing_threshold(mod: ModulePresentation) -> int:
    """Largest grade of a generator acting nontrivially (0 if none does)."""
    grades = [mod.algebra.by_name[g].grade for (g, _), val in mod.table.items() if val]
    return max(grades, default=0)


def parity_shift(mod: ModulePresentation) -> ModulePresentation:
    """Π(M): same vectors and table, parities flipped."""
    vectors = [BasisVector(v.name, 1 - v.parity) for v in mod.vectors]
    name = mod.name[3:-1] if mod.name.startswith("Pi(") and mod.name.endswith(")") else f"Pi({mod.name})"
    return ModulePresentation(mod.algebra, vectors, mod.table, name, mod.mode, mod.field)


def specialize_module(mod: ModulePresentation, assignment: Mapping[str, object]) -> ModulePresentation:
    assignment = {k: Fraction(v) for k, v in assignment.items()}
    field = mod.field.without(assignment)
    alg = specialize_algebra(mod.algebra, assignment)
    table = {k: v.substitute_params(assignment, field) for k, v in mod.table.items()}
    return ModulePresentation(alg, mod.vectors, table, mod.name, mod.mode, field)


def pullback(
    mod: ModulePresentation, algebra: AlgebraPresentation, images: Mapping[str, Element], name: str | None = None
) -> ModulePresentation:
    """Restrict along a map algebra → mod.algebra given on generators."""
    field = mod.field.union(algebra.field)
    src = mod if field is mod.field else ModulePresentation(mod.algebra, mod.vectors, mod.table, mod.name, mod.mode, field)
    table = {}
    for g in algebra.names:
        img = images[g].embed(field)
        for v in mod.names:
            val = src.act(img, src.vec(v), LAMBDA)
            if val:
                table[(g, v)] = val
    used = set(algebra.field.names)
    for val in table.values():
        for f in val.coeffs.values():
            used |= f.occurring_params()
    small = ParamField(n for n in field.names if n in used)
    table = {k: v.substitute_params({}, small) for k, v in table.items()}
    return ModulePresentation(algebra.embed(small), mod.vectors, table, name or mod.name, mod.mode, small)


# built-in families -----------------------------------------------------------------


def _setup(mode, n, p, symbols, explicit):
    """Common parameter handling for the families.

    ``symbols`` are parameter names; ``explicit`` maps a name to a value
    (None for symbolic). Returns (algebra, field, values).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == P_IS_MINUS_ONE:
        if p not in (None, -1):
            raise ValueError("P_IS_MINUS_ONE mode fixes p = -1")
        p = -1
    for name in ("c", "cp"):
        if name in explicit and mode == GENERIC_P and explicit[name] not in (None, 0):
            raise ValueError(f"{name} must be 0 unless p = -1 (use mode {P_IS_MINUS_ONE})")
    alg = S_p(n)
    if p is not None:
        alg = specialize_algebra(alg, {"p": p})
    names = list(alg.field.names)
    for s in symbols:
        if explicit.get(s) is None and not (s in ("c", "cp") and mode == GENERIC_P):
            names.append(s)
    field = ParamField(names)
    values = {}
    for s in symbols:
        v = explicit.get(s)
        if v is None and s in ("c", "cp") and mode == GENERIC_P:
            v = 0
        values[s] = field(s) if v is None else field(v)
    values["p"] = field("p") if p is None else field(p)
    if any(values.get(k) for k in ("c", "cp")) and n < 1:
        raise ValueError("an L_1 action needs grade bound n >= 1")
    return alg.embed(field), field, values


def _rank1_actions(field, v, pv, a, b, c, d):
    """L_0 v = p(∂+aλ+b)v, L_1 v = c v, W_0 v = d v."""
    out = {
        ("L_0", v): Element.basis(field, v, lin(field, pv, pv * a, pv * b)),
        ("W_0", v): Element.basis(field, v, lin(field, 0, 0, d)),
    }
    if c:
        out[("L_1", v)] = Element.basis(field, v, lin(field, 0, 0, c))
    return out


def rank1(a=None, b=None, c=None, d=None, *, n: int = 1, mode: str = GENERIC_P, p=None) -> ModulePresentation:
    """V_{a,b,c,d} = K[∂]v, with G acting trivially."""
    alg, f, val = _setup(mode, n, p, ("a", "b", "c", "d"), dict(a=a, b=b, c=c, d=d))
    table = _rank1_actions(f, "v", val["p"], val["a"], val["b"], val["c"], val["d"])
    return ModulePresentation(alg, [BasisVector("v", EVEN)], table, "V(a,b,c,d)", mode, f)


def pair(a=None, b=None, c=None, d=None, ap=None, bp=None, cp=None, dp=None, *, n: int = 1, mode: str = GENERIC_P, p=None):
    """V_{a,b,c,d,a′,b′,c′,d′}: two rank-one modules side by side, no odd action."""
    explicit = dict(a=a, b=b, c=c, d=d, ap=ap, bp=bp, cp=cp, dp=dp)
    alg, f, val = _setup(mode, n, p, tuple(explicit), explicit)
    table = _rank1_actions(f, "v0", val["p"], val["a"], val["b"], val["c"], val["d"])
    table.update(_rank1_actions(f, "v1", val["p"], val["ap"], val["bp"], val["cp"], val["dp"]))
    vectors = [BasisVector("v0", EVEN), BasisVector("v1", ODD)]
    return ModulePresentation(alg, vectors, table, "V(a,b,c,d,a',b',c',d')", mode, f)


def sigma_module(a=None, b=None, c=None, d=None, sigma=None, *, n: int = 1, mode: str = GENERIC_P, p=None):
    """V_{a,b,c,d,σ}: G_0 v0 = σ v1, the shifted rank-one data on v1."""
    alg, f, val = _setup(mode, n, p, ("a", "b", "c", "d", "sigma"), dict(a=a, b=b, c=c, d=d, sigma=sigma))
    a, b, c, d, s, pv = (val[k] for k in ("a", "b", "c", "d", "sigma", "p"))
    table = _rank1_actions(f, "v0", pv, a, b, c, d)
    table.update(_rank1_actions(f, "v1", pv, a + 1, b, c, d + 1))
    table[("G_0", "v0")] = Element.basis(f, "v1", lin(f, 0, 0, s))
    vectors = [BasisVector("v0", EVEN), BasisVector("v1", ODD)]
    return ModulePresentation(alg, vectors, table, "V(a,b,c,d,sigma)", mode, f)


def absigma(a=None, b=None, sigma=None, *, n: int = 1, mode: str = GENERIC_P, p=None):
    """V_{a,b,σ}: G_0 v0 = σ(∂+aλ+b)v1, W_0 eigenvalues a−1 and a."""
    alg, f, val = _setup(mode, n, p, ("a", "b", "sigma"), dict(a=a, b=b, sigma=sigma))
    a, b, s, pv = (val[k] for k in ("a", "b", "sigma", "p"))
    table = _rank1_actions(f, "v0", pv, a, b, 0, a - 1)
    table.update(_rank1_actions(f, "v1", pv, a, b, 0, a))
    table[("G_0", "v0")] = Element.basis(f, "v1", lin(f, s, s * a, s * b))
    vectors = [BasisVector("v0", EVEN), BasisVector("v1", ODD)]
    return ModulePresentation(alg, vectors, table, "V(a,b,sigma)", mode, f)


FAMILIES = {"rank1": rank1, "pair": pair, "sigma": sigma_module, "absigma": absigma}


def builtin_module(name: str, *args, **kwargs) -> ModulePresentation:
    """Families over 𝒮(p): rank1, pair, sigma, absigma.

    Variants over the quotients: ``bar-*`` over 𝔰(n), n > 1 (pass n);
    ``dbar-*`` over 𝔰(1); ``tbar-*`` over 𝔰𝔥. The rank-one variants use the
    family name ``rank1``.
    """
    prefix, _, fam = name.partition("-")
    if not fam:
        return FAMILIES[name](*args, **kwargs)
    if fam not in FAMILIES:
        raise ValueError(f"unknown family {fam!r}")
    if prefix == "bar":
        return bar_module(fam, *args, **kwargs)
    if prefix == "dbar":
        return dbar_module(fam, *args, **kwargs)
    if prefix == "tbar":
        return tbar_module(fam, *args, **kwargs)
    raise ValueError(f"unknown module builtin {name!r}")


def bar_module(family: str, *args, n: int = 2, **kwargs) -> ModulePresentation:
    """V̄ family over 𝔰(n) = 𝒮(−n)_[n], n > 1 (c = 0)."""
    if n < 2:
        raise ValueError("the V̄ families are stated for n > 1")
    mod = FAMILIES[family](*args, n=n, mode=GENERIC_P, p=-n, **kwargs)
    mod.algebra.name = f"s({n})"
    return mod.renamed("bar " + mod.name)


def dbar_module(family: str, *args, **kwargs) -> ModulePresentation:
    """V̿ family over 𝔰(1) = 𝒮(−1)_[1], with L_1 acting by c."""
    mod = FAMILIES[family](*args, n=1, mode=P_IS_MINUS_ONE, **kwargs)
    mod.algebra.name = "s(1)"
    return mod.renamed("dbar " + mod.name)


def tbar_module(family: str, *args, **kwargs) -> ModulePresentation:
    """V⃛ family over 𝔰𝔥, pulled back along L = (1/p)L_0, W = W_0, G = G_0."""
    mod = FAMILIES[family](*args, n=0, mode=GENERIC_P, **kwargs)
    f = mod.field
    images = {
        "L": Element.basis(f, "L_0", f("p").inverse()),
        "W": Element.basis(f, "W_0"),
        "G": Element.basis(f, "G_0"),
    }
    return pullback(mod, sh(), images, "tbar " + mod.name)


__all__ = [
    "BasisVector",
    "ModulePresentation",
    "GENERIC_P",
    "P_IS_MINUS_ONE",
    "act",
    "check_module",
    "module_residual",
    "vanishing_threshold",
    "parity_shift",
    "specialize_module",
    "pullback",
    "rank1",
    "pair",
    "sigma_module",
    "absigma",
    "builtin_module",
    "bar_module",
    "dbar_module",
    "tbar_module",
]
