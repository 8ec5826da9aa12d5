"""Annihilation superalgebras of graded conformal superalgebras.

The symbol X_{i,m} stands for (X_i)_{(m+s)}, where the shift s is 1 for the
families L and G and 0 for W and H. Brackets come from the k-th products:

    [a_(m), b_(n)] = Σ_k C(m, k) (a_(k) b)_(m+n−k),
    (∂^r c)_(N) = (−1)^r N(N−1)…(N−r+1) c_(N−r),
    [∂, a_(n)] = −n a_(n−1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Mapping

from .algebra import AlgebraPresentation, specialize_algebra
from .formalpoly import LAMBDA, PARTIAL, FormalPolynomial
from .freemod import Element
from .library import S_p
from .paramfield import ParamField, ParamFraction
from .report import CheckItem, Report

DEFAULT_SHIFTS = {"L": 1, "G": 1, "W": 0, "H": 0}
PARITIES = {"L": 0, "W": 0, "G": 1, "H": 1, "PARTIAL": 0}


@dataclass(frozen=True, order=True)
class AnnGenerator:
    family: str
    grade: int = 0
    mode: int = 0

    @property
    def parity(self) -> int:
        return PARITIES[self.family]

    @property
    def is_partial(self) -> bool:
        return self.family == "PARTIAL"

    def __str__(self):
        if self.is_partial:
            return "D"
        return f"{self.family}[{self.grade},{self.mode}]"


PARTIAL_GEN = AnnGenerator("PARTIAL", 0, 0)


def _sort_key(g: AnnGenerator):
    order = {"PARTIAL": 0, "L": 1, "W": 2, "G": 3, "H": 4}
    return (order.get(g.family, 9), g.family, g.grade, g.mode)


class AnnElement:
    """Finite linear combination of annihilation generators."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ParamField, coeffs: Mapping[AnnGenerator, ParamFraction] | None = None):
        self.field = field
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def gen(cls, field: ParamField, g: AnnGenerator, c=1) -> "AnnElement":
        return cls(field, {g: field(c)})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, AnnElement):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    __hash__ = None

    def __add__(self, other: "AnnElement") -> "AnnElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return AnnElement(self.field, out)

    def __neg__(self):
        return AnnElement(self.field, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AnnElement":
        c = self.field(c) if not isinstance(c, ParamFraction) else c
        return AnnElement(self.field, {k: v * c for k, v in self.coeffs.items()})

    def restrict(self, keep) -> "AnnElement":
        return AnnElement(self.field, {k: v for k, v in self.coeffs.items() if keep(k)})

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for g in sorted(self.coeffs, key=_sort_key):
            c = self.coeffs[g]
            if c == 1:
                parts.append(str(g))
            elif c == -1:
                parts.append(f"-{g}")
            else:
                parts.append(f"({c})*{g}")
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    __repr__ = __str__


# construction via k-th products ------------------------------------------------------


def _falling(n: int, r: int) -> int:
    out = 1
    for k in range(r):
        out *= n - k
    return out


def _mode_of_product(field, c: Element, N: int, shifts) -> AnnElement:
    """(c)_(N) for c a ∂-polynomial combination of generators."""
    out = {}
    for name, f in c.coeffs.items():
        fam, _, grade = name.partition("_")
        grade = int(grade)
        for e, coef in f.terms.items():
            r = e[PARTIAL]
            factor = (-1) ** r * _falling(N, r)
            if factor == 0:
                continue
            g = AnnGenerator(fam, grade, N - r - shifts[fam])
            out[g] = out.get(g, field.zero()) + coef * factor
    return AnnElement(field, out)


def kth(alg: AlgebraPresentation, a: str, b: str, k: int) -> Element:
    """a_(k) b for generators."""
    return alg.lookup(a, b).coefficient(LAMBDA, k).scale(factorial(k))


def _check_in_algebra(alg: AlgebraPresentation, g: AnnGenerator, shifts):
    if g.is_partial:
        return
    if f"{g.family}_{g.grade}" not in alg.by_name:
        raise ValueError(f"{g} is outside the truncation {alg.name}")
    if g.mode + shifts[g.family] < 0:
        raise ValueError(f"{g} has a mode below the allowed range")


def ann_bracket(alg: AlgebraPresentation, x: AnnGenerator, y: AnnGenerator, shifts: Mapping[str, int] = DEFAULT_SHIFTS) -> AnnElement:
    """The super-bracket of two annihilation generators (∂ included)."""
    field = alg.field
    _check_in_algebra(alg, x, shifts)
    _check_in_algebra(alg, y, shifts)
    if x.is_partial and y.is_partial:
        return AnnElement(field)
    if y.is_partial:
        return -ann_bracket(alg, y, x, shifts)
    if x.is_partial:
        n = y.mode + shifts[y.family]
        return AnnElement.gen(field, AnnGenerator(y.family, y.grade, y.mode - 1), -n)
    a, b = f"{x.family}_{x.grade}", f"{y.family}_{y.grade}"
    m = x.mode + shifts[x.family]
    n = y.mode + shifts[y.family]
    val = alg.lookup(a, b)
    out = AnnElement(field)
    deg = val.degree(LAMBDA)
    if deg == float("-inf"):
        return out
    for k in range(min(m, int(deg)) + 1):
        prod = val.coefficient(LAMBDA, k).scale(factorial(k))
        if prod:
            out = out + _mode_of_product(field, prod, m + n - k, shifts).scale(comb(m, k))
    return out


# closed forms --------------------------------------------------------------------


def closed_form(field: ParamField, x: AnnGenerator, y: AnnGenerator) -> AnnElement:
    """Structure constants of 𝒜(𝒮(p)) and 𝒜(𝒢𝒮(p)) (Δ = 2) in closed form."""
    p = field("p")
    if x.is_partial and y.is_partial:
        return AnnElement(field)
    if y.is_partial:
        return -closed_form(field, y, x)
    if x.is_partial:
        c = -(y.mode + 1) if y.family in ("L", "G") else -y.mode
        return AnnElement.gen(field, AnnGenerator(y.family, y.grade, y.mode - 1), c)
    order = {"L": 0, "W": 1, "G": 2, "H": 3}
    if order[x.family] > order[y.family]:
        sign = 1 if x.parity and y.parity else -1
        return closed_form(field, y, x).scale(sign)
    i, m, j, n = x.grade, x.mode, y.grade, y.mode
    fx, fy = x.family, y.family

    def g(fam):
        return AnnGenerator(fam, i + j, m + n)

    ll = (m + 1) * (j + p) - (n + 1) * (i + p)
    lw = (m + 1) * j - n * (i + p)
    pair = fx + fy
    if pair in ("LL", "LG"):
        return AnnElement.gen(field, g(fy), ll)
    if pair in ("LW", "LH"):
        return AnnElement.gen(field, g(fy), lw)
    if pair == "WG":
        return AnnElement.gen(field, g("G"), 1)
    if pair == "WH":
        return AnnElement.gen(field, g("H"), -1)
    if pair == "GH":
        return AnnElement.gen(field, g("L"), 2) + AnnElement.gen(field, g("W"), 2 * lw)
    return AnnElement(field)


def ann_generators(alg: AlgebraPresentation, t: int, N: int, extended: bool = True, low: Mapping[str, int] | None = None) -> list:
    """Generators with grade ≤ t and modes from the family minimum up to N."""
    low = dict(low or {"L": -1, "G": -1, "W": 0, "H": 0})
    fams = []
    for g in alg.gens:
        if g.family not in fams:
            fams.append(g.family)
    out = [PARTIAL_GEN] if extended else []
    for fam in fams:
        for i in range(t + 1):
            if f"{fam}_{i}" in alg.by_name:
                out.extend(AnnGenerator(fam, i, m) for m in range(low[fam], N + 1))
    return out


def check_closed_forms(alg: AlgebraPresentation, t: int, N: int, shifts: Mapping[str, int] = DEFAULT_SHIFTS) -> Report:
    """Compare the k-th product construction with the closed forms, grades ≤ t, modes ≤ N.

    ``alg`` must be graded to at least 2t so that no product is truncated.
    """
    if alg.bound is not None and alg.bound < 2 * t:
        raise ValueError(f"need the algebra truncated at grade >= {2 * t}")
    gens = ann_generators(alg, t, N)
    items = []
    n = 0
    for x in gens:
        for y in gens:
            n += 1
            got = ann_bracket(alg, x, y, shifts)
            want = closed_form(alg.field, x, y)
            if got != want:
                r = got - want
                items.append(CheckItem("closed-form", (str(x), str(y)), str(r), False, r))
    return Report(items, {"closed-form": n})


def check_partial_central(alg: AlgebraPresentation, t: int, N: int) -> Report:
    """[∂ − (1/p)L_{0,−1}, g] = 0 for all generators within bounds."""
    field = alg.field
    pinv = field("p").inverse()
    items = []
    n = 0
    for g in ann_generators(alg, t, N):
        n += 1
        r = ann_bracket(alg, PARTIAL_GEN, g) - ann_bracket(alg, AnnGenerator("L", 0, -1), g).scale(pinv)
        if r:
            items.append(CheckItem("central", (str(g),), str(r), False, r))
    return Report(items, {"central": n})


# finite quotients p(t, N) ---------------------------------------------------------------


CHI, PSI, PHI = "CHI", "PSI", "PHI"


class PtnQuotient:
    """𝔭(t,N) = 𝒜(𝒮(p))⁺ / I(t,N), killing classes with i > t or m > N."""

    def __init__(self, t: int, N: int, p_value=None):
        if t < 0 or N < 0:
            raise ValueError("t and N must be nonnegative")
        self.t, self.N = t, N
        alg = S_p(t)
        if p_value is not None:
            p_value = Fraction(p_value)
            if p_value == 0:
                raise ValueError("p must be nonzero")
            alg = specialize_algebra(alg, {"p": p_value})
        self.p_value = p_value
        self.algebra = alg
        self.field = alg.field
        self.basis = [
            AnnGenerator(fam, i, m) for fam in ("L", "W", "G") for i in range(t + 1) for m in range(N + 1)
        ]
        self._index = set(self.basis)
        self.table = {}
        for x in self.basis:
            for y in self.basis:
                v = ann_bracket(alg, x, y).restrict(self.keep)
                self.table[(x, y)] = v

    def keep(self, g: AnnGenerator) -> bool:
        return g.grade <= self.t and 0 <= g.mode <= self.N

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bracket(self, x: AnnElement, y: AnnElement) -> AnnElement:
        out = AnnElement(self.field)
        for a, ca in x.coeffs.items():
            for b, cb in y.coeffs.items():
                v = self.table[(a, b)]
                if v:
                    out = out + v.scale(ca * cb)
        return out

    def elem(self, g: AnnGenerator) -> AnnElement:
        return AnnElement.gen(self.field, g)

    def subset(self, which: str) -> list:
        t, N = self.t, self.N
        if which == CHI:
            pred = lambda g: g.grade == t
        elif which == PSI:
            pred = lambda g: g.mode == N
        elif which == PHI:
            pred = lambda g: g.grade == t or g.mode == N
        else:
            raise ValueError(f"unknown subset {which!r}")
        return [g for g in self.basis if pred(g)]


def build_ptn(t: int, N: int, p_value=None) -> PtnQuotient:
    return PtnQuotient(t, N, p_value)


def check_lie_super(q: PtnQuotient) -> Report:
    items = []
    ns = nj = 0
    for x in q.basis:
        for y in q.basis:
            ns += 1
            sign = 1 if x.parity and y.parity else -1
            r = q.table[(x, y)] + q.table[(y, x)].scale(-sign)
            if r:
                items.append(CheckItem("skew", (str(x), str(y)), str(r), False, r))
    for x in q.basis:
        X = q.elem(x)
        for y in q.basis:
            Y = q.elem(y)
            xy = q.table[(x, y)]
            sign = -1 if x.parity and y.parity else 1
            for z in q.basis:
                nj += 1
                Z = q.elem(z)
                lhs = q.bracket(X, q.table[(y, z)])
                r = lhs - q.bracket(xy, Z) - q.bracket(Y, q.table[(x, z)]).scale(sign)
                if r:
                    items.append(CheckItem("jacobi", (str(x), str(y), str(z)), str(r), False, r))
    return Report(items, {"skew": ns, "jacobi": nj})


def ideal_check(q: PtnQuotient, which: str) -> Report:
    """[𝔭(t,N), S] ⊆ span S for S one of χ, ψ, φ."""
    members = set(q.subset(which))
    items = []
    n = 0
    for x in q.basis:
        for s in members:
            n += 1
            v = q.table[(x, s)]
            outside = v.restrict(lambda g: g not in members)
            if outside:
                items.append(CheckItem(f"ideal-{which}", (str(x), str(s)), str(outside), False, outside))
    return Report(items, {f"ideal-{which}": n})


def phi_sets(q: PtnQuotient):
    """(Φ, Φ₀): index pairs of 𝔭(t,N) minus (0,0), and those with i − p·m = 0."""
    phi = [(i, m) for i in range(q.t + 1) for m in range(q.N + 1) if (i, m) != (0, 0)]
    if q.p_value is None:
        raise ValueError("Φ₀ needs a rational value of p")
    phi0 = [(i, m) for i, m in phi if i - q.p_value * m == 0]
    return phi, phi0


# induced action on modules --------------------------------------------------------------


def ann_act(mod, g: AnnGenerator, u: Element, shifts: Mapping[str, int] = DEFAULT_SHIFTS) -> Element:
    """The action of an annihilation generator on a module element."""
    if g.is_partial:
        return u.scale(FormalPolynomial.var(mod.field, PARTIAL))
    name = f"{g.family}_{g.grade}"
    n = g.mode + shifts[g.family]
    if n < 0:
        return Element(mod.field)
    val = mod.act(mod.algebra.gen(name), u, LAMBDA)
    return val.coefficient(LAMBDA, n).scale(factorial(n))


def _ann_elem_act(mod, x: AnnElement, u: Element, shifts) -> Element:
    out = Element(mod.field)
    for g, c in x.coeffs.items():
        if f"{g.family}_{g.grade}" not in mod.algebra.by_name and not g.is_partial:
            continue
        out = out + ann_act(mod, g, u, shifts).scale(c)
    return out


def induce_ann_action(mod, mode_bound: int, shifts: Mapping[str, int] = DEFAULT_SHIFTS) -> dict:
    """(generator, basis vector) ↦ nonzero action, for modes up to ``mode_bound``."""
    table = {}
    for g in ann_generators(mod.algebra, mod.algebra.bound or 0, mode_bound, extended=False):
        for v in mod.names:
            val = ann_act(mod, g, mod.vec(v), shifts)
            if val:
                table[(g, v)] = val
    return table


def check_ann_module(mod, mode_bound: int, shifts: Mapping[str, int] = DEFAULT_SHIFTS) -> Report:
    """[x, y]v = x(yv) − (−1)^{|x||y|} y(xv) on basis vectors, and a_(n)v = 0 past the λ-degree."""
    alg = mod.algebra
    gens = ann_generators(alg, alg.bound or 0, mode_bound)
    items = []
    counts = {"ann-module": 0, "ann-partial": 0, "vanishing": 0}
    acts = {}

    def A(g, u_name):
        key = (g, u_name)
        if key not in acts:
            acts[key] = ann_act(mod, g, mod.vec(u_name), shifts)
        return acts[key]

    for x in gens:
        for y in gens:
            kind = "ann-partial" if x.is_partial or y.is_partial else "ann-module"
            xy = ann_bracket(alg, x, y, shifts)
            sign = -1 if x.parity and y.parity else 1
            for v in mod.names:
                counts[kind] += 1
                lhs = _ann_elem_act(mod, xy, mod.vec(v), shifts)
                r = lhs - ann_act(mod, x, A(y, v), shifts) + ann_act(mod, y, A(x, v), shifts).scale(sign)
                if r:
                    items.append(CheckItem(kind, (str(x), str(y), v), r.format(mod.names), False, r))
    for g in alg.names:
        fam, _, grade = g.partition("_")
        for v in mod.names:
            deg = mod.act(alg.gen(g), mod.vec(v), LAMBDA).degree(LAMBDA)
            start = 0 if deg == float("-inf") else int(deg) + 1
            for n in range(start, start + mode_bound + 2):
                counts["vanishing"] += 1
                ag = AnnGenerator(fam, int(grade), n - shifts[fam])
                val = ann_act(mod, ag, mod.vec(v), shifts)
                if val:
                    items.append(CheckItem("vanishing", (g, v, str(n)), val.format(mod.names), False, val))
    return Report(items, counts)


def k_actions(mod, g: str, v: str, max_k: int) -> list:
    """[g_(k) v for k = 0..max_k]."""
    val = mod.act(mod.algebra.gen(g), mod.vec(v), LAMBDA)
    return [val.coefficient(LAMBDA, k).scale(factorial(k)) for k in range(max_k + 1)]
