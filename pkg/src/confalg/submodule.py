"""Submodules of free conformal modules: closure, induced structure, isomorphisms."""

from __future__ import annotations

from typing import Mapping, Sequence

from .formalpoly import LAMBDA
from .freemod import Element, NotInvertible, SpanExpressor, SubmoduleBasis, invert, membership
from .representation import BasisVector, ModulePresentation
from .report import CheckItem, Report


class NotClosed(ValueError):
    """The generators do not span a submodule."""


def submodule_basis(mod: ModulePresentation, gens: Sequence[Element]) -> SubmoduleBasis:
    return SubmoduleBasis([g.embed(mod.field) for g in gens], mod.names, mod.field)


def check_submodule_closure(mod: ModulePresentation, gens: Sequence[Element]) -> Report:
    """Every λ-coefficient of g_λ u must reduce to zero, for generators g and basis rows u."""
    basis = submodule_basis(mod, gens)
    items = []
    n = 0
    for g in mod.algebra.names:
        G = mod.algebra.gen(g)
        for i, u in enumerate(basis.elements()):
            val = mod.act(G, u, LAMBDA)
            deg = val.degree(LAMBDA)
            for k in range(int(deg) + 1 if deg != float("-inf") else 0):
                n += 1
                rem = basis.membership(val.coefficient(LAMBDA, k))
                if rem:
                    items.append(CheckItem("closure", (g, f"u{i}", f"x^{k}"), rem.format(mod.names), False, rem))
    return Report(items, {"closure": max(n, 1)})


def _homogeneous_parity(mod: ModulePresentation, x: Element) -> int:
    ps = {mod.parity(s) for s in x.coeffs}
    if len(ps) != 1:
        raise ValueError(f"{x} is not a nonzero parity-homogeneous vector")
    return ps.pop()


def induced_module(
    mod: ModulePresentation, gens: Sequence[Element], names: Sequence[str] | None = None
) -> ModulePresentation:
    """The submodule spanned by ``gens``, presented on the basis ``gens``."""
    gens = [g.embed(mod.field) for g in gens]
    names = list(names) if names is not None else [f"u{i}" for i in range(len(gens))]
    if len(names) != len(gens):
        raise ValueError("one name per generator is required")
    report = check_submodule_closure(mod, gens)
    if not report.ok:
        raise NotClosed(f"not closed: {report.subjects()}")
    expr = SpanExpressor(names, gens, mod.names, mod.field)
    vectors = [BasisVector(nm, _homogeneous_parity(mod, g)) for nm, g in zip(names, gens)]
    table = {}
    for g in mod.algebra.names:
        G = mod.algebra.gen(g)
        for nm, u in zip(names, gens):
            val = expr.express(mod.act(G, u, LAMBDA))
            if val:
                table[(g, nm)] = val
    return ModulePresentation(mod.algebra, vectors, table, f"sub({mod.name})", mod.mode, mod.field)


def check_module_iso(m1: ModulePresentation, m2: ModulePresentation, basis_map: Mapping[str, Element]) -> Report:
    """Check that v ↦ basis_map[v] (m1 vectors to m2 elements) is a module isomorphism."""
    field = m1.field.union(m2.field)
    if m1.algebra.names != m2.algebra.names:
        raise ValueError("modules over different generator sets")
    a1, a2 = m1.algebra.embed(field), m2.algebra.embed(field)
    items = []
    n = 0
    for g in a1.names:
        n += 1
        if a1.parity(g) != a2.parity(g):
            items.append(CheckItem("iso-algebra", (g,), "parity", False))
    images = {v: basis_map[v].embed(field) for v in m1.names}
    for v in m1.vectors:
        n += 1
        img = images[v.name]
        ps = {m2.parity(s) for s in img.coeffs}
        if ps != {v.parity}:
            items.append(CheckItem("iso-parity", (v.name,), img.format(m2.names), False, img))
    try:
        invert(images, m2.names, field)
    except (NotInvertible, ValueError) as exc:
        raise NotInvertible(str(exc)) from None
    n1 = m1 if m1.field is field else ModulePresentation(a1, m1.vectors, m1.table, m1.name, m1.mode, field)
    n2 = m2 if m2.field is field else ModulePresentation(a2, m2.vectors, m2.table, m2.name, m2.mode, field)
    for g in a1.names:
        G = a1.gen(g)
        for v in m1.names:
            n += 1
            lhs = n1.act(G, n1.vec(v), LAMBDA).linear_image(images, field)
            rhs = n2.act(G, images[v], LAMBDA)
            r = lhs - rhs
            if r:
                items.append(CheckItem("iso", (g, v), r.format(m2.names), False, r))
    return Report(items, {"iso": n})


__all__ = [
    "NotClosed",
    "NotInvertible",
    "SubmoduleBasis",
    "membership",
    "submodule_basis",
    "check_submodule_closure",
    "induced_module",
    "check_module_iso",
]
