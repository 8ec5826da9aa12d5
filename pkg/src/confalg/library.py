"""Built-in presentations: 𝒮(p) truncations and their relatives.

Generators are declared family by family (L, W, G, H), by grade within a
family; each table stores one orientation per pair in that order.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import (
    EVEN,
    ODD,
    AlgebraPresentation,
    GeneratorSymbol,
    MorphismPresentation,
    restrict_field,
    specialize_algebra,
    transport_structure,
    change_basis,
    truncate,
)
from .formalpoly import PARTIAL, FormalPolynomial
from .freemod import Element
from .paramfield import ParamField

GS_VARIANTS = ("remark", "lemma", "no-L", "no-lambda")


def lin(field: ParamField, dcoef=0, lcoef=0, const=0) -> FormalPolynomial:
    """dcoef·∂ + lcoef·λ + const."""
    return FormalPolynomial.from_terms(
        field, {(1, 0, 0, 0): field(dcoef), (0, 1, 0, 0): field(lcoef), (0, 0, 0, 0): field(const)}
    )


def _gens(families, n):
    return [GeneratorSymbol(f, i, par) for f, par in families for i in range(n + 1)]


def _value(field, name, coeff) -> Element:
    return Element.basis(field, name, coeff)


def _value_param(field, value, default_name):
    """A builder argument: None means the symbolic parameter ``default_name``."""
    return field(default_name if value is None else value)


def _field_for(*names_and_values):
    names = ["p"]
    for name, value in names_and_values:
        if value is None:
            names.append(name)
    return ParamField(names)


def _block_table(field, n, families, lw=None, lg=None, wg=None):
    """The shared skeleton of 𝒮(p)-like tables.

    ``lw``/``lg`` are (alpha, beta) pairs for [L_i λ X_j] =
    ((i+p)(∂+beta) + (i+j+alpha)λ) X_{i+j}; ``wg`` is the W-G constant.
    """
    p = field("p")
    fams = {f for f, _ in families}
    table = {}
    for i in range(n + 1):
        for j in range(n + 1 - i):
            k = i + j
            if i <= j:
                table[(f"L_{i}", f"L_{j}")] = _value(field, f"L_{k}", lin(field, i + p, i + j + 2 * p))
            if "W" in fams:
                alpha, beta = lw
                table[(f"L_{i}", f"W_{j}")] = _value(
                    field, f"W_{k}", lin(field, i + p, i + j + alpha, (i + p) * beta)
                )
            if "G" in fams:
                alpha, beta = lg
                table[(f"L_{i}", f"G_{j}")] = _value(
                    field, f"G_{k}", lin(field, i + p, i + j + alpha, (i + p) * beta)
                )
                if "W" in fams:
                    table[(f"W_{i}", f"G_{j}")] = _value(field, f"G_{k}", lin(field, 0, 0, wg))
    return table


def S_p(n: int) -> AlgebraPresentation:
    """𝒮(p)_[n]: generators L_i, W_i (even), G_i (odd), i ≤ n."""
    field = ParamField(["p"])
    p = field("p")
    fam = [("L", EVEN), ("W", EVEN), ("G", ODD)]
    table = _block_table(field, n, fam, lw=(p, 0), lg=(2 * p, 0), wg=1)
    return AlgebraPresentation(field, _gens(fam, n), table, n, f"S_p({n})")


def s_n(n: int) -> AlgebraPresentation:
    """𝔰(n) = 𝒮(−n)_[n], in the original basis L̄_i, W̄_i, Ḡ_i."""
    if n < 1:
        raise ValueError("s(n) needs n >= 1")
    return specialize_algebra(S_p(n), {"p": -n}).renamed(f"s({n})")


def B(n: int, alpha=None, beta=None) -> AlgebraPresentation:
    """𝔅(α, β, p)_[n], even generators L_i, W_i."""
    field = _field_for(("alpha", alpha), ("beta", beta))
    a = _value_param(field, alpha, "alpha")
    b = _value_param(field, beta, "beta")
    fam = [("L", EVEN), ("W", EVEN)]
    table = _block_table(field, n, fam, lw=(a, b))
    return AlgebraPresentation(field, _gens(fam, n), table, n, f"B({n})")


def S_generic(n: int, alpha1=None, beta1=None, gamma1=None) -> AlgebraPresentation:
    """𝒮(α₁, β₁, γ₁, p)_[n] over 𝔅(p, 0, p)."""
    field = _field_for(("alpha1", alpha1), ("beta1", beta1), ("gamma1", gamma1))
    p = field("p")
    a1 = _value_param(field, alpha1, "alpha1")
    b1 = _value_param(field, beta1, "beta1")
    g1 = _value_param(field, gamma1, "gamma1")
    fam = [("L", EVEN), ("W", EVEN), ("G", ODD)]
    table = _block_table(field, n, fam, lw=(p, 0), lg=(a1, b1), wg=g1)
    return AlgebraPresentation(field, _gens(fam, n), table, n, f"S_generic({n})")


def GS(n: int, delta=None, variant: str = "remark") -> AlgebraPresentation:
    """𝒢𝒮 truncated at grade n, with the G-H bracket scaled by Δ.

    ``variant`` selects the G-H assignment: ``remark`` puts Δ on L and
    Δ((i+p)∂+(i+j+p)λ) on W; ``lemma`` swaps the two; ``no-L`` and
    ``no-lambda`` perturb the remark assignment by dropping the L term or the
    λ part of the W coefficient.
    """
    if variant not in GS_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    field = _field_for(("Delta", delta))
    p = field("p")
    D = _value_param(field, delta, "Delta")
    fam = [("L", EVEN), ("W", EVEN), ("G", ODD), ("H", ODD)]
    table = _block_table(field, n, fam, lw=(p, 0), lg=(2 * p, 0), wg=1)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            k = i + j
            table[(f"L_{i}", f"H_{j}")] = _value(field, f"H_{k}", lin(field, i + p, i + j + p))
            table[(f"W_{i}", f"H_{j}")] = _value(field, f"H_{k}", lin(field, 0, 0, -1))
            poly = lin(field, D * (i + p), D * (i + j + p))
            const = lin(field, 0, 0, D)
            if variant == "remark":
                v = {f"L_{k}": const, f"W_{k}": poly}
            elif variant == "lemma":
                v = {f"L_{k}": poly, f"W_{k}": const}
            elif variant == "no-L":
                v = {f"W_{k}": poly}
            else:
                v = {f"L_{k}": const, f"W_{k}": lin(field, D * (i + p), 0)}
            table[(f"G_{i}", f"H_{j}")] = Element(field, v)
    suffix = "" if variant == "remark" else f", {variant}"
    return AlgebraPresentation(field, _gens(fam, n), table, n, f"GS({n}{suffix})")


def sh() -> AlgebraPresentation:
    """The Heisenberg-Virasoro conformal superalgebra 𝔰𝔥 on L, W, G."""
    field = ParamField()
    gens = [GeneratorSymbol("L", 0, EVEN, False), GeneratorSymbol("W", 0, EVEN, False), GeneratorSymbol("G", 0, ODD, False)]
    table = {
        ("L", "L"): _value(field, "L", lin(field, 1, 2)),
        ("L", "W"): _value(field, "W", lin(field, 1, 1)),
        ("L", "G"): _value(field, "G", lin(field, 1, 2)),
        ("W", "G"): _value(field, "G", lin(field, 0, 0, 1)),
    }
    return AlgebraPresentation(field, gens, table, 0, "sh")


def _sym(name, parity, grade=0):
    return GeneratorSymbol(name, grade, parity, False)


N2_GENS = (_sym("L", EVEN), _sym("J", EVEN), _sym("Gp", ODD), _sym("Gm", ODD))


def sn_images(field: ParamField) -> dict:
    """Images in 𝒮𝒩 ⊂ 𝒢𝒮(p) of the N=2 generators L, J, G⁺, G⁻."""
    p = field("p")
    half_d = FormalPolynomial.from_terms(field, {(1, 0, 0, 0): Fraction(1, 2)})
    return {
        "L": Element(field, {"L_0": FormalPolynomial.const(field, p.inverse()), "W_0": half_d}),
        "J": Element.basis(field, "W_0"),
        "Gp": Element.basis(field, "G_0"),
        "Gm": Element.basis(field, "H_0", p.inverse()),
    }


def N2() -> AlgebraPresentation:
    """The N=2 conformal superalgebra, transported from 𝒮𝒩 = 𝒢𝒮(p)_[0] at Δ=2."""
    sn = GS(0, delta=2)
    alg = transport_structure(sn, N2_GENS, sn_images(sn.field), bound=0, name="N2")
    return restrict_field(alg)


def sh_to_N2() -> MorphismPresentation:
    """Map L + ½∂W ↦ L, W ↦ J, G ↦ G⁺, i.e. L ↦ L − ½∂J."""
    tgt = N2()
    f = tgt.field
    half_d = FormalPolynomial.from_terms(f, {(1, 0, 0, 0): Fraction(-1, 2)})
    images = {
        "L": Element(f, {"L": FormalPolynomial.const(f, 1), "J": half_d}),
        "W": Element.basis(f, "J"),
        "G": Element.basis(f, "Gp"),
    }
    return MorphismPresentation(sh(), tgt, images)


def SN_to_N2(delta=2) -> MorphismPresentation:
    """𝒮𝒩 → N=2 sending (1/p)L₀ + ½∂W₀ ↦ L, W₀ ↦ J, G₀ ↦ G⁺, (1/p)H₀ ↦ G⁻."""
    src = GS(0, delta=delta)
    field = src.field
    tgt = N2().embed(field.union(N2().field))
    field = tgt.field
    p = field("p")
    d = FormalPolynomial.var(field, PARTIAL)
    images = {
        "L_0": Element(field, {"L": FormalPolynomial.const(field, p), "J": d.scale(-p / 2)}),
        "W_0": Element.basis(field, "J"),
        "G_0": Element.basis(field, "Gp"),
        "H_0": Element.basis(field, "Gm", p),
    }
    return MorphismPresentation(src, tgt, images)


def sh_from_S_p() -> AlgebraPresentation:
    """𝒮(p)_[0] rewritten in the basis L = (1/p)L₀, W = W₀, G = G₀."""
    alg = S_p(0)
    f = alg.field
    gens = [_sym("L", EVEN), _sym("W", EVEN), _sym("G", ODD)]
    images = {
        "L": Element.basis(f, "L_0", f("p").inverse()),
        "W": Element.basis(f, "W_0"),
        "G": Element.basis(f, "G_0"),
    }
    return restrict_field(change_basis(alg, gens, images, name="sh"))


# the renamed bases of the two worked examples: name, grade, parity, source, scale
EXAMPLE_BASES = {
    1: [
        ("L", 0, EVEN, "L_0", -1),
        ("M", 1, EVEN, "L_1", 1),
        ("W", 0, EVEN, "W_0", 1),
        ("H", 1, EVEN, "W_1", 1),
        ("G", 0, ODD, "G_0", 1),
        ("I", 1, ODD, "G_1", 1),
    ],
    2: [
        ("L", 0, EVEN, "L_0", Fraction(-1, 2)),
        ("M", 1, EVEN, "L_1", 1),
        ("X", 2, EVEN, "L_2", -1),
        ("W", 0, EVEN, "W_0", 1),
        ("H", 1, EVEN, "W_1", 1),
        ("Y", 2, EVEN, "W_2", -1),
        ("G", 0, ODD, "G_0", 1),
        ("I", 1, ODD, "G_1", 1),
        ("Z", 2, ODD, "G_2", -1),
    ],
}


def s_n_example(n: int) -> AlgebraPresentation:
    """𝔰(1) or 𝔰(2) in the letter basis of the worked examples."""
    rows = EXAMPLE_BASES[n]
    alg = truncate(specialize_algebra(S_p(n + 2), {"p": -n}), n)
    f = alg.field
    gens = [GeneratorSymbol(name, g, par, False) for name, g, par, _, _ in rows]
    images = {name: Element.basis(f, src, c) for name, _, _, src, c in rows}
    return change_basis(alg, gens, images, bound=n, name=f"s({n})")


BUILTINS = {
    "sp": S_p,
    "sn": s_n,
    "sh": sh,
    "B": B,
    "Sgen": S_generic,
    "GS": GS,
    "N2": N2,
    "s1": lambda: s_n_example(1),
    "s2": lambda: s_n_example(2),
}


def builtin(name: str, *args, **kwargs) -> AlgebraPresentation:
    try:
        fn = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}") from None
    return fn(*args, **kwargs)
