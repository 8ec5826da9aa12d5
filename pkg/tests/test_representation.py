import pytest

from confalg.formalpoly import LAMBDA, PARTIAL, FormalPolynomial
from confalg.freemod import Element
from confalg.library import lin
from confalg.representation import (
    GENERIC_P,
    P_IS_MINUS_ONE,
    ModulePresentation,
    absigma,
    builtin_module,
    check_module,
    pair,
    parity_shift,
    rank1,
    sigma_module,
    specialize_module,
    vanishing_threshold,
)

BUILDERS = [
    lambda mode: rank1(n=2, mode=mode),
    lambda mode: pair(n=2, mode=mode),
    lambda mode: sigma_module(n=2, mode=mode),
    lambda mode: absigma(n=2, mode=mode),
]


def test_g0_on_v0_in_absigma():
    m = absigma(n=1)
    f = m.field
    got = m.act(m.algebra.gen("G_0"), m.vec("v0"))
    assert got == Element.basis(f, "v1", lin(f, f("sigma"), f("sigma") * f("a"), f("sigma") * f("b")))


def test_g0_on_shifted_v0():
    m = absigma(n=1)
    f = m.field
    d = FormalPolynomial.var(f, PARTIAL)
    x = FormalPolynomial.var(f, LAMBDA)
    b, s, a = f("b"), f("sigma"), f("a")
    u = Element.basis(f, "v0", d + b)
    got = m.act(m.algebra.gen("G_0"), u)
    want = Element.basis(f, "v1", (d + x + b) * (d + x.scale(a) + b).scale(s))
    assert got == want


@pytest.mark.parametrize("builder", [sigma_module, absigma, pair])
def test_w1_acts_trivially(builder):
    m = builder(n=2)
    for v in m.names:
        assert not m.act(m.algebra.gen("W_1"), m.vec(v))


def test_sigma_l0_on_v1():
    m = sigma_module(c=0, n=1)
    f = m.field
    p, a, b = f("p"), f("a"), f("b")
    assert m.lookup("L_0", "v1") == Element.basis(f, "v1", lin(f, p, p * (a + 1), p * b))


def test_absigma_w0_on_v0():
    m = absigma(n=1)
    f = m.field
    assert m.lookup("W_0", "v0") == Element.basis(f, "v0", f("a") - 1)


def test_bar_builder_l0():
    m = builtin_module("bar-rank1", n=3)
    f = m.field
    a, b = f("a"), f("b")
    assert m.lookup("L_0", "v") == Element.basis(f, "v", lin(f, -3, -3 * a, -3 * b))


def test_tbar_builder_l():
    m = builtin_module("tbar-rank1")
    f = m.field
    assert m.lookup("L", "v") == Element.basis(f, "v", lin(f, 1, f("a"), f("b")))


@pytest.mark.parametrize("mode", [GENERIC_P, P_IS_MINUS_ONE])
@pytest.mark.parametrize("k", range(len(BUILDERS)))
def test_builders_are_modules(mode, k):
    assert check_module(BUILDERS[k](mode)).ok


@pytest.mark.parametrize("name", ["bar-rank1", "bar-sigma", "dbar-rank1", "dbar-absigma", "tbar-sigma", "tbar-absigma"])
def test_quotient_variants_are_modules(name):
    assert check_module(builtin_module(name)).ok


def test_c_rejected_under_generic_p():
    with pytest.raises(ValueError):
        rank1(c=1, n=1)


def test_corrupted_absigma_is_caught():
    m = absigma(n=1)
    f = m.field
    bad = m.with_action("W_0", "v0", Element.basis(f, "v0", f("a")))
    subjects = check_module(bad).subjects()
    assert ("L_0", "W_0", "v0") in subjects or ("W_0", "G_0", "v0") in subjects


def test_parity_shift_is_involution():
    for build in BUILDERS:
        m = build(GENERIC_P)
        assert parity_shift(parity_shift(m)) == m


def test_parity_shift_of_rank1():
    m = rank1(n=1)
    pm = parity_shift(m)
    assert pm.parity("v") == 1
    assert pm.table == m.table


def test_parity_shift_keeps_residuals():
    m = sigma_module(n=1)
    f = m.field
    bad = m.with_action("W_0", "v1", Element.basis(f, "v1", f("d")))
    r1, r2 = check_module(bad), check_module(parity_shift(bad))
    assert r1.subjects() == r2.subjects()
    assert [i.residual for i in r1.failures()] == [i.residual for i in r2.failures()]


def test_shifted_families_are_modules():
    # symbolic a and d cover the shifted entries Π(V_{a-1,b,0,d-1,σ})
    for build in BUILDERS:
        assert check_module(parity_shift(build(GENERIC_P))).ok


def test_vanishing_threshold():
    assert vanishing_threshold(rank1(c=0, n=4)) == 0
    assert vanishing_threshold(rank1(c=1, n=1, mode=P_IS_MINUS_ONE)) == 1
    m = rank1(n=1)
    empty = ModulePresentation(m.algebra, m.vectors, {}, "zero", m.mode, m.field)
    assert vanishing_threshold(empty) == 0


def test_specialize_module():
    m = specialize_module(absigma(n=1), {"a": 1})
    assert "a" not in m.field.names
    assert check_module(m).ok
