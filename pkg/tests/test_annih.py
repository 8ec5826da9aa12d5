import pytest

from confalg.annih import (
    CHI,
    PHI,
    PSI,
    PARTIAL_GEN,
    AnnElement,
    AnnGenerator,
    ann_bracket,
    ann_generators,
    build_ptn,
    check_ann_module,
    check_closed_forms,
    check_lie_super,
    check_partial_central,
    closed_form,
    ideal_check,
    induce_ann_action,
    k_actions,
    phi_sets,
)
from confalg.algebra import specialize_algebra
from confalg.freemod import Element
from confalg.library import GS, S_p
from confalg.representation import absigma, rank1, sigma_module



def L(i, m):
    return AnnGenerator("L", i, m)


def W(i, m):
    return AnnGenerator("W", i, m)


def G(i, m):
    return AnnGenerator("G", i, m)


def test_l_w_bracket():
    alg = S_p(3)
    f = alg.field
    got = ann_bracket(alg, L(1, 0), W(2, 1))
    assert got == AnnElement.gen(f, W(3, 1), 1 - f("p"))


def test_w_w_and_g_g_vanish():
    alg = S_p(2)
    assert not ann_bracket(alg, W(0, 1), W(1, 2))
    assert not ann_bracket(alg, G(0, 1), G(1, 0))


def test_partial_on_g():
    alg = S_p(1)
    assert ann_bracket(alg, PARTIAL_GEN, G(0, 0)) == AnnElement.gen(alg.field, G(0, -1), -1)


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        ann_bracket(S_p(1), L(2, 0), W(0, 0))
    with pytest.raises(ValueError):
        ann_bracket(S_p(1), W(0, -1), W(0, 0))


def test_super_skew():
    alg = S_p(2)
    gens = ann_generators(alg, 1, 2)
    for x in gens:
        for y in gens:
            sign = 1 if x.parity and y.parity else -1
            assert ann_bracket(alg, x, y) == ann_bracket(alg, y, x).scale(sign)


def test_closed_forms_small():
    assert check_closed_forms(S_p(2), 1, 2).ok
    assert check_closed_forms(specialize_algebra(GS(2), {"Delta": 2}), 1, 1).ok


def test_closed_form_negative_control():
    report = check_closed_forms(S_p(2), 1, 1, shifts={"L": 1, "G": 1, "W": 1, "H": 0})
    assert not report.ok


def test_closed_form_gh():
    f = specialize_algebra(GS(2), {"Delta": 2}).field
    p = f("p")
    got = closed_form(f, G(0, 1), AnnGenerator("H", 1, 0))
    want = AnnElement.gen(f, L(1, 1), 2) + AnnElement.gen(f, W(1, 1), 4)
    assert got == want
    assert closed_form(f, G(1, 0), AnnGenerator("H", 0, 1)) == (
        AnnElement.gen(f, L(1, 1), 2) + AnnElement.gen(f, W(1, 1), -2 * (1 + p))
    )


def test_partial_minus_l0_is_central():
    assert check_partial_central(S_p(4), 2, 3).ok


def test_ptn_dimension():
    for t, N in [(0, 0), (1, 2), (2, 2)]:
        assert build_ptn(t, N, 1).dim == 3 * (t + 1) * (N + 1)


def test_ptn_examples():
    q = build_ptn(1, 1, 1)
    assert not q.table[(L(0, 0), L(1, 1))]
    for p in (1, 2):
        q = build_ptn(2, 2, p)
        for i0 in range(3):
            for m0 in range(3):
                want = AnnElement.gen(q.field, W(i0, m0), -(i0 + p) * m0)
                assert q.table[(L(i0, 0), W(0, m0))] == want


def test_ptn_lie_small():
    assert check_lie_super(build_ptn(1, 1, 1)).ok
    assert check_lie_super(build_ptn(1, 2, -3)).ok


def test_ptn_symbolic_p():
    q = build_ptn(1, 1)
    assert check_lie_super(q).ok
    with pytest.raises(ValueError):
        phi_sets(q)


@pytest.mark.parametrize("p", [1, 2, -3])
@pytest.mark.parametrize("t,N", [(1, 1), (1, 3), (3, 1), (2, 2)])
def test_ideals(p, t, N):
    q = build_ptn(t, N, p)
    for which in (CHI, PSI, PHI):
        assert ideal_check(q, which).ok


def test_chi_11_at_p2():
    assert ideal_check(build_ptn(1, 1, 2), CHI).ok


def test_non_ideal_detected():
    q = build_ptn(2, 2, 1)
    q.subset = lambda which: [W(0, 0)]
    assert not ideal_check(q, "any").ok


def test_phi_sets():
    phi, _ = phi_sets(build_ptn(1, 1, 1))
    assert set(phi) == {(0, 1), (1, 0), (1, 1)}
    _, phi0 = phi_sets(build_ptn(2, 2, 1))
    assert phi0 == [(1, 1), (2, 2)]


def test_zero_p_rejected():
    with pytest.raises(ValueError):
        build_ptn(1, 1, 0)


def test_k_actions_absigma():
    m = absigma(n=1)
    acts = k_actions(m, "G_0", "v0", 3)
    assert [bool(a) for a in acts] == [True, True, False, False]


def test_k_actions_rank1_w0():
    m = rank1(c=0, n=1)
    f = m.field
    acts = k_actions(m, "W_0", "v", 2)
    assert acts[0] == Element.basis(f, "v", f("d"))
    assert not acts[1] and not acts[2]


def test_induced_table_modes():
    m = rank1(c=0, n=0)
    table = induce_ann_action(m, 2)
    assert set(g for g, _ in table) == {L(0, -1), L(0, 0), W(0, 0)}


@pytest.mark.parametrize("build", [lambda: sigma_module(c=0, n=1), lambda: absigma(n=1), lambda: rank1(c=0, n=1)])
def test_ann_module(build):
    assert check_ann_module(build(), 2).ok


def test_ann_module_negative():
    m = absigma(n=1)
    f = m.field
    bad = m.with_action("W_0", "v0", Element.basis(f, "v0", f("a")))
    assert not check_ann_module(bad, 1).ok
