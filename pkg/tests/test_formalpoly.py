import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confalg.formalpoly import (
    LAMBDA,
    MU,
    NEG_INF,
    PARTIAL,
    FormalPolynomial,
    coefficient_extract,
    fp_arith,
    fp_degree,
    kth_coefficient,
    substitute_linear,
)
from confalg.paramfield import ParamField
from strategies import D_, F, X_, Y_, formal_polys, formal_to_sympy, sympy_equal

P = ParamField.of("p", "a", "b")
p, a, b = P("p"), P("a"), P("b")
D = FormalPolynomial.var(P, PARTIAL)
x = FormalPolynomial.var(P, LAMBDA)
y = FormalPolynomial.var(P, MU)


def test_basic_arithmetic():
    assert fp_arith("add", D, x) == D + x
    assert fp_arith("mul", D + x, D - x) == D * D - x * x
    assert fp_arith("scale", D.scale(p) + x.scale(2 * p), 1 / p) == D + x.scale(2)


def test_substitution_examples():
    f = D.scale(p) + x.scale(2 * p)
    assert substitute_linear(f, LAMBDA, -x - D) == -(D.scale(p)) - x.scale(2 * p)
    assert substitute_linear(x * x, LAMBDA, x + y) == x * x + (x * y).scale(2) + y * y
    g = (D + y) * (D + x.scale(a) + b)
    assert substitute_linear(g, MU, -x - D) == -(x * (D + x.scale(a) + b))


def test_substitution_rejects_nonlinear_images():
    with pytest.raises(ValueError):
        substitute_linear(x, LAMBDA, x * x)


def test_coefficient_examples():
    f = D.scale(p) + x.scale(2 * p)
    assert coefficient_extract(f, LAMBDA, 1) == FormalPolynomial.const(P, 2 * p)
    assert coefficient_extract(f, LAMBDA, 2).is_zero()
    assert coefficient_extract((D + x) ** 2, LAMBDA, 0) == D * D


def test_kth_coefficient_uses_factorial():
    assert kth_coefficient((D + x) ** 3, LAMBDA, 2) == D.scale(6)


def test_degree_examples():
    assert fp_degree(D.scale(p) + x.scale(2 * p), LAMBDA) == 1
    assert fp_degree(FormalPolynomial.zero(P), LAMBDA) == NEG_INF
    assert fp_degree((D + x) ** 3, PARTIAL) == 3


def test_divmod_partial():
    q, r = (D * D + D.scale(b)).divmod_partial(D + b)
    assert q == D and r.is_zero()
    q, r = D.divmod_partial(D + b)
    assert r == FormalPolynomial.const(P, -b)


def test_rendering_is_parseable_order():
    assert str((D + x.scale(2)).scale(p)) == "p*D + 2*p*x"


@settings(max_examples=40, deadline=None)
@given(formal_polys(), formal_polys())
def test_substitution_against_sympy(f, g):
    img = -FormalPolynomial.var(F, LAMBDA) - FormalPolynomial.var(F, PARTIAL)
    lhs = formal_to_sympy(substitute_linear(f * g, LAMBDA, img))
    rhs = (formal_to_sympy(f) * formal_to_sympy(g)).subs(X_, -X_ - D_, simultaneous=True)
    assert sympy_equal(lhs.expand(), rhs.expand())


@settings(max_examples=40, deadline=None)
@given(formal_polys(exponents=st.tuples(st.integers(0, 2), st.just(0), st.integers(0, 2), st.just(0))))
def test_rename_mu_to_lambda(f):
    assert sympy_equal(formal_to_sympy(f.rename(MU, LAMBDA)), formal_to_sympy(f).subs(Y_, X_))
