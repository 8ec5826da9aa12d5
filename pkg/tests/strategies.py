"""Hypothesis strategies and sympy oracles shared by the test modules."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from confalg.formalpoly import FormalPolynomial
from confalg.freemod import Element
from confalg.paramfield import ParamField, ParamFraction

F = ParamField.of("p", "a")
SYM = sympy.symbols("p a")
D_, X_, Y_, Z_ = sympy.symbols("D x y z")

small = st.integers(-4, 4)
exps = st.tuples(st.integers(0, 2), st.integers(0, 2))


@st.composite
def param_polys(draw, nonzero=False):
    terms = draw(st.dictionaries(exps, small.filter(bool), max_size=4, min_size=1 if nonzero else 0))
    return F.poly(terms)


@st.composite
def fractions(draw, nonzero=False):
    num = draw(param_polys(nonzero=nonzero))
    den = draw(param_polys(nonzero=True))
    return ParamFraction(num, den)


def poly_to_sympy(poly):
    return sum(
        (sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*(s**k for s, k in zip(SYM, e))) for e, c in poly.terms.items()),
        sympy.Integer(0),
    )


def frac_to_sympy(x: ParamFraction):
    return poly_to_sympy(x.num) / poly_to_sympy(x.den)


def sympy_equal(a, b) -> bool:
    return sympy.cancel(sympy.together(a - b)) == 0


# formal polynomials in D, x, y with coefficients in F
fexps = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1), st.just(0))


@st.composite
def coefficients(draw):
    # mostly polynomial coefficients keep the oracle fast; a few fractions
    if draw(st.integers(0, 4)) == 0:
        return draw(fractions(nonzero=True))
    return ParamFraction(draw(param_polys(nonzero=True)))


@st.composite
def formal_polys(draw, max_terms=4, exponents=fexps):
    terms = draw(st.dictionaries(exponents, coefficients(), max_size=max_terms))
    return FormalPolynomial.from_terms(F, terms)


def formal_to_sympy(f: FormalPolynomial):
    out = sympy.Integer(0)
    for e, c in f.terms.items():
        out += frac_to_sympy(c) * D_ ** e[0] * X_ ** e[1] * Y_ ** e[2] * Z_ ** e[3]
    return out


@st.composite
def d_polys(draw, max_terms=3):
    """Polynomials in ∂ alone, coefficients in F."""
    terms = draw(st.dictionaries(st.integers(0, 2).map(lambda k: (k, 0, 0, 0)), coefficients(), max_size=max_terms))
    return FormalPolynomial.from_terms(F, terms)


def elements(names, field=F):
    @st.composite
    def build(draw):
        coeffs = draw(st.dictionaries(st.sampled_from(list(names)), d_polys(), max_size=len(names)))
        return Element(field, coeffs)

    return build()


def rational(n, d=1):
    return Fraction(n, d)
