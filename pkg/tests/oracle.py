"""A small sympy λ-bracket engine, written separately from the package.

Elements are dicts {generator: sympy expression in D and the bracket
variables}. Tables hold one orientation; the other comes from skew-symmetry.
"""

import sympy

D, lam, mu, nu = sympy.symbols("D x y nu")


class SympyConformal:
    def __init__(self, parity, table):
        self.parity = dict(parity)
        self.table = {k: {g: sympy.sympify(c) for g, c in v.items()} for k, v in table.items()}

    def lookup(self, a, b, var):
        if (a, b) in self.table:
            val = self.table[(a, b)]
        elif (b, a) in self.table:
            sign = 1 if self.parity[a] and self.parity[b] else -1
            val = {g: sign * c.subs(lam, -lam - D) for g, c in self.table[(b, a)].items()}
        else:
            val = {}
        if var != lam:
            val = {g: c.subs(lam, var) for g, c in val.items()}
        return val

    def bracket(self, x, y, var):
        """[x_var y] with f(D)a, g(D)b ↦ f(−var) g(D+var) [a_var b]."""
        out = {}
        for a, f in x.items():
            fa = f.subs(D, -var)
            for b, g in y.items():
                gb = g.subs(D, D + var)
                for c, h in self.lookup(a, b, var).items():
                    out[c] = out.get(c, 0) + fa * gb * h
        return clean(out)

    def jacobi(self, a, b, c):
        A, B, C = {a: sympy.Integer(1)}, {b: sympy.Integer(1)}, {c: sympy.Integer(1)}
        lhs = self.bracket(A, self.bracket(B, C, mu), lam)
        mid = self.bracket(self.bracket(A, B, lam), C, nu)
        mid = {g: e.subs(nu, lam + mu) for g, e in mid.items()}
        sign = -1 if self.parity[a] and self.parity[b] else 1
        rhs = self.bracket(B, self.bracket(A, C, lam), mu)
        return clean(sub(sub(lhs, mid), {g: sign * e for g, e in rhs.items()}))


def sub(x, y):
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) - v
    return out


def clean(x):
    out = {}
    for k, v in x.items():
        v = sympy.expand(v)
        if v != 0:
            out[k] = v
    return out


def element_to_sympy(el, params=()):
    """Package Element → {generator: sympy expression} in the same symbols."""
    syms = {n: sympy.Symbol(n) for n in params}
    out = {}
    for g, f in el.coeffs.items():
        expr = sympy.Integer(0)
        for e, c in f.terms.items():
            num = _poly(c.num, syms)
            den = _poly(c.den, syms)
            expr += num / den * D ** e[0] * lam ** e[1] * mu ** e[2] * nu ** e[3]
        out[g] = sympy.expand(expr)
    return clean(out)


def _poly(poly, syms):
    names = poly.field.names
    expr = sympy.Integer(0)
    for e, c in poly.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for n, k in zip(names, e):
            term *= syms.get(n, sympy.Symbol(n)) ** k
        expr += term
    return expr


def s_p_oracle(n, p=sympy.Symbol("p")):
    """Bracket table of the truncated family S(p), written from the defining formulas."""
    parity = {}
    table = {}
    for i in range(n + 1):
        parity[f"L_{i}"] = parity[f"W_{i}"] = 0
        parity[f"G_{i}"] = 1
    for i in range(n + 1):
        for j in range(n + 1 - i):
            k = i + j
            table[(f"L_{i}", f"L_{j}")] = {f"L_{k}": (i + p) * D + (i + j + 2 * p) * lam}
            table[(f"L_{i}", f"W_{j}")] = {f"W_{k}": (i + p) * D + (i + j + p) * lam}
            table[(f"L_{i}", f"G_{j}")] = {f"G_{k}": (i + p) * D + (i + j + 2 * p) * lam}
            table[(f"W_{i}", f"G_{j}")] = {f"G_{k}": 1}
    return SympyConformal(parity, table)
