"""Independent reference computations built on sympy.

Nothing here touches the package's Groebner engine; results are turned
back into package polynomials only for comparison.
"""

from fractions import Fraction
from itertools import product

import sympy as sp

from derived_blowups.polyring import Poly


def symbols(variables):
    return sp.symbols(" ".join(variables), seq=True)


def to_sympy(p):
    gens = symbols(p.vars)
    expr = sp.Integer(0)
    for e, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for g, k in zip(gens, e):
            term *= g ** k
        expr += term
    return expr


def from_sympy(expr, variables):
    gens = symbols(variables)
    P = sp.Poly(sp.expand(expr), *gens, domain="QQ")
    terms = {}
    for e, c in P.terms():
        terms[tuple(e)] = Fraction(int(c.p), int(c.q))
    return Poly(tuple(variables), terms)


def monic(p):
    if not p:
        return p
    lc = p.leading_coefficient()
    return Poly(p.vars, {e: c / lc for e, c in p.terms.items()})


def reduced_basis(polys, variables):
    """Reduced degrevlex basis as a set of monic package polynomials."""
    gens = symbols(variables)
    exprs = [to_sympy(p) for p in polys if p]
    if not exprs:
        return set()
    G = sp.groebner(exprs, *gens, order="grevlex", domain="QQ")
    return {monic(from_sympy(g.as_expr(), variables)) for g in G.polys}


def in_ideal(p, polys, variables):
    gens = symbols(variables)
    exprs = [to_sympy(q) for q in polys if q]
    if not exprs:
        return not p
    G = sp.groebner(exprs, *gens, order="grevlex", domain="QQ")
    return G.contains(to_sympy(p))


def colon_strictly_larger(ideal_gens, g, variables):
    """Is ``(I : g)`` strictly larger than ``I``?  Uses ``I cap (g)`` by
    elimination of an auxiliary variable."""
    gens = symbols(variables)
    t = sp.Symbol("t_aux")
    I = [to_sympy(q) for q in ideal_gens if q]
    ge = to_sympy(g)
    G = sp.groebner([t * q for q in I] + [(1 - t) * ge], t, *gens, order="lex", domain="QQ")
    inter = [h for h in G.exprs if t not in h.free_symbols]
    base = sp.groebner(I, *gens, order="grevlex", domain="QQ") if I else None
    for h in inter:
        q, r = sp.div(h, ge, *gens)
        if r != 0:
            raise AssertionError("intersection element not divisible by g")
        if base is None or not base.contains(q):
            return True
    return False


# -- degree-bounded linear algebra over Q ----------------------------------


def monomials(nvars, max_deg, exact=None):
    out = []
    for e in product(range(max_deg + 1), repeat=nvars):
        d = sum(e)
        if (exact is None and d <= max_deg) or d == exact:
            out.append(e)
    return out


def standard(e, node):
    """Is the monomial a basis element of the ring (node: kill x*y)?"""
    return not (node and e[0] > 0 and e[1] > 0)


def syzygy_space(f, degree, node=False):
    """Basis of all syzygies of ``f`` whose coefficients have degree at
    most ``degree``, over Q[x,y] or Q[x,y]/(xy), by plain linear algebra.

    Coefficients range over standard monomials only, so each basis vector
    is a tuple of package polynomials in normal form.
    """
    variables = f[0].vars
    nv = len(variables)
    coeff_monos = [e for e in monomials(nv, degree) if standard(e, node)]
    unknowns = [(i, m) for i in range(len(f)) for m in coeff_monos]
    rows = {}
    for col, (i, m) in enumerate(unknowns):
        for e, c in f[i].terms.items():
            tot = tuple(a + b for a, b in zip(m, e))
            if not standard(tot, node):
                continue
            rows.setdefault(tot, {})[col] = c
    M = sp.zeros(max(len(rows), 1), len(unknowns))
    for r, (_, entries) in enumerate(sorted(rows.items())):
        for col, c in entries.items():
            M[r, col] = sp.Rational(c.numerator, c.denominator)
    out = []
    for v in M.nullspace():
        comps = [dict() for _ in f]
        for col, (i, m) in enumerate(unknowns):
            if v[col] != 0:
                q = sp.Rational(v[col])
                comps[i][m] = Fraction(int(q.p), int(q.q))
        out.append(tuple(Poly(variables, c) for c in comps))
    return out
