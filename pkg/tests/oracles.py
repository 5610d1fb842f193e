"""Independent reference computations shared by the tests (sympy, brute force)."""

import sympy as sp

from plurihull.gaussian import GaussianRational
from plurihull.polyalg import HoloPoly

Z = sp.symbols("z1 z2")


def to_sympy(p: HoloPoly):
    expr = sp.Integer(0)
    for e, c in p.terms.items():
        term = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        for v, k in zip(Z, e):
            term *= v ** k
        expr += term
    return sp.expand(expr)


def from_sympy(expr, n=2) -> HoloPoly:
    poly = sp.Poly(sp.expand(expr), *Z[:n])
    terms = {}
    for mon, c in poly.terms():
        re, im = sp.re(c), sp.im(c)
        terms[tuple(mon)] = GaussianRational(_frac(re), _frac(im))
    return HoloPoly(n, terms)


def _frac(x):
    from fractions import Fraction
    r = sp.Rational(x)
    return Fraction(int(r.p), int(r.q))


def sympy_gcd(p: HoloPoly, q: HoloPoly) -> HoloPoly:
    g = sp.gcd(to_sympy(p), to_sympy(q), *Z, extension=sp.I)
    return from_sympy(g).normalized()


def sympy_resultant(p: HoloPoly, q: HoloPoly, var: int) -> HoloPoly:
    r = sp.resultant(to_sympy(p), to_sympy(q), Z[var])
    return from_sympy(r)
