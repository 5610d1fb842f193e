"""Dense univariate and bivariate helpers used by the elimination routines.

A univariate polynomial is a list of GaussianRational coefficients, lowest
degree first, with no trailing zeros (the zero polynomial is ``[]``).  A
bivariate polynomial in main variable ``x`` is a list of univariate
polynomials in the other variable, again lowest degree first.
"""

from __future__ import annotations

from .gaussian import GaussianRational

ZERO = GaussianRational(0)
ONE = GaussianRational(1)


def trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def deg(p) -> int:
    return len(p) - 1  # -1 for zero


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)])


def neg(a):
    return [-c for c in a]


def sub(a, b):
    return add(a, neg(b))


def mul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return trim(out)


def scale(a, c):
    if not c:
        return []
    return [x * c for x in a]


def divmod_(a, b):
    if not b:
        raise ZeroDivisionError("univariate division by zero polynomial")
    a = list(a)
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = a[shift + i] - c * y
        a = trim(a)
    return trim(q), a


def exact_quo(a, b):
    q, r = divmod_(a, b)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def monic(a):
    if not a:
        return []
    return scale(a, ONE / a[-1])


def gcd(a, b):
    """Monic gcd over the coefficient field (plain Euclid)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def gcd_many(polys):
    g = []
    for p in polys:
        g = gcd(g, p)
        if len(g) == 1:
            break
    return g


def derivative(a):
    return trim([a[i] * i for i in range(1, len(a))])


def to_complex(a):
    return [complex(c) for c in a]


# -- bivariate: list (in x) of univariate lists (in y) ---------------------

def bi_trim(p):
    p = [trim(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def bi_add(a, b):
    n = max(len(a), len(b))
    return bi_trim([add(a[i] if i < len(a) else [], b[i] if i < len(b) else []) for i in range(n)])


def bi_neg(a):
    return [neg(c) for c in a]


def bi_sub(a, b):
    return bi_add(a, bi_neg(b))


def bi_mul(a, b):
    if not a or not b:
        return []
    out = [[] for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = add(out[i + j], mul(x, y))
    return bi_trim(out)


def bi_scale(a, c):
    """Multiply every x-coefficient by the univariate ``c``."""
    return bi_trim([mul(x, c) for x in a])


def bi_exact_quo_scalar(a, c):
    return bi_trim([exact_quo(x, c) for x in a])


def bi_prem(f, g):
    """Pseudo-remainder of f by g in x: lc(g)^(deg f - deg g + 1) f mod g."""
    df, dg = len(f) - 1, len(g) - 1
    if dg < 0:
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    r = [list(c) for c in f]
    if df < dg:
        return bi_trim(r)
    lc = g[-1]
    n = df - dg + 1
    while True:
        dr = len(r) - 1
        if dr < dg:
            break
        lr = r[-1]
        j = dr - dg
        # r = lc * r - lr * x^j * g
        r = [mul(c, lc) for c in r]
        for i, y in enumerate(g):
            r[i + j] = sub(r[i + j], mul(lr, y))
        r = bi_trim(r)
        n -= 1
    lcn = [ONE]
    for _ in range(n):
        lcn = mul(lcn, lc)
    return bi_trim([mul(c, lcn) for c in r])


def bi_content(p):
    return gcd_many(p)


def bi_primitive(p):
    c = bi_content(p)
    if not c:
        return c, []
    return c, bi_exact_quo_scalar(p, c)


def subresultant_prs(f, g):
    """Subresultant PRS of f, g in x over Q(i)[y] (Brown's algorithm).

    Returns the remainder sequence; every division by the scalar ``b`` is
    exact in Q(i)[y], which keeps coefficient growth polynomial.
    """
    n, m = len(f) - 1, len(g) - 1
    if n < m:
        f, g, n, m = g, f, m, n
    if not f:
        return []
    if not g:
        return [f]
    seq = [f, g]
    d = n - m
    b = [ONE] if (d + 1) % 2 == 0 else [-ONE]
    h = bi_scale(bi_prem(f, g), b)
    lc = g[-1]
    c = [ONE]
    for _ in range(d):
        c = mul(c, lc)
    c = neg(c)
    while h:
        k = len(h) - 1
        seq.append(h)
        f, g, m, d = g, h, k, m - k
        cd = [ONE]
        for _ in range(d):
            cd = mul(cd, c)
        b = neg(mul(lc, cd))
        h = bi_exact_quo_scalar(bi_prem(f, g), b)
        lc = g[-1]
        if d > 1:
            num = [ONE]
            for _ in range(d):
                num = mul(num, neg(lc))
            den = [ONE]
            for _ in range(d - 1):
                den = mul(den, c)
            c = exact_quo(num, den)
        else:
            c = neg(lc)
    return seq


def det_bareiss(matrix):
    """Fraction-free determinant of a square matrix with univariate entries."""
    a = [[list(e) for e in row] for row in matrix]
    size = len(a)
    if size == 0:
        return [ONE]
    sign = 1
    prev = [ONE]
    for k in range(size - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, size) if a[i][k]), None)
            if swap is None:
                return []
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = sub(mul(a[i][j], a[k][k]), mul(a[i][k], a[k][j]))
                a[i][j] = exact_quo(num, prev)
            a[i][k] = []
        prev = a[k][k]
    d = a[size - 1][size - 1]
    return neg(d) if sign < 0 else d
