"""Exact polynomials over the Gaussian rationals.

Everything symbolic in the package lives in this ring: holomorphic parts of
the generators, their derivatives, minors of the anti-holomorphic Jacobian,
curve equations.  Monomial order is graded-lex with ``z1 > z2 > ...``;
normalized polynomials have leading coefficient 1.

Only the bivariate case gets exact elimination (gcd, resultants, square-free
parts); arithmetic, derivatives, division and evaluation work for any number
of variables.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _dense as D
from .gaussian import GaussianRational, as_gaussian

__all__ = [
    "GaussianRational",
    "HoloPoly",
    "PolyError",
    "PolyParseError",
    "poly_arith",
    "wirtinger_derivative",
    "evaluate",
    "gcd_bivariate",
    "square_free_part",
    "resultant_eliminate",
    "divides",
    "parse_poly",
    "coprime_base",
    "content_split",
    "gcd_many",
]


class PolyError(ValueError):
    """Structural misuse: variable-count mismatch, zero input where forbidden, ..."""


class PolyParseError(PolyError):
    pass


def _glex_key(exp):
    return (sum(exp), exp)


class HoloPoly:
    """Immutable polynomial ``sum c_e z^e`` with Gaussian-rational ``c_e``."""

    __slots__ = ("num_vars", "terms", "_hash", "_horner")

    def __init__(self, num_vars: int, terms: Mapping[tuple, object] | None = None):
        if num_vars < 1:
            raise PolyError("num_vars must be positive")
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars or any(e < 0 for e in exp):
                raise PolyError(f"bad exponent {exp} for {num_vars} variables")
            c = as_gaussian(c)
            if c:
                clean[exp] = clean.get(exp, GaussianRational(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.num_vars = num_vars
        self.terms = clean
        self._hash = None
        self._horner = None

    # -- constructors ------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "HoloPoly":
        return cls(n)

    @classmethod
    def const(cls, n: int, c) -> "HoloPoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def one(cls, n: int) -> "HoloPoly":
        return cls.const(n, 1)

    @classmethod
    def var(cls, n: int, i: int) -> "HoloPoly":
        if not 0 <= i < n:
            raise PolyError(f"variable index {i} out of range for {n} variables")
        exp = [0] * n
        exp[i] = 1
        return cls(n, {tuple(exp): 1})

    @classmethod
    def parse(cls, text: str, num_vars: int = 2) -> "HoloPoly":
        return parse_poly(text, num_vars)

    # -- basic queries -----------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def leading_term(self):
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        exp = max(self.terms, key=_glex_key)
        return exp, self.terms[exp]

    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * self.num_vars, GaussianRational(0))

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def normalized(self) -> "HoloPoly":
        """Monic in graded-lex order (zero stays zero)."""
        if not self.terms:
            return self
        _, lc = self.leading_term()
        if lc == 1:
            return self
        inv = GaussianRational(1) / lc
        return HoloPoly(self.num_vars, {e: c * inv for e, c in self.terms.items()})

    def conjugate_coeffs(self) -> "HoloPoly":
        return HoloPoly(self.num_vars, {e: c.conjugate() for e, c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _glex_key(t[0]), reverse=True)

    # -- arithmetic --------------------------------------------------
    def _coerce(self, other) -> "HoloPoly":
        if isinstance(other, HoloPoly):
            if other.num_vars != self.num_vars:
                raise PolyError(f"variable-count mismatch: {self.num_vars} vs {other.num_vars}")
            return other
        return HoloPoly.const(self.num_vars, as_gaussian(other))

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, GaussianRational(0)) + c
        return HoloPoly(self.num_vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return HoloPoly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, HoloPoly):
            c = as_gaussian(other)
            return HoloPoly(self.num_vars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, GaussianRational(0)) + c1 * c2
        return HoloPoly(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative powers are not polynomials")
        result, base = HoloPoly.one(self.num_vars), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, HoloPoly):
            return self.num_vars == other.num_vars and self.terms == other.terms
        try:
            return self == HoloPoly.const(self.num_vars, as_gaussian(other))
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self.terms.items())))
        return self._hash

    def derivative(self, var: int) -> "HoloPoly":
        if not 0 <= var < self.num_vars:
            raise PolyError(f"variable index {var} out of range")
        out = {}
        for e, c in self.terms.items():
            if e[var]:
                e2 = list(e)
                e2[var] -= 1
                out[tuple(e2)] = c * e[var]
        return HoloPoly(self.num_vars, out)

    def divmod(self, divisor: "HoloPoly"):
        """Division by one polynomial via graded-lex leading-term reduction.

        A single polynomial is a Groebner basis of the ideal it generates, so
        the remainder is zero exactly when ``divisor`` divides ``self``.
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lexp, lc = divisor.leading_term()
        inv = GaussianRational(1) / lc
        p = dict(self.terms)
        q: dict = {}
        r: dict = {}
        while p:
            exp = max(p, key=_glex_key)
            c = p[exp]
            if all(a >= b for a, b in zip(exp, lexp)):
                shift = tuple(a - b for a, b in zip(exp, lexp))
                f = c * inv
                q[shift] = q.get(shift, GaussianRational(0)) + f
                for e2, c2 in divisor.terms.items():
                    e = tuple(a + b for a, b in zip(e2, shift))
                    v = p.get(e, GaussianRational(0)) - f * c2
                    if v:
                        p[e] = v
                    else:
                        p.pop(e, None)
            else:
                r[exp] = c
                del p[exp]
        return HoloPoly(self.num_vars, q), HoloPoly(self.num_vars, r)

    def exact_div(self, divisor: "HoloPoly") -> "HoloPoly":
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    # -- numerics ----------------------------------------------------
    def _compile(self):
        # nested Horner table: {e0: {e1: ... complex}}
        if self._horner is None:
            self._horner = _horner_table(
                {e: complex(c) for e, c in self.terms.items()}, self.num_vars)
        return self._horner

    def __call__(self, *point):
        if len(point) == 1 and np.ndim(point[0]) >= 1 and self.num_vars > 1:
            point = tuple(np.moveaxis(np.asarray(point[0]), -1, 0))
        if len(point) != self.num_vars:
            raise PolyError(f"expected {self.num_vars} coordinates, got {len(point)}")
        return _horner_eval(self._compile(), point, 0)

    def eval_exact(self, point: Sequence) -> GaussianRational:
        """Exact value at a point with Gaussian-rational coordinates."""
        if len(point) != self.num_vars:
            raise PolyError(f"expected {self.num_vars} coordinates, got {len(point)}")
        pt = [as_gaussian(x) for x in point]
        total = GaussianRational(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * x ** k
            total = total + v
        return total

    def evaluate_many(self, points) -> np.ndarray:
        """Evaluate at rows of an ``(m, num_vars)`` array."""
        pts = np.asarray(points, dtype=complex)
        if pts.ndim != 2 or pts.shape[1] != self.num_vars:
            raise PolyError(f"points must have shape (m, {self.num_vars})")
        val = _horner_eval(self._compile(), tuple(pts.T), 0)
        return np.broadcast_to(np.asarray(val, dtype=complex), (pts.shape[0],)).copy()

    def coeffs_in(self, var: int) -> dict[int, "HoloPoly"]:
        """Coefficients as a polynomial in ``z_var`` (each free of ``z_var``)."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            k = e2[var]
            e2[var] = 0
            out.setdefault(k, {})[tuple(e2)] = c
        return {k: HoloPoly(self.num_vars, t) for k, t in out.items()}

    def numeric_univariate(self, var: int, others: Mapping[int, complex]) -> np.ndarray:
        """Complex coefficients in ``z_var`` (highest first) after fixing the other variables."""
        d = self.degree_in(var)
        out = np.zeros(max(d, 0) + 1, dtype=complex)
        for e, c in self.terms.items():
            v = complex(c)
            for i, k in enumerate(e):
                if i != var and k:
                    v *= complex(others[i]) ** k
            out[d - e[var]] += v
        return out

    def lowered(self):
        """(exponent array, complex coefficient array): the explicit double-precision lowering."""
        items = self.sorted_terms()
        exps = np.array([e for e, _ in items], dtype=int).reshape(-1, self.num_vars)
        coeffs = np.array([complex(c) for _, c in items], dtype=complex)
        return exps, coeffs

    # -- text --------------------------------------------------------
    def to_text(self) -> str:
        """Canonical text: ``(re,im) z1^a z2^b`` terms joined by `` + ``."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = " ".join(f"z{i + 1}^{k}" for i, k in enumerate(e))
            parts.append(f"({_qtext(c.re)},{_qtext(c.im)}) {mono}")
        return " + ".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                out.append(str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{c}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    def __repr__(self):
        return f"HoloPoly({self.num_vars}, {self})"


def _qtext(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _horner_table(terms: dict, n: int):
    if n == 0:
        return sum(terms.values(), 0j)
    groups: dict[int, dict] = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    return {k: _horner_table(v, n - 1) for k, v in groups.items()}


def _horner_eval(table, point, i):
    if not isinstance(table, dict):
        return table
    if not table:
        return 0j
    x = point[i]
    top = max(table)
    acc = 0j
    for k in range(top, -1, -1):
        acc = acc * x
        if k in table:
            acc = acc + _horner_eval(table[k], point, i + 1)
    return acc


# -- public operations -------------------------------------------------

def poly_arith(a: HoloPoly, b: HoloPoly, op: str) -> HoloPoly:
    if a.num_vars != b.num_vars:
        raise PolyError(f"variable-count mismatch: {a.num_vars} vs {b.num_vars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise PolyError(f"unknown op {op!r}")


def wirtinger_derivative(p: HoloPoly, var: int) -> HoloPoly:
    """``∂p/∂z_var``.  For holomorphic p this is also the Wirtinger ∂ derivative."""
    return p.derivative(var)


def evaluate(p: HoloPoly, point: Sequence[complex]) -> complex:
    if len(point) != p.num_vars:
        raise PolyError(f"expected {p.num_vars} coordinates, got {len(point)}")
    return complex(p(*[complex(x) for x in point]))


def divides(p: HoloPoly, b: HoloPoly) -> bool:
    if p.is_zero():
        raise PolyError("divides: divisor must be nonzero")
    return b.divmod(p)[1].is_zero()


# -- dense conversions (bivariate elimination) -------------------------

def _to_uni(p: HoloPoly, var: int):
    out = [GaussianRational(0)] * (p.degree_in(var) + 1)
    for e, c in p.terms.items():
        if any(k for i, k in enumerate(e) if i != var):
            raise PolyError("polynomial is not univariate in the requested variable")
        out[e[var]] = c
    return D.trim(out)


def _from_uni(coeffs, var: int, n: int) -> HoloPoly:
    terms = {}
    for k, c in enumerate(coeffs):
        e = [0] * n
        e[var] = k
        terms[tuple(e)] = c
    return HoloPoly(n, terms)


def _to_bi(p: HoloPoly, main: int):
    other = 1 - main
    rows: list[list] = [[] for _ in range(p.degree_in(main) + 1)]
    for e, c in p.terms.items():
        row = rows[e[main]]
        k = e[other]
        if len(row) <= k:
            row.extend([GaussianRational(0)] * (k + 1 - len(row)))
        row[k] = c
    return D.bi_trim(rows)


def _from_bi(rows, main: int) -> HoloPoly:
    other = 1 - main
    terms = {}
    for i, row in enumerate(rows):
        for k, c in enumerate(row):
            e = [0, 0]
            e[main] = i
            e[other] = k
            terms[tuple(e)] = c
    return HoloPoly(2, terms)


def _require_bivariate(*polys):
    for p in polys:
        if p.num_vars != 2:
            raise PolyError("exact elimination is implemented for two variables only")


def _gcd_uni_any(p: HoloPoly, q: HoloPoly) -> HoloPoly:
    """gcd when both inputs involve at most one and the same variable."""
    n = p.num_vars
    used = p.variables() | q.variables()
    var = min(used) if used else 0
    return _from_uni(D.gcd(_to_uni(p, var), _to_uni(q, var)), var, n)


def _gcd(p: HoloPoly, q: HoloPoly) -> HoloPoly:
    if p.is_zero() and q.is_zero():
        raise PolyError("gcd of two zero polynomials is undefined")
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    if p.num_vars != q.num_vars:
        raise PolyError("variable-count mismatch")
    if len(p.variables() | q.variables()) <= 1:
        return _gcd_uni_any(p, q)
    _require_bivariate(p, q)
    main = 0
    fp, fq = _to_bi(p, main), _to_bi(q, main)
    cp, pp = D.bi_primitive(fp)
    cq, pq = D.bi_primitive(fq)
    c = D.gcd(cp, cq)
    if len(pp) <= 1 or len(pq) <= 1:
        g = [c]
    else:
        last = D.subresultant_prs(pp, pq)[-1]
        if len(last) <= 1:
            g = [c]
        else:
            _, prim = D.bi_primitive(last)
            g = D.bi_scale(prim, c)
    return _from_bi(g, main).normalized()


def gcd_bivariate(p: HoloPoly, q: HoloPoly) -> HoloPoly:
    """Monic gcd over Q(i) via the subresultant PRS in z1 with content extraction."""
    _require_bivariate(p, q)
    return _gcd(p, q)


def gcd_many(polys: Iterable[HoloPoly]) -> HoloPoly | None:
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = p.normalized() if g is None else _gcd(g, p)
        if g.is_constant():
            break
    return g


def square_free_part(p: HoloPoly) -> HoloPoly:
    """Product of the distinct irreducible factors of p, made monic.

    In characteristic zero an irreducible factor of multiplicity e divides
    every partial derivative exactly e - 1 times, so p / gcd(p, ∂p) removes
    all repeated factors.
    """
    if p.is_zero():
        raise PolyError("square_free_part of the zero polynomial")
    if p.num_vars > 2:
        raise PolyError("square_free_part supports at most two variables")
    if p.is_constant():
        return HoloPoly.one(p.num_vars)
    g = p
    for v in range(p.num_vars):
        dv = p.derivative(v)
        if not dv.is_zero():
            g = _gcd(g, dv)
    return p.exact_div(g).normalized()


def resultant_eliminate(p: HoloPoly, q: HoloPoly, var: int) -> HoloPoly:
    """Sylvester resultant of p and q with respect to ``z_var``.

    Rows of p come first in the Sylvester matrix, so ``res(p, q)`` equals
    ``lc(p)^deg(q) * prod q(roots of p)``.  A polynomial constant in ``var``
    gives the usual power convention: ``res(c, q) = c^deg(q)``.
    """
    _require_bivariate(p, q)
    if p.is_zero() or q.is_zero():
        return HoloPoly.zero(2)
    fp, fq = _to_bi(p, var), _to_bi(q, var)
    m, n = len(fp) - 1, len(fq) - 1
    size = m + n
    if size == 0:
        return HoloPoly.one(2)
    rows = []
    for i in range(n):
        row = [[] for _ in range(size)]
        for k, c in enumerate(reversed(fp)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [[] for _ in range(size)]
        for k, c in enumerate(reversed(fq)):
            row[i + k] = c
        rows.append(row)
    det = D.det_bareiss(rows)
    return _from_uni(det, 1 - var, 2)


def coprime_base(polys: Iterable[HoloPoly]) -> list[HoloPoly]:
    """Refine a list into pairwise coprime monic non-constant factors.

    Each input is a product of powers of the outputs.  This is gcd-based
    splitting only; irreducible factorization over Q(i) is not attempted.
    """
    work = [p.normalized() for p in polys if not p.is_zero() and not p.is_constant()]
    base: list[HoloPoly] = []
    while work:
        a = work.pop()
        for i, b in enumerate(base):
            g = _gcd(a, b)
            if g.is_constant():
                continue
            base.pop(i)
            for part in (g, b.exact_div(g), a.exact_div(g)):
                if not part.is_constant():
                    work.append(part.normalized())
            break
        else:
            base.append(a)
    out = set()
    for b in base:
        out.add(square_free_part(b) if b.num_vars <= 2 else b)
    return sorted(out, key=lambda p: p.to_text())


def content_split(p: HoloPoly) -> list[HoloPoly]:
    """Split a bivariate p into its z1-only content, z2-only content and the rest."""
    _require_bivariate(p)
    parts = []
    rest = p
    for main in (0, 1):
        rows = _to_bi(rest, main)
        c = D.bi_content(rows)
        if len(c) > 1:
            cpoly = _from_uni(c, 1 - main, 2)
            parts.append(cpoly.normalized())
            rest = rest.exact_div(cpoly)
    # pull out pure monomial factors z1^a z2^b
    for v in (0, 1):
        low = min(e[v] for e in rest.terms)
        if low:
            x = HoloPoly.var(2, v)
            parts.append(x)
            rest = rest.exact_div(x ** low)
    if not rest.is_constant():
        parts.append(rest.normalized())
    return parts


# -- text parsing ------------------------------------------------------

_NUM = r"[+-]?\s*\d+(?:\s*/\s*\d+)?"
_TOKEN = re.compile(
    r"\s*(?:(?P<pair>\(\s*(?P<re>" + _NUM + r")\s*,\s*(?P<im>" + _NUM + r")\s*\))"
    r"|(?P<var>z(?P<idx>\d+)(?:\s*\^\s*(?P<exp>\d+))?)"
    r"|(?P<num>\d+(?:\s*/\s*\d+)?)"
    r"|(?P<imag>i)\b"
    r"|(?P<op>[+\-*]))"
)


def parse_poly(text: str, num_vars: int = 2) -> HoloPoly:
    """Parse canonical text or the integer shorthand (``2 z1^2 - z2 + 1/2``).

    Coefficients may be ``(re,im)`` pairs, rationals ``p/q``, or ``i``;
    factors inside a term are separated by spaces or ``*``.
    """
    src = text.strip()
    if not src:
        raise PolyParseError("empty polynomial")
    pos = 0
    result = HoloPoly.zero(num_vars)
    sign = 1
    coeff = GaussianRational(1)
    exp = [0] * num_vars
    term_open = False
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            if src[pos:].strip() == "":
                break
            raise PolyParseError(f"unexpected input at column {pos + 1}: {src[pos:pos + 12]!r}")
        pos = m.end()
        if m.group("op") in ("+", "-"):
            if term_open:
                result = result + HoloPoly(num_vars, {tuple(exp): coeff * sign})
                sign, coeff, exp, term_open = 1, GaussianRational(1), [0] * num_vars, False
            if m.group("op") == "-":
                sign = -sign
            continue
        if m.group("op") == "*":
            continue
        term_open = True
        if m.group("pair"):
            c = GaussianRational(Fraction(m.group("re").replace(" ", "")),
                                 Fraction(m.group("im").replace(" ", "")))
            coeff = coeff * c
        elif m.group("num"):
            coeff = coeff * Fraction(m.group("num").replace(" ", ""))
        elif m.group("imag"):
            coeff = coeff * GaussianRational(0, 1)
        elif m.group("var"):
            idx = int(m.group("idx")) - 1
            if not 0 <= idx < num_vars:
                raise PolyParseError(f"variable z{idx + 1} not valid with {num_vars} variables")
            exp[idx] += int(m.group("exp") or 1)
    if not term_open:
        if src.strip() in ("0",):
            return result
        raise PolyParseError("dangling operator at end of polynomial")
    return result + HoloPoly(num_vars, {tuple(exp): coeff * sign})
