"""Pluriharmonic generator tuples and their anti-holomorphic Jacobian.

A generator is ``h = Re(g) + f`` with ``g, f`` holomorphic polynomials.  Since
``∂h/∂z̄_k = (1/2) conj(∂g/∂z_k)``, the whole ∂̄-Jacobian of a tuple is carried
by the holomorphic matrix ``(∂g_j/∂z_k)``; the factor 1/2 and the conjugation
are part of the contract, not of the stored polynomials.  Minors of that
matrix (``B_I``) stand for the minors of the ∂̄-Jacobian via
``minor_I(z) = 2^-k conj(B_I(z))``, so both vanish at the same points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import polyalg as pa
from .polyalg import HoloPoly

__all__ = [
    "PluriharmonicFn",
    "PluriharmonicMap",
    "MinorSystem",
    "FaceLocus",
    "dbar_conjugate_reps",
    "minor_system",
    "wedge_power_check",
    "totally_real_at",
    "face_holomorphy_locus",
    "MINOR_TOL",
]

MINOR_TOL = 1e-8


@dataclass(frozen=True)
class PluriharmonicFn:
    """``h = Re(g) + f``."""

    g: HoloPoly
    f: HoloPoly

    def __post_init__(self):
        if self.g.num_vars != self.f.num_vars:
            raise pa.PolyError("g and f must live in the same ring")

    @classmethod
    def real_part(cls, g: HoloPoly) -> "PluriharmonicFn":
        return cls(g, HoloPoly.zero(g.num_vars))

    @classmethod
    def holomorphic(cls, f: HoloPoly) -> "PluriharmonicFn":
        return cls(HoloPoly.zero(f.num_vars), f)

    @property
    def num_vars(self) -> int:
        return self.g.num_vars

    def is_holomorphic(self) -> bool:
        return self.g.is_constant()

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        return self.g.evaluate_many(pts).real + self.f.evaluate_many(pts)

    def scaled(self, c) -> "PluriharmonicFn":
        return PluriharmonicFn(self.g * c, self.f)

    def describe(self) -> str:
        parts = []
        if not self.g.is_zero():
            parts.append(f"Re({self.g})")
        if not self.f.is_zero():
            parts.append(str(self.f))
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class PluriharmonicMap:
    n: int
    funcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "funcs", tuple(self.funcs))
        if not self.funcs:
            raise pa.PolyError("a pluriharmonic map needs at least one generator")
        for h in self.funcs:
            if h.num_vars != self.n:
                raise pa.PolyError(f"generator in {h.num_vars} variables, map declared n={self.n}")

    @classmethod
    def of(cls, *funcs: PluriharmonicFn) -> "PluriharmonicMap":
        return cls(funcs[0].num_vars, funcs)

    @classmethod
    def from_real_parts(cls, *gs, n: int = 2) -> "PluriharmonicMap":
        """Shorthand: generators ``Re(g)`` given as polynomials or text."""
        polys = [g if isinstance(g, HoloPoly) else pa.parse_poly(g, n) for g in gs]
        return cls(n, [PluriharmonicFn.real_part(p) for p in polys])

    @property
    def N(self) -> int:
        return len(self.funcs)

    def __call__(self, points) -> np.ndarray:
        """Values ``(m, N)`` at rows of an ``(m, n)`` point array."""
        return np.stack([h(points) for h in self.funcs], axis=1)

    def with_funcs(self, funcs) -> "PluriharmonicMap":
        return PluriharmonicMap(self.n, tuple(funcs))

    def describe(self) -> str:
        return "(" + ", ".join(h.describe() for h in self.funcs) + ")"


def dbar_conjugate_reps(hmap: PluriharmonicMap) -> list[list[HoloPoly]]:
    """Matrix of ``∂g_j/∂z_k`` (N rows, n columns).

    ``∂h_j/∂z̄_k(z) = conj(entry[j][k](z)) / 2`` for every z.
    """
    return [[h.g.derivative(k) for k in range(hmap.n)] for h in hmap.funcs]


def _det(rows: list[list[HoloPoly]]) -> HoloPoly:
    # Laplace expansion along the first row; k is at most 4 here
    k = len(rows)
    if k == 1:
        return rows[0][0]
    total = HoloPoly.zero(rows[0][0].num_vars)
    for c in range(k):
        if rows[0][c].is_zero():
            continue
        sub = [r[:c] + r[c + 1:] for r in rows[1:]]
        term = rows[0][c] * _det(sub)
        total = total + term if c % 2 == 0 else total - term
    return total


@dataclass
class MinorSystem:
    """All k×k minors ``B_(I,J)`` of the conjugate-representative matrix.

    Keys are ``(I, J)`` with ``I`` an increasing tuple of generator indices
    and ``J`` an increasing tuple of columns (domain variables).  When
    ``k == n`` there is a single column set and ``ms[I]`` is accepted.
    """

    k: int
    n: int
    N: int
    minors: dict = field(default_factory=dict)

    @property
    def identically_zero(self) -> bool:
        return all(m.is_zero() for m in self.minors.values())

    @property
    def empty(self) -> bool:
        return not self.minors

    def __getitem__(self, key):
        if key in self.minors:
            return self.minors[key]
        if self.k == self.n:
            return self.minors[(tuple(key), tuple(range(self.n)))]
        raise KeyError(key)

    def nonzero(self) -> list[HoloPoly]:
        return [m for _, m in sorted(self.minors.items()) if not m.is_zero()]

    def representatives(self) -> dict:
        """Monic representatives (zero minors stay zero)."""
        return {key: m.normalized() for key, m in self.minors.items()}

    def minor_value(self, key, points) -> np.ndarray:
        """Actual ∂̄-Jacobian minor values ``2^-k conj(B(z))``."""
        vals = self.minors[key].evaluate_many(np.atleast_2d(points))
        return np.conj(vals) / 2 ** self.k

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "identically_zero": self.identically_zero,
            "minors": {
                _key_text(key): m.to_text() for key, m in sorted(self.minors.items())
            },
        }


def _key_text(key) -> str:
    rows, cols = key
    return ",".join(str(i + 1) for i in rows) + "|" + ",".join(str(j + 1) for j in cols)


def minor_system(hmap: PluriharmonicMap, k: int, columns: Sequence[int] | None = None) -> MinorSystem:
    if k < 1:
        raise pa.PolyError("minor order must be positive")
    if k > hmap.n:
        raise pa.PolyError(f"minor order {k} exceeds domain dimension {hmap.n}")
    mat = dbar_conjugate_reps(hmap)
    if columns is None:
        col_sets = list(itertools.combinations(range(hmap.n), k))
    else:
        cols = tuple(sorted(columns))
        if len(cols) != k:
            raise pa.PolyError("declared column subset must have size k")
        col_sets = [cols]
    ms = MinorSystem(k=k, n=hmap.n, N=hmap.N)
    if hmap.N < k:
        return ms
    for rows in itertools.combinations(range(hmap.N), k):
        for cols in col_sets:
            sub = [[mat[r][c] for c in cols] for r in rows]
            ms.minors[(rows, cols)] = _det(sub)
    return ms


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        while seq[i] != i:
            j = seq[i]
            seq[i], seq[j] = seq[j], seq[i]
            sign = -sign
    return sign


def _sort_with_sign(idx):
    if len(set(idx)) < len(idx):
        return None, 0
    order = sorted(range(len(idx)), key=lambda t: idx[t])
    return tuple(idx[t] for t in order), _perm_sign(order)


def wedge_power(hmap: PluriharmonicMap, k: int) -> dict:
    """Brute-force ``(H_1)^k / k!`` in ``Λ^k(dz̄) ⊗ Λ^k(E)``.

    ``H_1 = Σ a_jc dz̄_c ⊗ e_j`` with ``a_jc = ∂g_j/∂z_c``; products are taken
    term by term, ``(α⊗e)∧(β⊗f) = (α∧β)⊗(e∧f)``, and every wedge word is
    reordered to increasing indices with its permutation sign.  Returns
    ``{(I, J): coefficient}``.
    """
    mat = dbar_conjugate_reps(hmap)
    one = HoloPoly.one(hmap.n)
    terms = {((), ()): one}
    entries = [(j, c, mat[j][c]) for j in range(hmap.N) for c in range(hmap.n)
               if not mat[j][c].is_zero()]
    for _ in range(k):
        nxt: dict = {}
        for (rows, cols), coef in terms.items():
            for j, c, a in entries:
                if j in rows or c in cols:
                    continue
                new_rows, s1 = _sort_with_sign(rows + (j,))
                new_cols, s2 = _sort_with_sign(cols + (c,))
                key = (new_rows, new_cols)
                contrib = coef * a
                if s1 * s2 < 0:
                    contrib = -contrib
                nxt[key] = nxt.get(key, HoloPoly.zero(hmap.n)) + contrib
        terms = nxt
    inv = Fraction(1, math.factorial(k))
    return {key: v * inv for key, v in terms.items() if not v.is_zero()}


def wedge_power_check(hmap: PluriharmonicMap, k: int) -> bool:
    """Exact check that ``(H_1)^k/k!`` has the k×k minors as coefficients."""
    if k > hmap.n:
        raise pa.PolyError(f"minor order {k} exceeds domain dimension {hmap.n}")
    wp = wedge_power(hmap, k)
    ms = minor_system(hmap, k)
    keys = set(wp) | {key for key, m in ms.minors.items() if not m.is_zero()}
    zero = HoloPoly.zero(hmap.n)
    return all(wp.get(key, zero) == ms.minors.get(key, zero) for key in keys)


def totally_real_at(hmap: PluriharmonicMap, x: Sequence[complex], tol: float = MINOR_TOL):
    """Is the graph of h totally real over the point x?

    Returns ``True`` when some n×n ∂̄-minor has modulus > tol at x, ``False``
    when every minor is exactly zero there (or the system is empty), and
    ``None`` when the largest modulus falls in (0, tol] - numerics never
    declare vanishing on their own.
    """
    ms = minor_system(hmap, hmap.n)
    if ms.empty or ms.identically_zero:
        return False
    pt = np.asarray(x, dtype=complex).reshape(1, -1)
    biggest = max(float(np.abs(ms.minor_value(key, pt))[0]) for key in ms.minors)
    if biggest > tol:
        return True
    if biggest == 0.0:
        return False
    return None


@dataclass
class FaceLocus:
    """Unit-circle values a with every h_j holomorphic on the face disk.

    ``face`` is the frozen variable (0 for ``{z1 = a}``, 1 for ``{z2 = a}``).
    ``condition`` is the exact gcd whose unit-modulus roots form the locus;
    it is the zero polynomial when every face is holomorphic (``kind='all'``).
    """

    face: int
    kind: str
    condition: HoloPoly
    roots: list

    @property
    def nonempty(self) -> bool:
        return self.kind != "empty"

    def to_json(self) -> dict:
        return {
            "face": f"z{self.face + 1}",
            "kind": self.kind,
            "condition": self.condition.to_text(),
            "roots": [[r.real, r.imag] for r in self.roots],
        }


def _reciprocal_conjugate(p: HoloPoly, var: int) -> HoloPoly:
    """``z^d conj(p(1/z̄))`` for p univariate in ``z_var``."""
    d = p.degree_in(var)
    terms = {}
    for e, c in p.terms.items():
        e2 = list(e)
        e2[var] = d - e[var]
        terms[tuple(e2)] = c.conjugate()
    return HoloPoly(p.num_vars, terms)


def face_holomorphy_locus(hmap: PluriharmonicMap, face: int, tol: float = 1e-8) -> FaceLocus:
    """h_j is holomorphic on ``{z_face = a}`` iff ``∂g_j/∂z_free (a, ·) ≡ 0``."""
    if hmap.n != 2:
        raise pa.PolyError("face analysis is defined for the bidisk (n = 2)")
    if face not in (0, 1):
        raise pa.PolyError("face must be 0 (z1 frozen) or 1 (z2 frozen)")
    free = 1 - face
    coeffs = []
    for h in hmap.funcs:
        d = h.g.derivative(free)
        coeffs.extend(d.coeffs_in(free).values())
    cond = pa.gcd_many(coeffs)
    if cond is None:
        return FaceLocus(face, "all", HoloPoly.zero(2), [])
    if cond.is_constant():
        return FaceLocus(face, "empty", cond, [])
    # unit-circle roots of cond are also roots of its reciprocal conjugate
    sym = pa.gcd_bivariate(cond, _reciprocal_conjugate(cond, face))
    roots = []
    if not sym.is_constant():
        coef = sym.numeric_univariate(face, {free: 0.0})
        for r in np.roots(coef):
            if abs(abs(r) - 1.0) < tol:
                roots.append(complex(r / abs(r)))
    roots.sort(key=lambda r: (round(np.angle(r), 12)))
    return FaceLocus(face, "points" if roots else "empty", cond, roots)
