"""Verdict engine: where are all generators holomorphic, and is the rest totally real?

Everything that drives a decision is exact (gcds, divisibility, resultants
over Q(i)); numerics enter only to locate points (roots of eliminants,
boundary sampling of curves) and are reported as such.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import polyalg as pa
from .density import SampleDomain
from .gaussian import GaussianRational
from .pluriharmonic import (
    PluriharmonicMap,
    _key_text,
    face_holomorphy_locus,
    minor_system,
)
from .polyalg import HoloPoly

__all__ = [
    "ObstructionError",
    "NoLeafError",
    "DegenerateLeafError",
    "StratificationAborted",
    "VarietyDecomposition",
    "Leaf",
    "Stratification",
    "Verdict",
    "common_zero_set",
    "common_zeros",
    "holomorphic_along_curve",
    "find_leaf",
    "leaf_boundary_check",
    "stratify",
    "analyze",
    "VERDICT_KINDS",
]

VERDICT_KINDS = ("Dense", "BoundaryDisk", "InteriorVariety", "LeafFamily", "Inconclusive")
CLOSURE_IN_TORUS, EXITS_OFF_TORUS, UNKNOWN = "ClosureInTorus", "ExitsOffTorus", "Unknown"

POINT_TOL = 1e-7        # residual tolerance for accepting numeric common zeros
CLUSTER_TOL = 1e-6      # numeric points closer than this are one point
MODULUS_TOL = 1e-6      # |z| within this of 1 counts as on the circle
BOUNDARY_ANGLES = 256


class ObstructionError(ValueError):
    pass


class NoLeafError(ObstructionError):
    """The chosen generator is holomorphic, so it has no level-set lamination."""


class DegenerateLeafError(ObstructionError):
    """The curve does not meet the closed bidisk."""


class StratificationAborted(ObstructionError):
    def __init__(self, reason: str, component: HoloPoly | None = None):
        self.reason = reason
        self.component = component
        text = component.to_text() if component is not None else "-"
        super().__init__(f"stratification aborted ({reason}): {text}")


def _pt_json(p) -> list:
    return [[complex(c).real, complex(c).imag] for c in p]


def _sort_points(pts) -> list:
    return sorted((tuple(complex(c) for c in p) for p in pts),
                  key=lambda p: tuple(round(v, 9) for c in p for v in (c.real, c.imag)))


def _text_key(p: HoloPoly) -> str:
    return p.to_text()


# -- numeric helpers -------------------------------------------------------

class _NumCurve:
    """Double-precision bivariate polynomial ``sum c_e z^e``."""

    def __init__(self, exps, coeffs):
        self.exps = np.asarray(exps, dtype=int).reshape(-1, 2)
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.deg = [int(self.exps[:, v].max()) if len(self.exps) else 0 for v in (0, 1)]

    @classmethod
    def of(cls, p: HoloPoly, shift: complex = 0.0) -> "_NumCurve":
        exps, coeffs = p.lowered()
        exps, coeffs = list(map(tuple, exps)), list(coeffs)
        if shift:
            if (0, 0) in exps:
                coeffs[exps.index((0, 0))] -= shift
            else:
                exps.append((0, 0))
                coeffs.append(-shift)
        return cls(exps, coeffs)

    def __call__(self, z1, z2):
        z1, z2 = np.asarray(z1, dtype=complex), np.asarray(z2, dtype=complex)
        out = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for (a, b), c in zip(self.exps, self.coeffs):
            out = out + c * z1 ** a * z2 ** b
        return out

    def scale(self) -> float:
        return 1.0 + float(np.sum(np.abs(self.coeffs)))

    def uni(self, fixed: int, value: complex) -> np.ndarray:
        """Coefficients (highest first) in the free variable with ``z_fixed = value``."""
        free = 1 - fixed
        d = self.deg[free]
        out = np.zeros(d + 1, dtype=complex)
        for e, c in zip(self.exps, self.coeffs):
            out[d - e[free]] += c * value ** e[fixed]
        return out


def _roots(coef: np.ndarray):
    """Roots of a highest-first coefficient vector; None when it is numerically zero."""
    coef = np.asarray(coef, dtype=complex)
    big = np.max(np.abs(coef)) if coef.size else 0.0
    if big == 0.0:
        return None
    nz = np.nonzero(np.abs(coef) > 1e-13 * big)[0]
    if nz.size == 0:
        return None
    coef = coef[nz[0]:]
    if coef.size == 1:
        return np.zeros(0, dtype=complex)
    return np.roots(coef)


def _cluster(points, tol=CLUSTER_TOL) -> list:
    out: list = []
    for p in points:
        p = np.asarray(p, dtype=complex)
        for q in out:
            if np.max(np.abs(q[0] - p)) <= tol:
                q[1].append(p)
                break
        else:
            out.append([p, [p]])
    return _sort_points(np.mean(np.array(ps), axis=0) for _, ps in out)


def _curve_points(curve: _NumCurve, angles: int = 16, levels: int = 4) -> np.ndarray:
    """Points of ``{curve = 0}`` in the closed bidisk, found by solving along polar grids."""
    radii = [k / levels for k in range(levels + 1)]
    base = sorted({complex(r * np.exp(2j * np.pi * m / angles)) for r in radii for m in range(angles)},
                  key=lambda c: (round(c.real, 12), round(c.imag, 12)))
    pts = []
    for fixed in (0, 1):
        for zeta in base:
            rts = _roots(curve.uni(fixed, zeta))
            if rts is None:
                # the whole line {z_fixed = zeta} lies on the curve
                rts = np.array([0.0, 0.5, 0.5j])
            for r in rts:
                if abs(r) <= 1 + 1e-9:
                    pts.append((zeta, r) if fixed == 0 else (r, zeta))
    return np.array(pts, dtype=complex).reshape(-1, 2)


def _newton_polish(a: _NumCurve, b: _NumCurve, x, y, steps=4):
    da = [(_NumCurve._d(a, 0)), (_NumCurve._d(a, 1))]
    db = [(_NumCurve._d(b, 0)), (_NumCurve._d(b, 1))]
    best = (x, y)
    res = abs(a(x, y)) + abs(b(x, y))
    for _ in range(steps):
        J = np.array([[da[0](x, y), da[1](x, y)], [db[0](x, y), db[1](x, y)]], dtype=complex)
        F = np.array([a(x, y), b(x, y)], dtype=complex)
        try:
            dx, dy = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        x, y = x - dx, y - dy
        r = abs(a(x, y)) + abs(b(x, y))
        if not np.isfinite(r) or r >= res:
            break
        best, res = (x, y), r
    return best


def _deriv(c: _NumCurve, v: int) -> _NumCurve:
    exps, coeffs = [], []
    for e, k in zip(c.exps, c.coeffs):
        if e[v]:
            e2 = list(e)
            e2[v] -= 1
            exps.append(tuple(e2))
            coeffs.append(k * e[v])
    if not exps:
        exps, coeffs = [(0, 0)], [0j]
    return _NumCurve(exps, coeffs)


_NumCurve._d = staticmethod(_deriv)


def _coprime_pair(ps: list[HoloPoly]):
    a = ps[0]
    rest = ps[1:]
    for weights in ([1, 2, 3, 5, 7, 11], [1, -1, 2, -3, 5, -7], [3, 1, 4, 1, 5, 9]):
        b = HoloPoly.zero(2)
        for w, p in zip(weights * (len(rest) // len(weights) + 1), rest):
            b = b + p * w
        if not b.is_zero() and pa.gcd_bivariate(a, b).is_constant():
            return a, b
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if pa.gcd_bivariate(ps[i], ps[j]).is_constant():
                return ps[i], ps[j]
    return None


def common_zeros(polys: Sequence[HoloPoly], bound: float = 1.0) -> list:
    """Numeric common zeros in ``{|z1|, |z2| <= bound}`` of bivariate polynomials with trivial gcd.

    One coprime pair (a fixed integer combination, else a coprime pair of
    inputs) is solved by eliminating z2 with the exact resultant; candidates
    are polished by Newton on the pair and kept when every input vanishes.
    """
    ps = [p for p in polys if not p.is_zero()]
    if any(p.is_constant() for p in ps):
        return []
    if not ps:
        raise ObstructionError("common zeros of the zero system form the whole space")
    g = pa.gcd_many(ps)
    if not g.is_constant():
        raise ObstructionError(f"system has the common curve {g.to_text()}")
    ps = sorted({p.normalized() for p in ps}, key=_text_key)
    if len(ps) == 1:
        return []
    pair = _coprime_pair(ps)
    if pair is None:
        raise ObstructionError("no coprime pair in the system")
    a, b = pair
    r = pa.resultant_eliminate(a, b, 1)
    if r.is_constant():
        return []
    xs = np.roots(pa.square_free_part(r).numeric_univariate(0, {1: 0.0}))
    na, nb = _NumCurve.of(a), _NumCurve.of(b)
    checks = [_NumCurve.of(p) for p in ps]
    lim = bound + 1e-9
    cands = []
    for x in xs:
        if abs(x) > bound + 1e-6:
            continue
        rts = _roots(na.uni(0, x))
        if rts is None:
            rts = _roots(nb.uni(0, x))
        if rts is None:
            continue
        for y in rts:
            x2, y2 = _newton_polish(na, nb, complex(x), complex(y))
            if abs(x2) > lim or abs(y2) > lim:
                continue
            if all(abs(c(x2, y2)) <= POINT_TOL * c.scale() for c in checks):
                cands.append((x2, y2))
    return _cluster(cands)


# -- Z̃ -------------------------------------------------------------------

@dataclass
class VarietyDecomposition:
    one_dim: HoloPoly
    one_dim_factors: list
    zero_dim: list
    everything_flag: bool = False

    @property
    def empty(self) -> bool:
        return not self.everything_flag and self.one_dim.is_constant() and not self.zero_dim

    def to_json(self) -> dict:
        return {
            "everything": self.everything_flag,
            "one_dim": self.one_dim.to_text(),
            "one_dim_factors": [f.to_text() for f in self.one_dim_factors],
            "zero_dim": [_pt_json(p) for p in self.zero_dim],
        }


def _decompose(polys: list[HoloPoly], bound: float = 1.0) -> VarietyDecomposition:
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return VarietyDecomposition(HoloPoly.zero(2), [], [], True)
    G = pa.gcd_many(nonzero)
    one = HoloPoly.one(2)
    if G.is_constant():
        one_dim, factors = one, []
    else:
        one_dim = pa.square_free_part(G)
        factors = pa.coprime_base(pa.content_split(one_dim))
    cof = [p.exact_div(G) for p in nonzero]
    zero_dim = []
    if not any(c.is_constant() for c in cof):
        pts = common_zeros(cof, bound)
        if factors:
            test = _NumCurve.of(one_dim)
            pts = [p for p in pts if abs(test(*p)) > POINT_TOL * test.scale()]
        zero_dim = pts
    return VarietyDecomposition(one_dim, factors, zero_dim, False)


def common_zero_set(ms) -> VarietyDecomposition:
    """Z̃ of a 2×2 minor system, split into its curve part and isolated points."""
    if ms.n != 2:
        raise ObstructionError("common_zero_set needs n = 2")
    return _decompose(list(ms.minors.values()))


# -- holomorphy along curves ------------------------------------------------

def tangential_minors(hmap: PluriharmonicMap, p: HoloPoly) -> list[HoloPoly]:
    """``B_j = g_j,1 p_2 - g_j,2 p_1``: the ∂̄ of h_j along {p = 0}, up to conjugation."""
    p1, p2 = p.derivative(0), p.derivative(1)
    return [h.g.derivative(0) * p2 - h.g.derivative(1) * p1 for h in hmap.funcs]


def holomorphic_along_curve(hmap: PluriharmonicMap, p: HoloPoly) -> bool:
    if hmap.n != 2 or p.num_vars != 2:
        raise ObstructionError("holomorphic_along_curve needs n = 2")
    if p.is_constant():
        raise ObstructionError("curve polynomial must be nonconstant")
    return all(pa.divides(p, b) for b in tangential_minors(hmap, p))


def _holomorphic_along_numeric(hmap: PluriharmonicMap, curve: _NumCurve, samples: int = 200,
                               tol: float = 1e-8) -> bool:
    pts = _curve_points(curve, angles=20, levels=5)[:samples]
    if len(pts) == 0:
        return False
    c1, c2 = _deriv(curve, 0), _deriv(curve, 1)
    for h in hmap.funcs:
        g1, g2 = h.g.derivative(0), h.g.derivative(1)
        b = g1.evaluate_many(pts) * c2(pts[:, 0], pts[:, 1]) - g2.evaluate_many(pts) * c1(pts[:, 0], pts[:, 1])
        if np.max(np.abs(b)) > tol:
            return False
    return True


# -- leaves --------------------------------------------------------------

def _rational_point(c: complex):
    """Gaussian rational whose double is exactly c (small denominators only)."""
    q = GaussianRational.from_complex(c, max_denominator=10 ** 6)
    return q if complex(q) == complex(c) else None


def _rationalize(c: complex, tol: float = 1e-12):
    q = GaussianRational.from_complex(c, max_denominator=10 ** 4)
    return q if abs(complex(q) - c) < tol else None


@dataclass
class Leaf:
    phi: HoloPoly
    constant: complex
    curve: HoloPoly | None           # exact component; None when k is not Gaussian-rational
    base_point: tuple
    generator: int = 0
    exact: bool = True
    singular_points: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def numeric_curve(self) -> _NumCurve:
        if self.curve is not None:
            return _NumCurve.of(self.curve)
        return _NumCurve.of(self.phi, self.constant)

    def curve_text(self) -> str:
        if self.curve is not None:
            return self.curve.to_text()
        k = self.constant
        return f"{self.phi.to_text()} - ({k.real!r},{k.imag!r})"

    def to_json(self) -> dict:
        return {
            "phi": self.phi.to_text(),
            "constant": [self.constant.real, self.constant.imag],
            "curve": self.curve_text(),
            "exact": self.exact,
            "generator": self.generator + 1,
            "base_point": _pt_json(self.base_point),
            "singular_points": [_pt_json(p) for p in self.singular_points],
            "notes": list(self.notes),
        }


def _singular_points(F: HoloPoly) -> list:
    parts = [F, F.derivative(0), F.derivative(1)]
    try:
        return common_zeros(parts)
    except ObstructionError:
        return []


def find_leaf(hmap: PluriharmonicMap, j: int, x0: Sequence[complex]) -> Leaf:
    """Component of the level set ``{g_j = g_j(x0)}`` through ``x0``."""
    if hmap.n != 2:
        raise ObstructionError("find_leaf needs n = 2")
    phi = hmap.funcs[j].g
    if phi.is_constant():
        raise NoLeafError(f"generator {j + 1} is holomorphic; it has no leaves")
    xq = [_rational_point(complex(c)) for c in x0]
    base = tuple(complex(c) for c in x0)
    notes = []
    if all(q is not None for q in xq):
        k_exact = phi.eval_exact(xq)
    else:
        k_exact = _rationalize(complex(phi(*base)))
    if k_exact is None:
        k = complex(phi(*base))
        crit = [phi.derivative(0), phi.derivative(1)]
        try:
            sing = common_zeros(crit)
        except ObstructionError:
            sing = []
            notes.append("critical set of phi is positive-dimensional")
        level = _NumCurve.of(phi, k)
        sing = [p for p in sing if abs(level(*p)) <= POINT_TOL * level.scale()]
        notes.append("constant is not Gaussian-rational; curve carried numerically")
        return Leaf(phi, k, None, base, j, False, sing, notes)
    level = phi - HoloPoly.const(2, k_exact)
    full = pa.square_free_part(level)
    comps = pa.coprime_base(pa.content_split(full)) or [full]
    if all(q is not None for q in xq):
        through = [c for c in comps if not c.eval_exact(xq)]
    else:
        through = [c for c in comps if abs(c(*base)) <= 1e-8 * _NumCurve.of(c).scale()]
    if not through:
        notes.append("no component vanishes at the base point numerically; keeping the full level set")
        through = [full]
    if len(through) > 1:
        notes.append(f"base point lies on {len(through)} components; first in canonical order kept")
    return Leaf(phi, complex(k_exact), through[0], base, j, True, _singular_points(full), notes)


def _line_components(curve: HoloPoly):
    """Roots a of pure factors q(z_v) (lines ``{z_v = a}``) for v = 0, 1."""
    out = []
    for part in pa.content_split(curve):
        vs = part.variables()
        if len(vs) == 1:
            (v,) = vs
            for a in np.roots(part.numeric_univariate(v, {1 - v: 0.0})):
                out.append((v, complex(a)))
    return out


def leaf_boundary_check(leaf) -> str:
    """Where does the curve meet b𝔻²: only on the torus, or somewhere off it?"""
    if isinstance(leaf, HoloPoly):
        if leaf.is_constant():
            raise ObstructionError("curve polynomial must be nonconstant")
        exact, curve = leaf, _NumCurve.of(leaf)
    else:
        exact, curve = leaf.curve, leaf.numeric_curve
    if exact is not None:
        for _, a in _line_components(exact):
            if abs(a) <= 1 + 1e-9:
                # {z_v = a} x closed disk: its boundary contains (a, 0)
                return EXITS_OFF_TORUS
    on_torus = 0
    for fixed in (0, 1):
        for m in range(BOUNDARY_ANGLES):
            zeta = complex(np.exp(2j * np.pi * m / BOUNDARY_ANGLES))
            rts = _roots(curve.uni(fixed, zeta))
            if rts is None:
                return EXITS_OFF_TORUS
            for r in rts:
                mod = abs(r)
                if mod < 1 - MODULUS_TOL:
                    return EXITS_OFF_TORUS
                if mod <= 1 + MODULUS_TOL:
                    on_torus += 1
    if on_torus:
        return CLOSURE_IN_TORUS
    if len(_curve_points(curve)):
        return UNKNOWN
    raise DegenerateLeafError("curve does not meet the closed bidisk")


# -- stratification ----------------------------------------------------------

@dataclass
class Stratification:
    levels: list            # dicts, top level first
    notes: list = field(default_factory=list)

    def level(self, k: int) -> dict:
        for lv in self.levels:
            if lv["level"] == k:
                return lv
        raise KeyError(k)

    def to_json(self) -> dict:
        return {"levels": self.levels, "notes": list(self.notes)}


def _meets_open_bidisk(curve: _NumCurve) -> bool:
    pts = _curve_points(curve)
    return bool(len(pts)) and bool(np.any(np.max(np.abs(pts), axis=1) < 1 - 1e-9))


def _sample_nonzero(curve: _NumCurve, b: HoloPoly, count: int = 100) -> int:
    pts = _curve_points(curve, angles=12, levels=4)[:count]
    if len(pts) == 0:
        return 0
    return int(np.sum(np.abs(b.evaluate_many(pts)) > 1e-10))


def _boundary_levels(hmap: PluriharmonicMap) -> tuple[list, list]:
    from .zero_tracker import ZeroTrackingError, boundary_zero_cover

    faces, notes = [], []
    for face in (0, 1):
        try:
            cov = boundary_zero_cover(hmap, face)
            faces.append({"face": f"z{face + 1}", "arcs": len(cov.arcs), "e_samples": len(cov.e_samples),
                          "b_samples": len(cov.b_samples), "boxes": len(cov.boxes)})
        except ZeroTrackingError as exc:
            notes.append(f"face z{face + 1}: boundary cover unavailable ({exc})")
    return faces, notes


def stratify(hmap: PluriharmonicMap, domain: SampleDomain | str | None = None,
             boundary: bool = True, allow_holomorphic: Sequence[HoloPoly] = ()) -> Stratification:
    """Y2 ⊃ Y1 ⊃ Y0 ⊃ boundary levels, with a totally-real certificate per difference set.

    Components listed in ``allow_holomorphic`` (already known not to be
    obstructions for the caller's domain) are recorded instead of aborting.
    """
    if hmap.n != 2:
        raise ObstructionError("stratify needs n = 2")
    ms = minor_system(hmap, 2)
    if ms.empty or ms.identically_zero:
        raise StratificationAborted("everything")
    top_key = next(k for k, m in sorted(ms.minors.items()) if not m.is_zero())
    dec = common_zero_set(ms)
    allowed = {p.normalized() for p in allow_holomorphic}
    certs, y0_points, skipped = [], [], []
    for q in dec.one_dim_factors:
        bs = tangential_minors(hmap, q)
        bad = [j for j, b in enumerate(bs) if not pa.divides(q, b)]
        if not bad:
            if q.normalized() in allowed:
                skipped.append(q.to_text())
                continue
            raise StratificationAborted("holomorphic_component", q)
        j = bad[0]
        certs.append({"component": q.to_text(), "generator": j + 1, "B": bs[j].to_text(),
                      "nonzero_samples": _sample_nonzero(_NumCurve.of(q), bs[j])})
        # points of the component where every tangential minor vanishes
        system = [q] + [b for b in bs if not b.is_zero()]
        y0_points.extend(common_zeros(system))
    if not dec.one_dim.is_constant():
        y0_points.extend(_singular_points(dec.one_dim))
    y0_points.extend(dec.zero_dim)
    y0_points = _cluster(y0_points) if y0_points else []
    levels = [
        {"level": 2, "set": "closed bidisk", "interior": "all",
         "certificate": {"minor": _key_text(top_key), "B": ms.minors[top_key].to_text()}},
        {"level": 1, "set": "bD^2 union Z1", "interior": dec.to_json(), "certificates": certs,
         "holomorphic_exempt": skipped},
        {"level": 0, "set": "bD^2 union Z0", "interior": {"points": [_pt_json(p) for p in y0_points]},
         "certificates": [{"points": "finite set", "dimension": 0}]},
        {"level": -1, "set": "bD^2", "interior": None,
         "faces": [face_holomorphy_locus(hmap, f).to_json() for f in (0, 1)]},
    ]
    notes = []
    faces = []
    if boundary:
        faces, notes = _boundary_levels(hmap)
    levels.append({"level": -2, "set": "Gamma^2 union E union E'", "interior": None, "covers": faces})
    levels.append({"level": -3, "set": "Gamma^2 union B union B'", "interior": None})
    return Stratification(levels, notes)


# -- verdicts --------------------------------------------------------------

@dataclass
class Verdict:
    kind: str
    witness: object = None          # dict for faces, HoloPoly for curves, Leaf for leaf families
    stratification: Stratification | None = None
    notes: list = field(default_factory=list)
    domain: str = ""

    def __post_init__(self):
        if self.kind not in VERDICT_KINDS:
            raise ValueError(f"unknown verdict kind {self.kind!r}")

    def witness_variety(self) -> str | None:
        """Canonical text of the witness set, independent of generator scaling."""
        w = self.witness
        if w is None:
            return None
        if isinstance(w, HoloPoly):
            return w.to_text()
        if isinstance(w, Leaf):
            return w.curve_text() if w.curve is not None else w.phi.normalized().to_text()
        return json.dumps(w, sort_keys=True)

    def witness_json(self):
        w = self.witness
        if w is None:
            return None
        if isinstance(w, HoloPoly):
            return {"type": "curve", "curve": w.to_text()}
        if isinstance(w, Leaf):
            return {"type": "leaf", **w.to_json()}
        return {"type": "face", **w}

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "domain": self.domain,
            "witness": self.witness_json(),
            "stratification": self.stratification.to_json() if self.stratification else None,
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _domain_kind(domain) -> str:
    if domain is None:
        return "ClosedBidisk"
    kind = domain.kind if isinstance(domain, SampleDomain) else str(domain)
    aliases = {"bidisk": "ClosedBidisk", "torus": "Torus2", "disk": "ClosedDisk"}
    kind = aliases.get(kind.lower(), kind)
    if kind not in ("ClosedBidisk", "Torus2", "ClosedDisk"):
        raise ObstructionError(f"analyze supports the closed bidisk, the torus and the disk, not {kind}")
    return kind


def _torus_base_points() -> list:
    half = [Fraction(1, 2), Fraction(-1, 2)]
    ring = [GaussianRational(x) for x in half] + [GaussianRational(0, x) for x in half]
    zero = GaussianRational(0)
    pts = [(zero, zero)] + [(a, zero) for a in ring] + [(zero, b) for b in ring]
    pts += [(a, b) for a in ring for b in ring]
    return [tuple(complex(c) for c in p) for p in pts]


def _analyze_disk(hmap: PluriharmonicMap) -> Verdict:
    derivs = [h.g.derivative(0) for h in hmap.funcs]
    if all(d.is_zero() for d in derivs):
        return Verdict("InteriorVariety", {"set": "closed unit disk"}, None,
                       ["every generator is holomorphic on the disk"], "ClosedDisk")
    g = pa.gcd_many(derivs)
    pts = []
    if not g.is_constant():
        pts = [complex(r) for r in np.roots(g.numeric_univariate(0, {})) if abs(r) <= 1 + 1e-9]
    j = next(i for i, d in enumerate(derivs) if not d.is_zero())
    levels = [
        {"level": 1, "set": "closed disk", "interior": "all",
         "certificate": {"generator": j + 1, "derivative": derivs[j].to_text()}},
        {"level": 0, "set": "bD union critical points",
         "interior": {"points": [[p.real, p.imag] for p in sorted(pts, key=lambda c: (c.real, c.imag))]}},
    ]
    return Verdict("Dense", None, Stratification(levels), [], "ClosedDisk")


def analyze(hmap: PluriharmonicMap, domain: SampleDomain | str | None = None) -> Verdict:
    kind = _domain_kind(domain)
    if kind == "ClosedDisk":
        if hmap.n != 1:
            raise ObstructionError("the disk mode needs a map in one variable")
        return _analyze_disk(hmap)
    if hmap.n != 2:
        raise ObstructionError("analyze needs n = 2 on the bidisk or the torus")
    torus = kind == "Torus2"

    ms = minor_system(hmap, 2)
    everything = ms.empty or ms.identically_zero
    # (1) analytic disks in the faces
    for face in (0, 1):
        loc = face_holomorphy_locus(hmap, face)
        if not loc.nonempty:
            continue
        if everything and not torus and loc.kind == "all":
            # the whole face family extends to leaves through the interior
            break
        return Verdict("BoundaryDisk", loc.to_json(), None,
                       [f"every generator is holomorphic on face disks {{z{face + 1} = a}}"], kind)

    # (2) Z̃ is everything: level sets of a non-holomorphic generator
    if everything:
        j = next((i for i, h in enumerate(hmap.funcs) if not h.is_holomorphic()), None)
        if j is None:
            return Verdict("InteriorVariety", {"set": "closed bidisk"}, None,
                           ["every generator is holomorphic"], kind)
        if not torus:
            leaf = find_leaf(hmap, j, (0.0, 0.0))
            return Verdict("LeafFamily", leaf, None,
                           [f"rank of the dbar-Jacobian is at most 1; leaves are level sets of g{j + 1}"], kind)
        return _torus_leaves(hmap, j)

    # (3) Z̃ proper
    dec = common_zero_set(ms)
    notes = []
    exempt = []
    for q in dec.one_dim_factors:
        if not holomorphic_along_curve(hmap, q):
            continue
        nq = _NumCurve.of(q)
        if not _meets_open_bidisk(nq):
            exempt.append(q)
            notes.append(f"holomorphic component {q.to_text()} misses the open bidisk")
            continue
        if not torus:
            return Verdict("InteriorVariety", q, None,
                           ["all generators are holomorphic along this component"], kind)
        status = leaf_boundary_check(q)
        if status == CLOSURE_IN_TORUS:
            return Verdict("InteriorVariety", q, None,
                           ["holomorphic component with boundary in the torus"], kind)
        if status == UNKNOWN:
            return Verdict("Inconclusive", None, None,
                           [f"boundary of holomorphic component {q.to_text()} could not be classified"], kind)
        exempt.append(q)
        notes.append(f"holomorphic component {q.to_text()} leaves the torus")
    if dec.zero_dim:
        notes.append(f"{len(dec.zero_dim)} isolated point(s) of the minor variety; "
                     "varieties through them are not examined")
    strat = stratify(hmap, kind, boundary=True, allow_holomorphic=exempt)
    return Verdict("Dense", None, strat, notes, kind)


def _torus_leaves(hmap: PluriharmonicMap, j: int) -> Verdict:
    notes = []
    unknown = []
    seen = set()
    for x0 in _torus_base_points():
        leaf = find_leaf(hmap, j, x0)
        key = leaf.curve_text()
        if key in seen:
            continue
        seen.add(key)
        try:
            status = leaf_boundary_check(leaf)
        except DegenerateLeafError:
            continue
        if status == EXITS_OFF_TORUS:
            continue
        if status == UNKNOWN:
            unknown.append(key)
            continue
        if leaf.curve is not None:
            ok = holomorphic_along_curve(hmap, leaf.curve)
        else:
            ok = _holomorphic_along_numeric(hmap, leaf.numeric_curve)
            notes.append("holomorphy along the leaf checked numerically")
        if ok:
            return Verdict("LeafFamily", leaf, None,
                           notes + ["leaf closes up in the torus and carries every generator holomorphically"],
                           "Torus2")
    if unknown:
        return Verdict("Inconclusive", None, None,
                       [f"leaf boundary unresolved: {k}" for k in unknown], "Torus2")
    strat = Stratification(
        [{"level": 0, "set": "Gamma^2", "interior": None,
          "certificate": {"leaves_checked": len(seen), "all_exit_torus": True}}])
    notes.append(f"all {len(seen)} sampled leaves of g{j + 1} leave the torus")
    return Verdict("Dense", None, strat, notes, "Torus2")
