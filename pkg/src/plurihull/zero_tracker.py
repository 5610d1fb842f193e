"""Argument-principle zero tracking for families ``g(·, t)`` of holomorphic functions.

The contour integrals ``(1/2πi)∮ z^k g'/g dz`` over a circle give the number
of enclosed zeros (k = 0) and their power sums (k ≥ 1).  Power sums turn into
the zeros themselves through Newton's identities.  For two zeros the
combination ``2 p2 - p1^2 = (a1 - a2)^2`` locates the branching parameters:
the boundary of its zero set.

The second half of the module builds, on one boundary face of the bidisk,
the sets E (zeros of a chosen ∂̄-representative along arcs of the circle),
sampled approximations of B, and a disjoint cover of B by small boxes plus
a collar near the boundary circle.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import polyalg as pa
from .pluriharmonic import PluriharmonicMap
from .polyalg import HoloPoly

__all__ = [
    "Contour",
    "ZeroTrajectory",
    "BoundaryCover",
    "Box",
    "ZeroTrackingError",
    "ContourTooCloseError",
    "QuadratureError",
    "UnsupportedMultiplicityError",
    "FaceDiskError",
    "RecoveryWarning",
    "winding_count",
    "zero_moments",
    "recover_zeros",
    "branching_set",
    "boundary_zero_cover",
    "ParamFamily",
]

MAX_NODES = 2 ** 16


class ZeroTrackingError(RuntimeError):
    pass


class ContourTooCloseError(ZeroTrackingError):
    pass


class QuadratureError(ZeroTrackingError):
    pass


class UnsupportedMultiplicityError(ZeroTrackingError):
    pass


class FaceDiskError(ZeroTrackingError):
    """Every generator is holomorphic on some face disk of the arc."""


class RecoveryWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Contour:
    center: complex = 0j
    radius: float = 1.0
    nodes: int = 64

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("contour radius must be positive")
        if self.nodes < 64 or self.nodes & (self.nodes - 1):
            raise ValueError("contour nodes must be a power of two, at least 64")

    def points(self, nodes: int | None = None):
        n = nodes or self.nodes
        w = np.exp(2j * np.pi * np.arange(n) / n)
        return self.center + self.radius * w, self.radius * w


class ParamFamily:
    """``g(z, t)``: holomorphic in z for each real t, with its z-derivative.

    Built from a 2-variable HoloPoly in ``(z, t)`` (derivative exact), from
    a HoloPoly evaluated on a face ``(z_face = e^{it})``, or from a bare
    callable (derivative by 4th-order central differences).
    """

    def __init__(self, fun: Callable, dfun: Callable | None = None, step: float = 1e-5):
        self.fun = fun
        self._dfun = dfun
        self.step = step

    @classmethod
    def from_poly(cls, p: HoloPoly) -> "ParamFamily":
        if p.num_vars != 2:
            raise pa.PolyError("a parameter family polynomial lives in (z, t)")
        dp = p.derivative(0)
        return cls(lambda z, t: p(z, np.full_like(z, t)), lambda z, t: dp(z, np.full_like(z, t)))

    @classmethod
    def on_face(cls, p: HoloPoly, face: int) -> "ParamFamily":
        """``t -> p`` with ``z_face = e^{it}`` and z the free coordinate."""
        free = 1 - face
        dp = p.derivative(free)

        def lift(q):
            def f(z, t):
                a = np.full_like(z, np.exp(1j * t))
                return q(a, z) if face == 0 else q(z, a)
            return f

        return cls(lift(p), lift(dp))

    @classmethod
    def coerce(cls, g) -> "ParamFamily":
        if isinstance(g, ParamFamily):
            return g
        if isinstance(g, HoloPoly):
            return cls.from_poly(g)
        if callable(g):
            return cls(g)
        raise TypeError(f"cannot build a parameter family from {g!r}")

    def __call__(self, z, t):
        return np.asarray(self.fun(np.asarray(z, dtype=complex), t), dtype=complex) * np.ones_like(z)

    def derivative(self, z, t, scale: float = 1.0):
        z = np.asarray(z, dtype=complex)
        if self._dfun is not None:
            return np.asarray(self._dfun(z, t), dtype=complex) * np.ones_like(z)
        h = self.step * scale
        f = self.fun
        return (-f(z + 2 * h, t) + 8 * f(z + h, t) - 8 * f(z - h, t) + f(z - 2 * h, t)) / (12 * h)


def _log_derivative_integrals(fam: ParamFamily, t: float, contour: Contour, nodes: int, powers):
    z, rw = contour.points(nodes)
    gv = fam(z, t)
    mags = np.abs(gv)
    scale = mags.max() if mags.size else 0.0
    if scale == 0.0 or mags.min() <= 1e-9 * scale:
        raise ContourTooCloseError(
            f"g(·, {t:g}) nearly vanishes on the contour (min |g| = {mags.min():.3g})")
    ratio = fam.derivative(z, t, contour.radius) / gv * rw
    return np.array([np.mean(z ** k * ratio) for k in powers])


def _converged_integrals(fam, t, contour, powers, tol):
    nodes = contour.nodes
    prev = _log_derivative_integrals(fam, t, contour, nodes, powers)
    while nodes < MAX_NODES:
        nodes *= 2
        cur = _log_derivative_integrals(fam, t, contour, nodes, powers)
        if np.max(np.abs(cur - prev)) < tol:
            return cur
        prev = cur
    raise QuadratureError(f"contour quadrature did not converge at t={t:g} with {MAX_NODES} nodes")


def winding_count(g, t: float, contour: Contour = Contour()) -> int:
    """Number of zeros of ``g(·, t)`` inside the contour, counted with multiplicity."""
    fam = ParamFamily.coerce(g)
    val = _converged_integrals(fam, t, contour, [0], 1e-6)[0]
    count = round(val.real)
    if abs(val - count) > 1e-3:
        raise QuadratureError(f"winding integral {val:.6g} is not near an integer")
    return int(count)


def zero_moments(g, t: float, contour: Contour = Contour(), m: int | None = None) -> np.ndarray:
    """Power sums ``p_1..p_m`` of the zeros inside the contour."""
    fam = ParamFamily.coerce(g)
    if m is None:
        m = winding_count(fam, t, contour)
    if m == 0:
        return np.zeros(0, dtype=complex)
    return _converged_integrals(fam, t, contour, range(1, m + 1), 1e-8)


def recover_zeros(power_sums: Sequence[complex], tol: float = 1e-6) -> np.ndarray:
    """Zeros from power sums via Newton's identities and companion eigenvalues.

    Sorted by (re, im).  A residual above ``tol`` on the reconstructed monic
    polynomial triggers a RecoveryWarning; the zeros are still returned.
    """
    p = np.asarray(power_sums, dtype=complex)
    m = len(p)
    if m == 0:
        raise ValueError("need at least one power sum")
    e = np.zeros(m + 1, dtype=complex)
    e[0] = 1.0
    for k in range(1, m + 1):
        acc = 0j
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e[k] = acc / k
    coeffs = np.array([(-1) ** k * e[k] for k in range(m + 1)])
    roots = np.roots(coeffs) if m > 1 else np.array([-coeffs[1]])
    resid = np.abs(np.polyval(coeffs, roots)).max() if roots.size else 0.0
    if resid > tol:
        warnings.warn(f"ill-conditioned zero recovery (residual {resid:.2e})", RecoveryWarning)
    return _lex_sorted(roots)


def _lex_sorted(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return z[np.lexsort((z.imag, z.real))] if z.size else z


def _match(prev, cur):
    """Reorder ``cur`` to follow ``prev`` by minimal total displacement."""
    if prev is None or len(prev) != len(cur) or len(cur) == 0:
        return _lex_sorted(cur)
    cost = np.abs(np.asarray(prev)[:, None] - np.asarray(cur)[None, :])
    _, cols = linear_sum_assignment(cost)
    return np.asarray(cur)[cols]


def _pairwise_discriminant(zeros):
    d = 1.0 + 0j
    for i in range(len(zeros)):
        for j in range(i + 1, len(zeros)):
            d *= (zeros[i] - zeros[j]) ** 2
    return d


def _discriminant(moments, zeros):
    if len(zeros) == 2:
        return 2 * moments[1] - moments[0] ** 2
    return _pairwise_discriminant(zeros)


def _boundary_of_zero_set(t, disc, tol):
    """Grid points on the boundary of ``{disc = 0}``, including crossings between samples."""
    small = np.abs(disc) < tol
    flags = np.zeros(len(t), dtype=bool)
    for i in range(len(t)):
        if small[i]:
            left = i > 0 and not small[i - 1]
            right = i + 1 < len(t) and not small[i + 1]
            if left or right:
                flags[i] = True
    for i in range(len(t) - 1):
        if small[i] or small[i + 1]:
            continue
        a, b = disc[i], disc[i + 1]
        d = b - a
        if d == 0:
            continue
        s = np.clip(-(np.conj(d) * a).real / abs(d) ** 2, 0.0, 1.0)
        if abs(a + s * d) < tol and 0.0 < s < 1.0:
            flags[i if s < 0.5 else i + 1] = True
    return flags


@dataclass
class ZeroTrajectory:
    t_grid: np.ndarray
    counts: np.ndarray
    moments: list
    zeros: list
    discriminant: np.ndarray
    branching_flags: np.ndarray
    heuristic: bool = False
    segments: list = field(default_factory=list)
    max_residual: float = 0.0

    @property
    def branching(self) -> np.ndarray:
        return self.t_grid[self.branching_flags]

    def to_csv(self) -> str:
        width = int(self.counts.max()) if len(self.counts) else 0
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["t", "count"]
        for j in range(width):
            header += [f"re_a{j + 1}", f"im_a{j + 1}"]
        w.writerow(header + ["branching"])
        for i, t in enumerate(self.t_grid):
            row = [repr(float(t)), int(self.counts[i])]
            z = self.zeros[i]
            for j in range(width):
                row += [repr(float(z[j].real)), repr(float(z[j].imag))] if j < len(z) else ["", ""]
            w.writerow(row + [int(self.branching_flags[i])])
        return buf.getvalue()


def branching_set(g, contour: Contour, t_grid: Sequence[float], mode: str = "pair",
                  tol: float = 1e-6) -> ZeroTrajectory:
    """Track the zeros of ``g(·, t)`` over ``t_grid`` and flag branching parameters.

    ``mode='pair'`` insists on exactly two zeros and uses ``2p2 - p1^2``;
    ``mode='general'`` accepts any count and uses the product of squared
    pairwise differences of the recovered zeros (flagged as heuristic).
    """
    fam = ParamFamily.coerce(g)
    t = np.asarray(t_grid, dtype=float)
    counts = np.array([winding_count(fam, ti, contour) for ti in t], dtype=int)
    if mode == "pair" and np.any(counts != 2):
        raise UnsupportedMultiplicityError("exact-pair branching needs winding count 2 on the whole grid")
    moments, zeros, disc = [], [], []
    prev = None
    resid = 0.0
    for ti, m in zip(t, counts):
        p = zero_moments(fam, ti, contour, m)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RecoveryWarning)
            z = recover_zeros(p) if m else np.zeros(0, dtype=complex)
        if prev is not None and len(prev) != len(z):
            prev = None
        z = _match(prev, z)
        prev = z
        if m:
            scale = max(1.0, float(np.abs(fam(contour.points()[0], ti)).max()))
            resid = max(resid, float(np.abs(fam(z, ti)).max()) / scale)
        moments.append(p)
        zeros.append(z)
        disc.append(_discriminant(p, z))
    disc = np.array(disc, dtype=complex)
    segments = []
    start = 0
    for i in range(1, len(t) + 1):
        if i == len(t) or counts[i] != counts[start]:
            segments.append((start, i))
            start = i
    flags = np.zeros(len(t), dtype=bool)
    for a, b in segments:
        if counts[a] >= 2:
            flags[a:b] = _boundary_of_zero_set(t[a:b], disc[a:b], tol)
    return ZeroTrajectory(t, counts, moments, zeros, disc, flags,
                          heuristic=(mode != "pair"), segments=segments, max_residual=resid)


# -- boundary faces: E, B and the disjoint cover -------------------------

@dataclass(frozen=True)
class Box:
    """Open box ``|Re z - x| < w, |Im z - y| < w, |s - s0| < w`` (s mod 2π)."""

    center: tuple
    half_width: float

    def contains(self, z: complex, s: float, closed: bool = False) -> bool:
        x, y, s0 = self.center
        ds = abs((s - s0 + math.pi) % (2 * math.pi) - math.pi)
        dist = max(abs(z.real - x), abs(z.imag - y), ds)
        return dist <= self.half_width if closed else dist < self.half_width

    def boundary_distance(self, z: complex, s: float) -> float:
        x, y, s0 = self.center
        ds = abs((s - s0 + math.pi) % (2 * math.pi) - math.pi)
        return abs(max(abs(z.real - x), abs(z.imag - y), ds) - self.half_width)

    @property
    def diameter(self) -> float:
        return 2 * self.half_width * math.sqrt(3)


@dataclass
class BoundaryCover:
    face: int
    delta: float
    arcs: list                    # (s_start, s_end, generator index)
    e_samples: list               # (z, s)
    b_samples: list               # (z, s)
    boxes: list                   # Box, in greedy order
    approximate: bool = True

    @property
    def collar_radius(self) -> float:
        return 1.0 - self.delta

    def member(self, z: complex, s: float):
        """Index of the cover set containing (z, s): 1..k for boxes, 0 for the collar, None if uncovered.

        ``U_i`` is box i minus the closures of earlier boxes; ``U_0`` is the
        collar ``|z| > 1 - delta`` minus the closures of all boxes.
        """
        for i, b in enumerate(self.boxes):
            if b.contains(z, s):
                if any(prev.contains(z, s, closed=True) for prev in self.boxes[:i]):
                    return None
                return i + 1
        if abs(z) > self.collar_radius and not any(b.contains(z, s, closed=True) for b in self.boxes):
            return 0
        return None

    def to_json(self) -> dict:
        return {
            "face": f"z{self.face + 1}",
            "delta": self.delta,
            "approximate": self.approximate,
            "arcs": [{"start": a, "end": b, "generator": j + 1} for a, b, j in self.arcs],
            "collar": {"inner_radius": self.collar_radius},
            "boxes": [{"center": list(b.center), "half_widths": [b.half_width] * 3}
                      for b in self.boxes],
            "e_samples": [[z.real, z.imag, s] for z, s in self.e_samples],
            "b_samples": [[z.real, z.imag, s] for z, s in self.b_samples],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _unit_roots(cond: HoloPoly, var: int, tol=1e-8):
    if cond.is_constant():
        return []
    coef = cond.numeric_univariate(var, {1 - var: 0.0})
    return [complex(r) for r in np.roots(coef) if abs(abs(r) - 1) < tol]


def _in_arc(angle: float, a: float, b: float) -> bool:
    x = (angle - a) % (2 * math.pi)
    return x <= (b - a) + 1e-12


def _face_representatives(hmap: PluriharmonicMap, face: int):
    """Per generator: (∂g_j/∂z_free, exact condition polynomial or None if ≡ 0)."""
    free = 1 - face
    reps = []
    for h in hmap.funcs:
        d = h.g.derivative(free)
        cond = pa.gcd_many(d.coeffs_in(free).values())
        reps.append((d, cond))
    return reps


def _fiber_zeros(fam: ParamFamily, s: float, radius: float):
    for r in (radius, radius * (1 - 1e-3), radius * (1 + 1e-3), radius * (1 - 1e-2)):
        try:
            c = Contour(0j, r)
            m = winding_count(fam, s, c)
            if m == 0:
                return np.zeros(0, dtype=complex)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RecoveryWarning)
                z = recover_zeros(zero_moments(fam, s, c, m))
            return z
        except ContourTooCloseError:
            continue
    raise ContourTooCloseError(f"no usable contour near radius {radius:g} at s={s:g}")


def boundary_zero_cover(hmap: PluriharmonicMap, face: int, arc_count: int = 8, delta: float = 0.2,
                        samples_per_arc: int = 9) -> BoundaryCover:
    """Sampled E and B on the face ``{|z_face| = 1}`` and a disjoint cover of B.

    Arcs split the circle evenly; each arc gets the first generator whose
    face representative has no identically-vanishing fiber on the closed
    arc (an exact coefficient-gcd check).  E is sampled by tracking zeros in
    ``|z| < 1 - delta/2``; B is approximated by the fibers over arc
    endpoints plus detected branching parameters.
    """
    if hmap.n != 2:
        raise pa.PolyError("boundary covers are defined for the bidisk")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    reps = _face_representatives(hmap, face)
    bad_angles = []
    for d, cond in reps:
        if cond is None:
            bad_angles.append(None)
        else:
            bad_angles.append([math.atan2(r.imag, r.real) for r in _unit_roots(cond, face)])
    edges = [2 * math.pi * i / arc_count for i in range(arc_count + 1)]
    arcs = []
    for i in range(arc_count):
        a, b = edges[i], edges[i + 1]
        choice = None
        for j, bad in enumerate(bad_angles):
            if bad is None:
                continue
            if not any(_in_arc(x, a, b) for x in bad):
                choice = j
                break
        if choice is None:
            raise FaceDiskError(f"no generator is non-holomorphic on every face disk of arc [{a:.4g}, {b:.4g}]")
        arcs.append((a, b, choice))

    radius = 1.0 - delta / 2
    e_samples, b_samples = [], []
    for a, b, j in arcs:
        fam = ParamFamily.on_face(reps[j][0], face)
        ss = np.linspace(a, b, samples_per_arc)
        fibers = [_fiber_zeros(fam, s, radius) for s in ss]
        for s, zs in zip(ss, fibers):
            e_samples.extend((complex(z), float(s)) for z in zs)
        for s in (ss[0], ss[-1]):
            b_samples.extend((complex(z), float(s)) for z in fibers[0 if s == ss[0] else -1])
        counts = [len(z) for z in fibers]
        if len(set(counts)) == 1 and counts[0] >= 2:
            disc = np.array([_pairwise_discriminant(z) for z in fibers])
            flags = _boundary_of_zero_set(ss, disc, 1e-6)
            for s, zs, f in zip(ss, fibers, flags):
                if f:
                    b_samples.extend((complex(z), float(s)) for z in zs)
        elif len(set(counts)) > 1:
            # a zero crossed the contour: keep the whole fiber where the count changes
            for k in range(1, len(ss)):
                if counts[k] != counts[k - 1]:
                    b_samples.extend((complex(z), float(ss[k])) for z in fibers[k])
    b_samples = _dedupe(b_samples)
    e_samples = _dedupe(e_samples)
    boxes = _greedy_boxes(b_samples, delta)
    return BoundaryCover(face, delta, arcs, e_samples, b_samples, boxes)


def _dedupe(samples, tol=1e-9):
    out = []
    for z, s in samples:
        s = s % (2 * math.pi)
        if not any(abs(z - z2) < tol and abs((s - s2 + math.pi) % (2 * math.pi) - math.pi) < tol
                   for z2, s2 in out):
            out.append((z, s))
    return out


def _greedy_boxes(b_samples, delta):
    inner = [(z, s) for z, s in b_samples if abs(z) <= 1 - delta]
    w0 = 0.99 * delta / (2 * math.sqrt(3))
    boxes: list[Box] = []
    for z, s in inner:
        if any(b.contains(z, s) for b in boxes):
            continue
        for shrink in (1.0, 0.9, 0.8, 0.7, 0.6, 0.5):
            cand = Box((z.real, z.imag, s), w0 * shrink)
            if all(cand.boundary_distance(z2, s2) > 1e-9 for z2, s2 in b_samples):
                break
        boxes.append(cand)
    return boxes
