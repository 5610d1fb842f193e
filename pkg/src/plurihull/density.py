"""Empirical density experiments and graph-separation certificates.

Grids are deterministic functions of (kind, resolution).  Fits are plain
least squares on column-normalised generator-monomial values, solved with a
pivoted-QR (rank revealing) LAPACK driver; the reported sup residual is
measured on a strictly finer validation grid.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

from .pluriharmonic import PluriharmonicMap

__all__ = [
    "SampleDomain",
    "DomainError",
    "BasisSizeError",
    "DegenerateBasisError",
    "OutsideDomainError",
    "GeneratorBasis",
    "FitResult",
    "DensityReport",
    "SeparationCertificate",
    "STANDARD_TARGETS",
    "sample_domain",
    "generator_basis",
    "fit_residual",
    "decay_report",
    "separation_certificate",
    "target_function",
]

KINDS = ("ClosedBidisk", "Torus2", "ClosedDisk", "FiberDisk", "Face")
RCOND = 1e-10
BASIS_CAP = 5000


class DomainError(ValueError):
    pass


class BasisSizeError(ValueError):
    pass


class DegenerateBasisError(ValueError):
    pass


class OutsideDomainError(ValueError):
    """Query point outside the closed domain: trivially not in the hull."""


@dataclass(frozen=True)
class SampleDomain:
    kind: str
    resolution: int = 32
    a: complex = 0j          # FiberDisk / Face parameter
    var: int = 0             # Face: frozen variable (0 -> z1 = a)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if self.kind == "Face" and abs(abs(self.a) - 1) > 1e-12:
            raise DomainError("a face parameter must lie on the unit circle")
        if self.kind == "FiberDisk" and abs(self.a) > 1 + 1e-12:
            raise DomainError("fiber disk parameter must lie in the closed disk")

    @property
    def n(self) -> int:
        return 1 if self.kind == "ClosedDisk" else 2

    def with_resolution(self, r: int) -> "SampleDomain":
        return SampleDomain(self.kind, r, self.a, self.var)

    def contains(self, z, tol: float = 1e-12) -> bool:
        z = np.asarray(z, dtype=complex).ravel()
        if self.kind == "Torus2":
            return bool(np.all(np.abs(np.abs(z) - 1) <= tol))
        if self.kind == "FiberDisk":
            return abs(z[0] - self.a) <= tol and abs(z[1]) <= 1 + tol
        if self.kind == "Face":
            free = 1 - self.var
            return abs(z[self.var] - self.a) <= tol and abs(z[free]) <= 1 + tol
        return bool(np.all(np.abs(z) <= 1 + tol))

    def describe(self) -> dict:
        d = {"kind": self.kind, "resolution": self.resolution}
        if self.kind in ("FiberDisk", "Face"):
            d["a"] = [self.a.real, self.a.imag]
        if self.kind == "Face":
            d["var"] = f"z{self.var + 1}"
        return d


def _levels(res: int) -> int:
    return max(2, res // 4)


def disk_grid(res: int) -> np.ndarray:
    """Centre plus ``res`` equispaced angles on shifted-Chebyshev radii ending at r = 1."""
    L = _levels(res)
    k = np.arange(1, L + 1)
    radii = (1 - np.cos(np.pi * k / L)) / 2
    ang = np.exp(2j * np.pi * np.arange(res) / res)
    return np.concatenate([[0j], (radii[:, None] * ang[None, :]).ravel()])


def circle_grid(res: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(res) / res)


def sample_domain(domain: SampleDomain) -> np.ndarray:
    """Points as an ``(m, n)`` complex array."""
    r = domain.resolution
    if r < 8:
        raise DomainError("resolution must be at least 8")
    if domain.kind == "ClosedDisk":
        return disk_grid(r)[:, None]
    if domain.kind == "Torus2":
        c = circle_grid(r)
        a, b = np.meshgrid(c, c, indexing="ij")
        return np.stack([a.ravel(), b.ravel()], axis=1)
    if domain.kind == "ClosedBidisk":
        d = disk_grid(r)
        a, b = np.meshgrid(d, d, indexing="ij")
        return np.stack([a.ravel(), b.ravel()], axis=1)
    d = disk_grid(r)
    fixed = np.full_like(d, domain.a)
    if domain.kind == "FiberDisk" or domain.var == 0:
        return np.stack([fixed, d], axis=1)
    return np.stack([d, fixed], axis=1)


# -- bases -----------------------------------------------------------------

@dataclass
class GeneratorBasis:
    """Monomials of total degree <= d in the symbols (coordinates, then generators)."""

    symbols: list            # descriptions
    funcs: list              # callables points -> values
    degree: int
    exponents: list

    def __len__(self):
        return len(self.exponents)

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        vals = [f(pts) for f in self.funcs]
        out = np.empty((pts.shape[0], len(self.exponents)), dtype=complex)
        powers = []
        for v in vals:
            p = [np.ones(pts.shape[0], dtype=complex)]
            for _ in range(self.degree):
                p.append(p[-1] * v)
            powers.append(p)
        for col, e in enumerate(self.exponents):
            acc = np.ones(pts.shape[0], dtype=complex)
            for s, k in enumerate(e):
                if k:
                    acc = acc * powers[s][k]
            out[:, col] = acc
        return out

    def describe(self) -> list[str]:
        out = []
        for e in self.exponents:
            parts = [f"{s}^{k}" if k > 1 else s for s, k in zip(self.symbols, e) if k]
            out.append("*".join(parts) or "1")
        return out


def _coord(i):
    return lambda pts: pts[:, i]


def _gen(h):
    return lambda pts: h(pts)


def _exponents(m: int, d: int) -> list:
    out = []
    for total in range(d + 1):
        for e in itertools.product(range(total + 1), repeat=m):
            if sum(e) == total:
                out.append(e)
    # graded, reverse-lex inside a degree so z1 comes first
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


def generator_basis(hmap: PluriharmonicMap | None, degree: int, n: int | None = None,
                    cap: int = BASIS_CAP) -> GeneratorBasis:
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if hmap is None and n is None:
        raise ValueError("need a map or a variable count")
    n = hmap.n if hmap is not None else n
    names = ["z"] if n == 1 else [f"z{i + 1}" for i in range(n)]
    funcs = [_coord(i) for i in range(n)]
    seen = set()
    if hmap is not None:
        for j, h in enumerate(hmap.funcs):
            # a generator equal to a coordinate (h = z_k exactly) adds nothing
            if h.g.is_zero() and h.f.degree() == 1 and len(h.f.terms) == 1:
                (e, c), = h.f.terms.items()
                if c == 1:
                    continue
            if h.g.is_constant() and h.f.is_constant():
                continue  # constants are already in the span
            key = (h.g.to_text(), h.f.to_text())
            if key in seen:
                continue
            seen.add(key)
            names.append(f"h{j + 1}")
            funcs.append(_gen(h))
    m = len(names)
    size = math.comb(m + degree, degree)
    if size > cap:
        raise BasisSizeError(f"basis of degree {degree} in {m} symbols has {size} elements (cap {cap})")
    return GeneratorBasis(names, funcs, degree, _exponents(m, degree))


# -- fitting ---------------------------------------------------------------

@dataclass
class FitResult:
    train_residual: float
    sup_residual: float
    rank: int

    def __iter__(self):
        return iter((self.train_residual, self.sup_residual))


def _values(target, points) -> np.ndarray:
    return np.asarray(target(np.asarray(points, dtype=complex)), dtype=complex).ravel()


def fit_residual(basis: GeneratorBasis, target: Callable, train, validate,
                 chunk: int = 8192) -> FitResult:
    """Least-squares fit on ``train``; RMS residual there, sup residual on ``validate``."""
    train = np.asarray(train, dtype=complex)
    if train.shape[0] < 2 * len(basis):
        raise ValueError(f"need at least {2 * len(basis)} training points, got {train.shape[0]}")
    A = basis.evaluate(train)
    y = _values(target, train)
    norms = np.linalg.norm(A, axis=0)
    keep = norms > 0
    if not keep.any():
        raise DegenerateBasisError("every basis column vanishes on the training grid")
    A = A[:, keep] / norms[keep]
    coef, _, rank, _ = linalg.lstsq(A, y, cond=RCOND, lapack_driver="gelsy")
    if rank < 1:
        raise DegenerateBasisError("rank collapsed below 1")
    train_res = float(np.linalg.norm(A @ coef - y) / math.sqrt(len(y)))
    full = np.zeros(len(basis), dtype=complex)
    full[keep] = coef / norms[keep]
    validate = np.asarray(validate, dtype=complex)
    sup = 0.0
    for s in range(0, validate.shape[0], chunk):
        pts = validate[s:s + chunk]
        r = basis.evaluate(pts) @ full - _values(target, pts)
        sup = max(sup, float(np.max(np.abs(r))))
    return FitResult(train_res, sup, int(rank))


# -- targets ---------------------------------------------------------------

BUMP_CENTER = (0.25, -0.25)


def _bump(pts):
    c = np.asarray(BUMP_CENTER[: pts.shape[1]], dtype=complex)
    r2 = np.sum(np.abs(pts - c) ** 2, axis=1)
    return np.exp(-4.0 * r2)


STANDARD_TARGETS = {
    "conj_z1": lambda p: np.conj(p[:, 0]),
    "conj_z2": lambda p: np.conj(p[:, 1]),
    "abs_z1_sq_conj_z2": lambda p: np.abs(p[:, 0]) ** 2 * np.conj(p[:, 1]),
    "bump": _bump,
}


def target_function(name: str) -> Callable:
    try:
        return STANDARD_TARGETS[name]
    except KeyError:
        raise ValueError(f"unknown target {name!r}; known: {sorted(STANDARD_TARGETS)}") from None


def default_targets(n: int) -> list[str]:
    return ["conj_z1", "bump"] if n == 1 else list(STANDARD_TARGETS)


# -- reports ---------------------------------------------------------------

@dataclass
class DensityReport:
    generators: str
    domain: dict
    targets: list
    degrees: list
    train_residuals: np.ndarray
    sup_residuals: np.ndarray
    stability: np.ndarray
    resolution: int
    validation_resolution: int
    notes: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["target", "degree", "train_residual", "sup_residual"])
        for i, t in enumerate(self.targets):
            for k, d in enumerate(self.degrees):
                w.writerow([t, d, repr(float(self.train_residuals[i, k])),
                            repr(float(self.sup_residuals[i, k]))])
        return buf.getvalue()

    def to_json(self) -> dict:
        def clean(m):
            return [[None if not np.isfinite(x) else float(x) for x in row] for row in m]

        return {
            "generators": self.generators,
            "domain": self.domain,
            "targets": list(self.targets),
            "degrees": list(self.degrees),
            "resolution": self.resolution,
            "validation_resolution": self.validation_resolution,
            "train_residuals": clean(self.train_residuals),
            "sup_residuals": clean(self.sup_residuals),
            "stability": clean(self.stability),
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _grid_size(domain: SampleDomain) -> int:
    r = domain.resolution
    if domain.kind == "Torus2":
        return r * r
    per = 1 + r * _levels(r)
    return per * per if domain.kind == "ClosedBidisk" else per


def _run(hmap, domain, targets, degrees, resolution, cap=BASIS_CAP):
    train = sample_domain(domain.with_resolution(resolution))
    validate = sample_domain(domain.with_resolution(2 * resolution))
    tr = np.zeros((len(targets), len(degrees)))
    sup = np.zeros_like(tr)
    for k, d in enumerate(degrees):
        basis = generator_basis(hmap, d, n=domain.n, cap=cap)
        for i, t in enumerate(targets):
            f = target_function(t) if isinstance(t, str) else t
            res = fit_residual(basis, f, train, validate)
            tr[i, k], sup[i, k] = res.train_residual, res.sup_residual
    return tr, sup


def decay_report(hmap: PluriharmonicMap | None, domain: SampleDomain, targets: Sequence | None = None,
                 degrees: Sequence[int] = (2, 4, 6, 8, 10, 12), stability: bool = True,
                 max_cells: float = 6e7, cap: int = BASIS_CAP) -> DensityReport:
    """Residual table over (target, degree) plus a doubled-resolution rerun.

    The training resolution is raised (by steps of 4) until the largest basis
    has at least two training points per element.  The stability rerun is
    skipped, with a note, when its largest least-squares matrix would exceed
    ``max_cells`` entries.
    """
    degrees = list(degrees)
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("degrees must be strictly increasing")
    targets = list(targets) if targets is not None else default_targets(domain.n)
    notes = []
    top = len(generator_basis(hmap, degrees[-1], n=domain.n, cap=cap))
    res = domain.resolution
    while _grid_size(domain.with_resolution(res)) < 2 * top:
        res += 4
    if res != domain.resolution:
        notes.append(f"training resolution raised from {domain.resolution} to {res} "
                     f"for {top} basis elements")
    tr, sup = _run(hmap, domain, targets, degrees, res, cap)
    stab = np.full_like(sup, np.nan)
    if stability:
        cells = _grid_size(domain.with_resolution(2 * res)) * top
        if cells <= max_cells:
            _, sup2 = _run(hmap, domain, targets, degrees, 2 * res, cap)
            stab = np.abs(sup2 - sup) / np.maximum(sup, 1e-300)
        else:
            notes.append(f"stability rerun skipped: {cells:.3g} matrix entries exceed budget {max_cells:.3g}")
    names = [t if isinstance(t, str) else getattr(t, "__name__", "custom") for t in targets]
    gens = hmap.describe() if hmap is not None else "()"
    return DensityReport(gens, domain.describe(), names, degrees, tr, sup, stab, res, 2 * res, notes)


# -- separation certificates --------------------------------------------------

@dataclass
class SeparationCertificate:
    j: int               # 0-based generator index
    theta: float
    value_at_query: float
    graph_max: float
    margin: float

    def __call__(self, hmap: PluriharmonicMap, z, w) -> np.ndarray:
        """``Re(e^{iθ}(w_j - h_j(z)))`` at rows of z and w."""
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        w = np.atleast_2d(np.asarray(w, dtype=complex))
        return np.real(np.exp(1j * self.theta) * (w[:, self.j] - hmap.funcs[self.j](z)))

    def to_json(self) -> dict:
        return {"generator": self.j + 1, "theta": self.theta, "value_at_query": self.value_at_query,
                "graph_max": self.graph_max, "margin": self.margin}


_GOLD = (math.sqrt(5) - 1) / 2


def _golden_max(f, a, b, iters=60):
    c, d = b - _GOLD * (b - a), a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
    return (a + b) / 2


def separation_certificate(hmap: PluriharmonicMap, z0, w0, graph_samples=None,
                           domain: SampleDomain | None = None, phases: int = 64,
                           tol: float = 1e-8) -> SeparationCertificate | None:
    """Certificate that (z0, w0) is outside the hull of the graph of h, or None."""
    z0 = np.asarray(z0, dtype=complex).ravel()
    w0 = np.asarray(w0, dtype=complex).ravel()
    if domain is None:
        domain = SampleDomain("ClosedBidisk" if hmap.n == 2 else "ClosedDisk", 16)
    if z0.size != hmap.n or w0.size != hmap.N:
        raise ValueError("query dimensions do not match the map")
    if not domain.contains(z0):
        raise OutsideDomainError("query base point lies outside the closed domain")
    diff = w0 - hmap(z0[None, :])[0]
    if np.max(np.abs(diff)) <= 1e-10:
        return None
    grid = 2 * np.pi * np.arange(phases) / phases
    vals = np.real(np.exp(1j * grid)[None, :] * diff[:, None])
    j, k = np.unravel_index(int(np.argmax(vals)), vals.shape)
    dj = diff[j]
    step = 2 * np.pi / phases
    theta = _golden_max(lambda t: float(np.real(np.exp(1j * t) * dj)), grid[k] - step, grid[k] + step)
    theta = float(math.remainder(theta, 2 * math.pi))
    value = float(np.real(np.exp(1j * theta) * dj))
    if graph_samples is None:
        graph_samples = sample_domain(domain)
    zs = np.atleast_2d(np.asarray(graph_samples, dtype=complex))
    # on the graph w = h(z), so the certificate function vanishes there up to rounding
    ws = hmap(zs)
    graph_max = float(np.max(np.real(np.exp(1j * theta) * (ws[:, j] - hmap.funcs[j](zs)))))
    margin = value - graph_max
    if margin <= tol:
        return None
    return SeparationCertificate(int(j), theta, value, graph_max, margin)
