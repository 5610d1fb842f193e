"""Problem files and the ``plurihull`` command line.

A problem file is UTF-8 ``key = value`` lines; ``#`` starts a comment.

    domain = torus                  # bidisk | torus | disk      (required)
    g = z1 + z2, f = 0              # one generator Re(g) + f; f optional
    f = z1^2                        # f on its own line attaches to the g line above,
                                    # otherwise it is a holomorphic generator
    degrees = 2..12:2
    resolution = 32
    tol = 1e-8
    targets = conj_z1, bump
    density_domain = fiber:0        # bidisk | torus | disk | fiber:<a> | face:z1:<a>
    basis_cap = 5000
    query = 0.5, 0.5 | 1j           # z coordinates | w coordinates (certify)
    track = z1^2 - z2               # polynomial in z = z1 and real parameter t = z2
    t_range = -0.25..0.25:101
    contour_radius = 1
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import density as dn
from . import obstruction as ob
from . import zero_tracker as zt
from .pluriharmonic import PluriharmonicFn, PluriharmonicMap
from .polyalg import HoloPoly, PolyError, PolyParseError, parse_poly

__all__ = ["ProblemFile", "ProblemError", "parse_problem", "serialize_problem", "run", "main"]

DOMAINS = {"bidisk": "ClosedBidisk", "torus": "Torus2", "disk": "ClosedDisk"}
KEYS = ("domain", "g", "f", "degrees", "resolution", "tol", "targets", "density_domain",
        "basis_cap", "query", "track", "t_range", "contour_radius")
FILES = {"analyze": ["verdict.json"], "density": ["density.csv", "density.json"],
         "track-zeros": ["zeros.csv"], "certify": ["certificates.json"], "stratify": ["strata.json"]}


class ProblemError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass
class ProblemFile:
    domain: str
    generators: list                       # (g, f) HoloPoly pairs
    degrees: tuple = (2, 4, 6, 8, 10, 12)
    resolution: int = 32
    tol: float = 1e-8
    targets: tuple | None = None
    density_domain: str | None = None
    basis_cap: int = dn.BASIS_CAP
    queries: list = field(default_factory=list)   # (z tuple, w tuple)
    track: HoloPoly | None = None
    t_range: tuple = (-0.25, 0.25, 101)
    contour_radius: float = 1.0

    @property
    def n(self) -> int:
        return 1 if self.domain == "disk" else 2

    def hmap(self) -> PluriharmonicMap:
        return PluriharmonicMap(self.n, [PluriharmonicFn(g, f) for g, f in self.generators])

    def sample_domain(self, resolution: int | None = None) -> dn.SampleDomain:
        r = resolution or self.resolution
        name = self.density_domain or self.domain
        if name in DOMAINS:
            return dn.SampleDomain(DOMAINS[name], r)
        parts = name.split(":")
        if parts[0] == "fiber":
            return dn.SampleDomain("FiberDisk", r, a=_complex(parts[1]))
        return dn.SampleDomain("Face", r, a=_complex(parts[2]), var=int(parts[1][1:]) - 1)


def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    t = re.sub(r"(?<![0-9.eE])i\b", "1j", t).replace("i", "j")
    return complex(t)


def _fmt_complex(c: complex) -> str:
    return repr(complex(c)).strip("()")


def _parse_degrees(text: str) -> tuple:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*(?::\s*(\d+))?\s*", text)
    if m:
        a, b, step = int(m[1]), int(m[2]), int(m[3] or 1)
        if step < 1 or b < a:
            raise ValueError("degree range must be increasing with positive step")
        return tuple(range(a, b + 1, step))
    vals = tuple(int(x) for x in text.split(","))
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError("degrees must be strictly increasing")
    return vals


def _parse_range(text: str) -> tuple:
    try:
        a, rest = text.split("..")
        b, count = rest.split(":")
        return float(a), float(b), int(count)
    except ValueError:
        raise ValueError("expected a..b:count") from None


def _poly(text: str, n: int, line: int, col: int) -> HoloPoly:
    try:
        return parse_poly(text, n)
    except PolyParseError as exc:
        m = re.search(r"column (\d+)", str(exc))
        lead = len(text) - len(text.lstrip())
        c = col
        if m:
            body, idx = text.strip(), int(m[1]) - 1
            while idx < len(body) and body[idx].isspace():
                idx += 1
            c = col + lead + idx
        raise ProblemError(f"malformed polynomial: {exc}", line, c) from None
    except PolyError as exc:
        raise ProblemError(f"malformed polynomial: {exc}", line, col) from None


def parse_problem(text: str) -> ProblemFile:
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            raise ProblemError("expected 'key = value'", lineno, len(body) - len(body.lstrip()) + 1)
        key, value = body.split("=", 1)
        key_s = key.strip()
        if key_s not in KEYS:
            raise ProblemError(f"unknown key {key_s!r}", lineno, len(key) - len(key.lstrip()) + 1)
        raw.append((lineno, key_s, value, len(key) + 2))
    doms = [r for r in raw if r[1] == "domain"]
    if not doms:
        raise ProblemError("missing domain")
    lineno, _, value, col = doms[-1]
    domain = value.strip()
    if domain not in DOMAINS:
        raise ProblemError(f"unknown domain {domain!r} (bidisk, torus, disk)", lineno, col)
    n = 1 if domain == "disk" else 2
    prob = ProblemFile(domain, [])
    last_g = None   # index of a generator whose f may still be attached
    for lineno, key, value, col in raw:
        try:
            if key == "domain":
                continue
            if key == "g":
                m = re.search(r",\s*f\s*=", value)
                gtext, ftext = (value[:m.start()], value[m.end():]) if m else (value, None)
                g = _poly(gtext, n, lineno, col)
                f = _poly(ftext, n, lineno, col + m.end()) if m else HoloPoly.zero(n)
                prob.generators.append((g, f))
                last_g = None if m else len(prob.generators) - 1
            elif key == "f":
                f = _poly(value, n, lineno, col)
                if last_g is not None:
                    prob.generators[last_g] = (prob.generators[last_g][0], f)
                else:
                    prob.generators.append((HoloPoly.zero(n), f))
                last_g = None
                continue
            elif key == "degrees":
                prob.degrees = _parse_degrees(value)
            elif key == "resolution":
                prob.resolution = int(value)
            elif key == "tol":
                prob.tol = float(value)
            elif key == "targets":
                names = tuple(t.strip() for t in value.split(",") if t.strip())
                for t in names:
                    dn.target_function(t)
                prob.targets = names
            elif key == "density_domain":
                prob.density_domain = value.strip()
                prob.sample_domain()
            elif key == "basis_cap":
                prob.basis_cap = int(value)
            elif key == "query":
                zs, ws = value.split("|")
                prob.queries.append((tuple(_complex(x) for x in zs.split(",")),
                                     tuple(_complex(x) for x in ws.split(","))))
            elif key == "track":
                prob.track = _poly(value, 2, lineno, col)
            elif key == "t_range":
                prob.t_range = _parse_range(value)
            elif key == "contour_radius":
                prob.contour_radius = float(value)
            if key != "g":
                last_g = None
        except ProblemError:
            raise
        except (ValueError, IndexError) as exc:
            raise ProblemError(f"bad value for {key}: {exc}", lineno, col) from None
    if not prob.generators:
        raise ProblemError("missing generator (g = ...)")
    return prob


def serialize_problem(p: ProblemFile) -> str:
    """Canonical text; ``parse_problem(serialize_problem(p)) == p``."""
    lines = [f"domain = {p.domain}"]
    for g, f in p.generators:
        lines.append(f"g = {g.to_text()}, f = {f.to_text()}")
    lines.append("degrees = " + ", ".join(str(d) for d in p.degrees))
    lines.append(f"resolution = {p.resolution}")
    lines.append(f"tol = {p.tol!r}")
    if p.targets is not None:
        lines.append("targets = " + ", ".join(p.targets))
    if p.density_domain is not None:
        lines.append(f"density_domain = {p.density_domain}")
    lines.append(f"basis_cap = {p.basis_cap}")
    for z, w in p.queries:
        lines.append("query = " + ", ".join(map(_fmt_complex, z)) + " | " + ", ".join(map(_fmt_complex, w)))
    if p.track is not None:
        lines.append(f"track = {p.track.to_text()}")
    a, b, c = p.t_range
    lines.append(f"t_range = {a!r}..{b!r}:{c}")
    lines.append(f"contour_radius = {p.contour_radius!r}")
    return "\n".join(lines) + "\n"


# -- running ---------------------------------------------------------------

def _write(out: str, name: str, text: str):
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, name), "w", encoding="utf-8") as fh:
        fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _analyze(p: ProblemFile, out: str) -> int:
    v = ob.analyze(p.hmap(), DOMAINS[p.domain])
    _write(out, "verdict.json", _dumps(v.to_json()))
    return 2 if v.kind == "Inconclusive" else 0


def _density(p: ProblemFile, out: str) -> int:
    hmap = p.hmap()
    dom = p.sample_domain()
    rep = dn.decay_report(hmap, dom, p.targets, p.degrees, cap=p.basis_cap)
    _write(out, "density.csv", rep.to_csv())
    _write(out, "density.json", rep.dumps() + "\n")
    return 0


def _track(p: ProblemFile, out: str) -> int:
    if p.track is None:
        raise ProblemError("track-zeros needs a 'track' polynomial")
    a, b, count = p.t_range
    grid = np.linspace(a, b, count)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", zt.RecoveryWarning)
        traj = zt.branching_set(p.track, zt.Contour(0j, p.contour_radius), grid)
    _write(out, "zeros.csv", traj.to_csv())
    return 0


def _certify(p: ProblemFile, out: str) -> int:
    hmap = p.hmap()
    dom = dn.SampleDomain(DOMAINS[p.domain], 16)
    rows = []
    for z, w in p.queries:
        entry = {"z": [[c.real, c.imag] for c in z], "w": [[c.real, c.imag] for c in w]}
        try:
            cert = dn.separation_certificate(hmap, z, w, domain=dom, tol=p.tol)
            entry["status"] = "certificate" if cert else "none"
            entry["certificate"] = cert.to_json() if cert else None
        except dn.OutsideDomainError:
            entry["status"] = "outside_domain"
            entry["certificate"] = None
        rows.append(entry)
    _write(out, "certificates.json", _dumps({"queries": rows}))
    return 0


def _stratify(p: ProblemFile, out: str) -> int:
    try:
        s = ob.stratify(p.hmap(), DOMAINS[p.domain])
        body = {"aborted": None, **s.to_json()}
    except ob.StratificationAborted as exc:
        body = {"aborted": exc.reason,
                "component": exc.component.to_text() if exc.component is not None else None}
    _write(out, "strata.json", _dumps(body))
    return 0


RUNNERS = {"analyze": _analyze, "density": _density, "track-zeros": _track,
           "certify": _certify, "stratify": _stratify}


def run(subcommand: str, problem: ProblemFile, out: str = ".") -> int:
    """Run one subcommand, writing its fixed-name artifacts under ``out``; returns the exit status."""
    if subcommand not in RUNNERS:
        print(f"error: unknown subcommand {subcommand!r}", file=sys.stderr)
        return 1
    try:
        return RUNNERS[subcommand](problem, out)
    except (ValueError, ArithmeticError, RuntimeError, zt.ZeroTrackingError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="plurihull", description=__doc__.splitlines()[0])
    ap.add_argument("subcommand", choices=sorted(RUNNERS))
    ap.add_argument("--problem", required=True, help="problem file")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--degrees", help="a..b:step")
    ap.add_argument("--resolution", type=int)
    ap.add_argument("--tol", type=float)
    args = ap.parse_args(argv)
    try:
        with open(args.problem, encoding="utf-8") as fh:
            prob = parse_problem(fh.read())
        if args.degrees:
            prob = replace(prob, degrees=_parse_degrees(args.degrees))
        if args.resolution:
            prob = replace(prob, resolution=args.resolution)
        if args.tol is not None:
            prob = replace(prob, tol=args.tol)
    except (OSError, ProblemError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(args.subcommand, prob, args.out)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
