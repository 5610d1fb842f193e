import numpy as np
import pytest

from plurihull import obstruction as ob
from plurihull import polyalg as pa
from plurihull.pluriharmonic import PluriharmonicFn, PluriharmonicMap, minor_system
from plurihull.polyalg import HoloPoly, parse_poly as P

M = PluriharmonicMap.from_real_parts


class _FakeMinors:
    """Minimal stand-in carrying a chosen set of minors."""

    def __init__(self, *texts):
        self.n = 2
        self.minors = {((0, i + 1), (0, 1)): P(t) if t != "0" else HoloPoly.zero(2)
                       for i, t in enumerate(texts)}


def test_common_zero_set_singleton():
    dec = ob.common_zero_set(_FakeMinors("z1 z2"))
    assert dec.one_dim == P("z1 z2")
    assert set(dec.one_dim_factors) == {P("z1"), P("z2")}
    assert dec.zero_dim == [] and not dec.everything_flag


def test_common_zero_set_all_zero():
    assert ob.common_zero_set(_FakeMinors("0", "0")).everything_flag


def test_common_zero_set_isolated_point():
    dec = ob.common_zero_set(_FakeMinors("z1", "z2"))
    assert dec.one_dim == HoloPoly.one(2)
    assert len(dec.zero_dim) == 1 and np.allclose(dec.zero_dim[0], (0, 0))


def test_common_zero_set_restricted_to_bidisk():
    # common zeros: z1 = 1/2 with z2 = +-1/2, and z1 = 3 (outside)
    dec = ob.common_zero_set(_FakeMinors("z1^2 - 7/2 z1 + 3/2",   # (z1 - 1/2)(z1 - 3)
                                         "z2^2 - 1/4"))
    pts = sorted((round(a.real, 9), round(b.real, 9)) for a, b in dec.zero_dim)
    assert pts == [(0.5, -0.5), (0.5, 0.5)]


def test_common_zero_set_factors_divide():
    dec = ob.common_zero_set(minor_system(M("z1^2 z2", "z2^3 + z1"), 2))
    for f in dec.one_dim_factors:
        assert pa.divides(f, dec.one_dim)


def test_holomorphic_along_curve_examples():
    assert ob.holomorphic_along_curve(M("z1 z2", "z1"), P("z1"))
    assert not ob.holomorphic_along_curve(M("z1^2", "z2^2"), P("z1"))
    hol = PluriharmonicMap.of(PluriharmonicFn.holomorphic(P("z1 z2")))
    assert ob.holomorphic_along_curve(hol, P("z1 + z2^2 - 1/3"))
    with pytest.raises(ob.ObstructionError):
        ob.holomorphic_along_curve(M("z1"), HoloPoly.one(2))


def test_tangential_minors_by_hand():
    b = ob.tangential_minors(M("z1 z2", "z1"), P("z1"))
    assert b == [P("-z1"), HoloPoly.zero(2)]


def test_find_leaf_examples():
    leaf = ob.find_leaf(M("z1"), 0, (0, 0.3))
    assert leaf.curve == P("z1") and leaf.exact
    assert ob.find_leaf(M("z1 + z2"), 0, (0, 0)).curve == P("z1 + z2")
    leaf = ob.find_leaf(M("z1 z2"), 0, (0, 0.5))
    assert leaf.curve == P("z1")
    assert len(leaf.singular_points) == 1 and np.allclose(leaf.singular_points[0], (0, 0))


def test_find_leaf_numeric_constant():
    x0 = (0.1, np.pi / 10)   # k = 1/100 + pi/10 is irrational
    leaf = ob.find_leaf(M("z1^2 + z2"), 0, x0)
    assert not leaf.exact and leaf.curve is None
    assert abs(leaf.numeric_curve(*x0)) < 1e-8


def test_find_leaf_rational_constant_divides():
    leaf = ob.find_leaf(M("z1^2 + z2"), 0, (0.5, 0.25))
    k = leaf.phi - HoloPoly.const(2, P("1/2").constant_term())
    assert pa.divides(leaf.curve, k)
    assert abs(leaf.curve(0.5, 0.25)) < 1e-12


def test_find_leaf_holomorphic_generator():
    hol = PluriharmonicMap.of(PluriharmonicFn.holomorphic(P("z1")))
    with pytest.raises(ob.NoLeafError):
        ob.find_leaf(hol, 0, (0, 0))


def test_leaf_boundary_examples():
    assert ob.leaf_boundary_check(P("z1 + z2 - 1/2")) == "ExitsOffTorus"
    assert ob.leaf_boundary_check(P("z1")) == "ExitsOffTorus"
    assert ob.leaf_boundary_check(P("z1 z2 - 1")) == "ClosureInTorus"
    assert ob.leaf_boundary_check(P("z1 - z2")) == "ClosureInTorus"
    with pytest.raises(ob.DegenerateLeafError):
        ob.leaf_boundary_check(P("z1 - 2"))


def test_stratify_squares():
    s = ob.stratify(M("z1^2", "z2^2"), "bidisk")
    y1 = s.level(1)
    assert y1["interior"]["one_dim"] == P("z1 z2").to_text()
    assert {c["component"] for c in y1["certificates"]} == {P("z1").to_text(), P("z2").to_text()}
    for c in y1["certificates"]:
        assert c["nonzero_samples"] >= 1
    pts = s.level(0)["interior"]["points"]
    assert len(pts) == 1 and np.allclose(np.array(pts[0]), 0)


def test_stratify_aborts():
    with pytest.raises(ob.StratificationAborted) as exc:
        ob.stratify(M("z1 z2", "z1"), "bidisk")
    assert exc.value.component == P("z1")
    hol = PluriharmonicMap.of(PluriharmonicFn.holomorphic(P("z1")), PluriharmonicFn.holomorphic(P("z2")))
    with pytest.raises(ob.StratificationAborted) as exc:
        ob.stratify(hol, "bidisk")
    assert exc.value.reason == "everything"


def test_analyze_examples():
    v = ob.analyze(M("z1"), "bidisk")
    assert v.kind == "LeafFamily" and v.witness.curve == P("z1")
    v = ob.analyze(M("z1^2", "z2^2"), "bidisk")
    assert v.kind == "Dense" and v.stratification is not None
    v = ob.analyze(M("z1 z2", "z1"), "bidisk")
    assert v.kind == "InteriorVariety" and v.witness == P("z1")
    assert ob.holomorphic_along_curve(M("z1 z2", "z1"), v.witness)


def test_analyze_torus_line_generic_c():
    assert ob.analyze(M("z1 + (1/2,1/3) z2"), "torus").kind == "Dense"
    assert ob.analyze(M("z1 + 2 z2"), "torus").kind == "Dense"


def test_analyze_unimodular_c_finds_torus_leaf():
    # for |c| = 1 the line z1 = -c z2 has |z1| = |z2|: its boundary circle sits in the torus
    v = ob.analyze(M("z1 + z2"), "torus")
    assert v.kind == "LeafFamily" and v.witness.curve == P("z1 + z2")
    assert ob.leaf_boundary_check(v.witness) == "ClosureInTorus"


def test_analyze_boundary_disk():
    # both generators vanish identically on the face {z1 = 1}
    v = ob.analyze(M("z1 z2 - z2", "z1 z2^2 - z2^2"), "bidisk")
    assert v.kind == "BoundaryDisk"
    assert v.witness["face"] == "z1" and v.witness["roots"] == [[1.0, 0.0]]


def test_analyze_disk_mode():
    v = ob.analyze(PluriharmonicMap.from_real_parts("z1^2", n=1), "disk")
    assert v.kind == "Dense"
    assert v.stratification.levels[1]["interior"]["points"] == [[0.0, 0.0]]
    hol = PluriharmonicMap(1, [PluriharmonicFn.holomorphic(P("z1", 1))])
    assert ob.analyze(hol, "disk").kind == "InteriorVariety"


def test_dense_verdicts_have_no_holomorphic_component():
    for gens in [("z1^2", "z2^2"), ("z1", "z2^2"), ("z1 z2^2", "z1^2 + z2")]:
        v = ob.analyze(M(*gens), "bidisk")
        assert v.kind == "Dense"
        dec = ob.common_zero_set(minor_system(M(*gens), 2))
        assert not any(ob.holomorphic_along_curve(M(*gens), q) for q in dec.one_dim_factors)


def test_verdict_json_deterministic():
    a = ob.analyze(M("z1^2", "z2^2"), "bidisk").dumps()
    b = ob.analyze(M("z1^2", "z2^2"), "bidisk").dumps()
    assert a == b
    with pytest.raises(ValueError):
        ob.Verdict("Maybe")
