import numpy as np
import pytest

from plurihull import density as dn
from plurihull.density import SampleDomain
from plurihull.pluriharmonic import PluriharmonicFn, PluriharmonicMap
from plurihull.polyalg import parse_poly as P

M = PluriharmonicMap.from_real_parts


def test_sample_domain_examples():
    t = dn.sample_domain(SampleDomain("Torus2", 8))
    assert t.shape == (64, 2) and np.allclose(np.abs(t), 1)
    d = dn.sample_domain(SampleDomain("ClosedDisk", 8)).ravel()
    assert np.any(d == 0) and np.any(np.isclose(np.abs(d), 1))
    assert np.all(np.abs(d) <= 1 + 1e-15)
    f = dn.sample_domain(SampleDomain("FiberDisk", 8, a=0))
    assert np.all(f[:, 0] == 0) and np.all(np.abs(f[:, 1]) <= 1 + 1e-15)
    b = dn.sample_domain(SampleDomain("ClosedBidisk", 8))
    assert np.all(np.abs(b) <= 1 + 1e-15) and len(b) == len(d) ** 2
    face = dn.sample_domain(SampleDomain("Face", 8, a=1j, var=1))
    assert np.all(face[:, 1] == 1j)


def test_sample_domain_deterministic_and_validated():
    a = dn.sample_domain(SampleDomain("ClosedBidisk", 12))
    b = dn.sample_domain(SampleDomain("ClosedBidisk", 12))
    assert np.array_equal(a, b)
    with pytest.raises(dn.DomainError):
        dn.sample_domain(SampleDomain("Torus2", 4))
    with pytest.raises(dn.DomainError):
        SampleDomain("Face", 8, a=0.5)


def test_generator_basis_examples():
    assert dn.generator_basis(None, 2, n=1).describe() == ["1", "z", "z^2"]
    assert dn.generator_basis(M("z1 z2"), 1).describe() == ["1", "z1", "z2", "h1"]
    assert len(dn.generator_basis(M("z1"), 2)) == 10
    with pytest.raises(dn.BasisSizeError):
        dn.generator_basis(M("z1", "z2"), 20)


def test_generator_basis_drops_coordinate_generator():
    hmap = PluriharmonicMap.of(PluriharmonicFn.holomorphic(P("z1")), PluriharmonicFn.real_part(P("z2^2")))
    assert dn.generator_basis(hmap, 1).describe() == ["1", "z1", "z2", "h2"]


def circle(n):
    return np.exp(2j * np.pi * np.arange(n) / n)[:, None]


def test_conjugate_floor_on_circle():
    # |∮ (z̄ - p) dz| = 2π forces sup |z̄ - p| >= 1; p = 0 attains it
    for d in (1, 4, 8):
        res = dn.fit_residual(dn.generator_basis(None, d, n=1), lambda p: np.conj(p[:, 0]), circle(64), circle(256))
        assert abs(res.sup_residual - 1) < 1e-2


def test_conjugate_in_span():
    hmap = PluriharmonicMap.from_real_parts("z1", n=1)   # z̄ = 2 Re z - z
    res = dn.fit_residual(dn.generator_basis(hmap, 2), lambda p: np.conj(p[:, 0]), circle(64), circle(256))
    assert res.train_residual < 1e-10 and res.sup_residual < 1e-10


def test_fiber_floor():
    dom = SampleDomain("FiberDisk", 64, a=0)
    train, val = dn.sample_domain(dom), dn.sample_domain(dom.with_resolution(128))
    for d in (2, 6, 12):
        res = dn.fit_residual(dn.generator_basis(M("z1"), d), dn.target_function("conj_z2"), train, val)
        assert res.sup_residual >= 0.9


def test_fit_preconditions():
    basis = dn.generator_basis(None, 4, n=1)
    with pytest.raises(ValueError):
        dn.fit_residual(basis, lambda p: p[:, 0], circle(8), circle(16))
    zero = dn.GeneratorBasis(["x"], [lambda p: 0 * p[:, 0]], 1, [(1,)])
    with pytest.raises(dn.DegenerateBasisError):
        dn.fit_residual(zero, lambda p: p[:, 0], circle(8), circle(16))


def test_decay_report_fiber_flat():
    r = dn.decay_report(M("z1"), SampleDomain("FiberDisk", 16, a=0), ["conj_z2"], [2, 4, 6, 8, 10, 12])
    assert np.all(r.sup_residuals >= 0.9)
    assert r.resolution >= 16 and r.validation_resolution == 2 * r.resolution


def test_decay_report_torus_generic_line():
    r = dn.decay_report(M("z1 + (1/2,1/3) z2"), SampleDomain("Torus2", 32), ["conj_z1"], [2, 4, 6, 8, 10, 12])
    tr, sup = r.train_residuals[0], r.sup_residuals[0]
    assert np.all(np.diff(tr) < 0)
    assert sup[-1] <= 0.5 * sup[0]
    assert np.all(r.stability[0] <= 0.1)


def test_decay_report_unimodular_line_stays_flat():
    # the leaf z1 = -z2 lies in the torus and h vanishes there: z̄1 stays at distance 1
    r = dn.decay_report(M("z1 + z2"), SampleDomain("Torus2", 32), ["conj_z1"], [2, 6, 12], stability=False)
    assert np.all(r.sup_residuals >= 0.9)


def test_decay_report_member_target_and_monotone():
    hmap = M("z1 z2")
    target = lambda p: hmap(p)[:, 0] * p[:, 0]          # h1 * z1, a degree-2 basis element
    r = dn.decay_report(hmap, SampleDomain("ClosedBidisk", 12), [target], [2, 3], stability=False)
    assert np.all(r.train_residuals < 1e-10) and np.all(r.sup_residuals < 1e-8)
    r = dn.decay_report(hmap, SampleDomain("ClosedBidisk", 12), ["conj_z1", "bump"], [1, 2, 3, 4], stability=False)
    assert np.all(np.diff(r.train_residuals, axis=1) <= 1e-12)


def test_decay_report_serialisation():
    r = dn.decay_report(M("z1"), SampleDomain("Torus2", 16), ["conj_z2"], [1, 2])
    lines = r.to_csv().strip().splitlines()
    assert lines[0] == "target,degree,train_residual,sup_residual"
    assert len(lines) == 3
    assert r.dumps() == dn.decay_report(M("z1"), SampleDomain("Torus2", 16), ["conj_z2"], [1, 2]).dumps()
    with pytest.raises(ValueError):
        dn.decay_report(M("z1"), SampleDomain("Torus2", 16), ["conj_z2"], [2, 2])


def test_certificate_examples():
    c = dn.separation_certificate(M("z1"), (0, 0), (1,))
    assert c.j == 0 and abs(c.theta) < 1e-6 and abs(c.margin - 1) < 1e-9
    assert dn.separation_certificate(M("z1"), (0.3, 0.2), (0.3,)) is None


def test_certificate_phase_against_brute_force():
    c = dn.separation_certificate(M("z1 z2"), (0.5, 0.5), (1j,))
    phases = 2 * np.pi * np.arange(4096) / 4096
    vals = np.real(np.exp(1j * phases) * (1j - 0.25))
    assert abs(c.value_at_query - vals.max()) < 1e-6
    best = phases[np.argmax(vals)]
    assert abs(np.angle(np.exp(1j * (c.theta - best)))) < 2 * np.pi / 4096
    assert abs(c.margin - abs(1j - 0.25)) < 1e-9


def test_certificate_outside_domain():
    with pytest.raises(dn.OutsideDomainError):
        dn.separation_certificate(M("z1"), (1.5, 0), (0,))
    with pytest.raises(dn.OutsideDomainError):
        dn.separation_certificate(M("z1"), (0.5, 0.5), (0,), domain=SampleDomain("Torus2", 16))


def test_certificate_sound_on_fresh_samples():
    rng = np.random.default_rng(3)
    hmap = M("z1^2 + (0,1) z2", "z1 z2")
    z0 = np.array([0.2 - 0.1j, 0.4j])
    w0 = hmap(z0[None, :])[0] + np.array([0.3 - 0.2j, 0.05j])
    c = dn.separation_certificate(hmap, z0, w0)
    r = np.sqrt(rng.uniform(0, 1, (10_000, 2)))
    zs = r * np.exp(2j * np.pi * rng.uniform(0, 1, (10_000, 2)))
    assert np.all(c(hmap, zs, hmap(zs)) < c.value_at_query)


from hypothesis import given, settings, strategies as st

_unit = st.floats(0, 1)


@settings(max_examples=30, deadline=None)
@given(_unit, _unit, _unit, _unit, st.floats(0.01, 1), _unit)
def test_certificate_separates_property(r1, a1, r2, a2, size, phase):
    hmap = M("z1 z2^2", "z1^2 + z2")
    z0 = np.array([r1 * np.exp(2j * np.pi * a1), r2 * np.exp(2j * np.pi * a2)])
    w0 = hmap(z0[None, :])[0] + size * np.exp(2j * np.pi * phase)
    c = dn.separation_certificate(hmap, z0, w0)
    assert c is not None and c.margin > 0
    zs = dn.sample_domain(SampleDomain("ClosedBidisk", 12))
    assert np.all(c(hmap, zs, hmap(zs)) < c.value_at_query)
    assert dn.separation_certificate(hmap, z0, hmap(z0[None, :])[0]) is None
