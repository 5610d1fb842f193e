import warnings

import numpy as np
import pytest

from plurihull import zero_tracker as zt
from plurihull.pluriharmonic import PluriharmonicMap
from plurihull.polyalg import parse_poly as P


def fam(text):
    return zt.ParamFamily.from_poly(P(text))   # z1 = z, z2 = t


def test_contour_validation():
    with pytest.raises(ValueError):
        zt.Contour(0j, 1.0, nodes=100)
    with pytest.raises(ValueError):
        zt.Contour(0j, -1.0)


def test_winding_counts():
    assert zt.winding_count(fam("z1^2 - z2"), 0.1) == 2
    assert zt.winding_count(fam("z1^2 - 3 z1 - z2 z1 + 3 z2"), 0.2) == 1   # (z - t)(z - 3)
    assert zt.winding_count(fam("z1 - 2"), 0.0) == 0


def test_contour_too_close():
    with pytest.raises(zt.ContourTooCloseError):
        zt.winding_count(fam("z1 - 1"), 0.0)


def test_moments_and_recovery():
    p = zt.zero_moments(fam("z1^2 - z2"), 0.1)
    assert abs(p[0]) < 1e-8 and abs(p[1] - 0.2) < 1e-8
    z = zt.recover_zeros([0.5, 0.25])
    assert np.allclose(z, [0, 0.5])
    z = zt.recover_zeros(zt.zero_moments(fam("z1^3 - 1/8"), 0.0))
    assert np.allclose(np.sort_complex(z), np.sort_complex(0.5 * np.exp(2j * np.pi * np.arange(3) / 3)))


def test_callable_family_matches_exact_derivative():
    f = zt.ParamFamily(lambda z, t: z ** 2 - t)
    p = zt.zero_moments(f, 0.2)
    assert abs(p[1] - 0.4) < 1e-7


def test_branching_of_square_root():
    t = np.linspace(-0.25, 0.25, 101)
    traj = zt.branching_set(fam("z1^2 - z2"), zt.Contour(), t)
    assert np.all(traj.counts == 2)
    assert np.allclose(traj.branching, [0.0], atol=t[1] - t[0])


def test_no_branching():
    t = np.linspace(-0.25, 0.25, 51)
    traj = zt.branching_set(fam("z1^2 - z1 z2 + 1/2 z1 - 1/2 z2"), zt.Contour(), t)   # (z - t)(z + 1/2)
    assert traj.branching.size == 0
    assert zt.branching_set(fam("z1^2"), zt.Contour(), t).branching.size == 0


def test_pair_mode_rejects_other_counts():
    with pytest.raises(zt.UnsupportedMultiplicityError):
        zt.branching_set(fam("z1 - z2"), zt.Contour(), np.linspace(0, 0.5, 5))


def test_trajectory_csv():
    traj = zt.branching_set(fam("z1^2 - z2"), zt.Contour(), np.linspace(0.1, 0.2, 3))
    lines = traj.to_csv().strip().splitlines()
    assert lines[0].startswith("t,count")
    assert len(lines) == 4


def test_boundary_cover_for_z1z2sq():
    hmap = PluriharmonicMap.from_real_parts("z1 z2^2")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cov = zt.boundary_zero_cover(hmap, 0, arc_count=8, delta=0.2)
    assert len(cov.arcs) == 8
    assert cov.e_samples and cov.boxes
    for z, s in cov.b_samples:
        assert cov.member(z, s) is not None
        for b in cov.boxes:
            assert b.boundary_distance(z, s) > 0
    for b in cov.boxes:
        assert b.diameter < 0.2
    # a collar point clear of every box belongs to U_0
    for ang in np.linspace(0, 2 * np.pi, 16, endpoint=False):
        z = 0.99 * np.exp(1j * ang)
        s = 0.05
        if not any(b.contains(z, s, closed=True) for b in cov.boxes):
            assert cov.member(z, s) == 0


def test_boundary_cover_requires_non_holomorphic_face():
    with pytest.raises(zt.FaceDiskError):
        zt.boundary_zero_cover(PluriharmonicMap.from_real_parts("z1"), 0)


from hypothesis import given, settings, strategies as st

_pt = st.complex_numbers(max_magnitude=0.9, allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(_pt, min_size=1, max_size=4))
def test_power_sums_round_trip(zs):
    zs = np.array(zs)
    d = np.abs(zs[:, None] - zs[None, :]) + np.eye(len(zs))
    if d.min() < 1e-2:
        return
    sums = [np.sum(zs ** k) for k in range(1, len(zs) + 1)]
    got = zt.recover_zeros(sums)
    for z in zs:
        assert np.min(np.abs(got - z)) < 1e-6
