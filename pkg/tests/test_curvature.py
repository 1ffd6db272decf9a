import warnings

import numpy as np
import pytest

from convexlab import bodies as B
from convexlab import curvature as C
from convexlab.errors import ConvexityError, NoHessianError, SingularReferenceError, UnsupportedMethodError
from convexlab.sphere import random_directions
import oracles as O
from conftest import cube, e, odd_ball, unit_ball


def test_ball_radii():
    spec = C.radii_of_curvature(B.Ball([1.0, 2.0, 3.0], 2.5), e(3, 1))
    assert np.allclose(spec.radii, 2.5)
    assert spec.density == pytest.approx(6.25)
    assert not spec.clamped


def test_ellipsoid_radii_and_density():
    E = B.Ellipsoid(np.diag([1.0, 4.0, 9.0]))
    assert np.allclose(C.radii_of_curvature(E, e(3, 2)).radii, [1 / 3, 4 / 3], atol=1e-14)
    # Gauss curvature of an ellipsoid at its axis endpoint: c^2 / (a^2 b^2) with semi-axes 1, 2, 3
    assert C.surface_density(E, e(3, 2)) == pytest.approx(4 / 9, rel=1e-13)


def test_radii_match_great_circle_oracle(rng):
    # on S^2 with principal directions known (an axis-aligned ellipsoid), h + h'' gives each radius
    E = B.Ellipsoid(np.diag([1.0, 4.0, 9.0]))
    u = e(3, 0)
    r = [O.great_circle_radius(E.support, u, t) for t in (e(3, 1), e(3, 2))]
    assert np.allclose(sorted(r), C.radii_of_curvature(E, u).radii, atol=1e-6)


def test_radii_match_fd_oracle(rng):
    K = odd_ball(4, 0.1)
    for u in random_directions(rng, 4, 5):
        fd, noise = O.fd_hessian_checked(K.support, u)
        assert np.allclose(C.radii_of_curvature(K, u).radii, O.restricted_eigs(fd, u), atol=1e-5 + 10 * noise)


def test_clamping_warns_and_raises():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        radii, clamped = C._clamp(np.array([-1e-12, 1.0]))
    assert clamped and radii[0] == 0.0 and caught
    with pytest.raises(ConvexityError):
        C._clamp(np.array([-1e-6, 1.0]))


def test_odd_perturbed_ball_pairing():
    K = odd_ball(3, 0.1)
    s = C.relative_curvature_eigs(K, unit_ball(3), e(3, 0))
    assert np.allclose(s.x, 0.8, atol=1e-12) and np.allclose(s.y, 1.2, atol=1e-12)
    assert s.residual_sum < 1e-12
    assert s.commutator < 1e-12


def test_pairing_random_directions(rng):
    K = B.OddPerturbedBall(4, 1.0, {(1, 0, 0, 0): 0.3, (1, 2, 0, 0): 1.0, (0, 1, 1, 1): -0.7}, 0.1)
    for u in random_directions(rng, 4, 50):
        assert C.relative_curvature_eigs(K, unit_ball(4), u).residual_sum < 1e-10


def test_residual_k_for_ball():
    s = C.relative_curvature_eigs(B.Ball(np.zeros(3), 2.0), unit_ball(3), e(3, 2), k=2, beta=4.0)
    assert s.residual_k() < 1e-12
    with pytest.raises(ValueError):
        C.relative_curvature_eigs(unit_ball(3), unit_ball(3), e(3, 2)).residual_k()


def test_singular_reference():
    with pytest.raises(NoHessianError):
        C.relative_curvature_eigs(unit_ball(3), cube(3), np.array([0.6, 0.48, 0.64]))
    E = B.Ellipsoid(np.diag([1.0, 1.0, 1e-20]))
    with pytest.raises(SingularReferenceError):
        C.relative_curvature_eigs(unit_ball(3), E, e(3, 0))


def test_cap_mesh_area_converges():
    u = e(3, 2)
    angle = 0.5
    exact = 2 * np.pi * (1 - np.cos(angle))
    coarse = C.mesh_area(*C.cap_mesh(u, angle, 8))
    fine = C.mesh_area(*C.cap_mesh(u, angle, 32))
    assert abs(fine - exact) < abs(coarse - exact) < 1e-2 * exact
    assert abs(fine - exact) < 1e-3 * exact


def test_rnd_ratio_ball():
    ratio = C.rnd_ratio(B.Ball(np.zeros(3), 2.0), e(3, 0), 10)
    assert ratio == pytest.approx(4.0, rel=1e-3)


def test_rnd_rejects_unsupported():
    with pytest.raises(UnsupportedMethodError):
        C.rnd_ratio(cube(3), e(3, 0), 2)
    with pytest.raises(UnsupportedMethodError):
        C.rnd_ratio(unit_ball(4), e(4, 0), 2)


def test_rnd_table_columns():
    rows = C.rnd_table(B.Ellipsoid(np.diag([1.0, 4.0, 9.0])), e(3, 2), [4, 16], mesh_res=16)
    assert len(rows) == 2 and len(rows[0]) == len(C.RND_COLUMNS)
    assert rows[1][-1] < rows[0][-1]
