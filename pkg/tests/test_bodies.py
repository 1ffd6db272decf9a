import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from convexlab import bodies as B
from convexlab.errors import (
    ConstructionFailedError,
    DimensionMismatchError,
    MultivaluedError,
    NoHessianError,
)
from convexlab.sphere import random_directions
import oracles as O
from conftest import cube, e, odd_ball, unit_ball

vec3 = arrays(np.float64, 3, elements=st.floats(-5, 5))


def _bodies():
    return [
        unit_ball(3, 1.5),
        B.Ellipsoid(np.diag([1.0, 4.0, 9.0]), [0.1, 0.0, -0.3]),
        cube(3),
        odd_ball(3, 0.1),
        B.ReuleauxRevolution(1.0),
        B.minkowski_sum(cube(3), unit_ball(3)),
        B.translate(odd_ball(3, 0.05), [1.0, 2.0, 3.0]),
        B.reflect(B.ReuleauxRevolution(2.0)),
    ]


@pytest.mark.parametrize("body", _bodies(), ids=lambda b: b.kind)
@given(p=vec3, q=vec3)
@settings(max_examples=60, deadline=None)
def test_subadditive(body, p, q):
    assert B.subadditivity_defect(body, p[None], q[None]) <= 1e-9 * (1 + np.abs(p).sum() + np.abs(q).sum())


@pytest.mark.parametrize("body", _bodies(), ids=lambda b: b.kind)
@given(x=vec3.filter(lambda v: np.linalg.norm(v) > 1e-2), t=st.floats(0.01, 100))
@settings(max_examples=60, deadline=None)
def test_positively_homogeneous(body, x, t):
    assert abs(body(t * x) - t * body(x)) <= 1e-9 * max(1.0, abs(t * body(x)))


@pytest.mark.parametrize("body", _bodies(), ids=lambda b: b.kind)
def test_gradient_is_boundary_point(body, rng):
    U = random_directions(rng, 3, 200)
    G = body.gradient(U)
    # Euler's identity and the supporting property <grad H(u), v> <= H(v)
    assert np.allclose(np.einsum("ij,ij->i", G, U), body(U), atol=1e-12)
    V = random_directions(rng, 3, 200)
    assert np.max(G @ V.T - body(V)[None, :]) < 1e-9


@pytest.mark.parametrize(
    "body",
    [b for b in _bodies() if b.has_hessian and b.kind != "reuleaux_revolution"],
    ids=lambda b: b.kind,
)
def test_hessian_matches_finite_differences(body, rng):
    for u in random_directions(rng, 3, 10):
        H = body.hessian(u)
        fd, noise = O.fd_hessian_checked(body.support, u)
        assert np.abs(H - fd).max() < 1e-5 + 10 * noise
        assert np.abs(H @ u).max() < 1e-12


def test_ball_support_and_radii():
    b = B.Ball([1.0, 0.0, 0.0], 2.0)
    assert b([0.0, 0.0, 1.0]) == pytest.approx(2.0)
    assert b([1.0, 0.0, 0.0]) == pytest.approx(3.0)
    assert np.allclose(B.tangent_radii(b, [[0.0, 0.6, 0.8]]), 2.0)


def test_ellipsoid_radii_at_pole():
    E = B.Ellipsoid(np.diag([1.0, 4.0, 9.0]))
    assert np.allclose(B.tangent_radii(E, e(3, 2)[None]), [1 / 3, 4 / 3], atol=1e-14)


def test_cube_support_and_ties():
    C = cube(3)
    assert C(np.ones(3) / np.sqrt(3)) == pytest.approx(np.sqrt(3))
    assert np.allclose(C.gradient(np.array([0.6, 0.48, 0.64])), [1, 1, 1])
    with pytest.raises(MultivaluedError) as info:
        C.gradient(e(3, 0))
    assert len(info.value.points) == 4
    with pytest.raises(NoHessianError):
        C.hessian(np.array([0.6, 0.48, 0.64]))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        unit_ball(3)(np.ones(4))
    with pytest.raises(DimensionMismatchError):
        B.minkowski_sum(unit_ball(3), unit_ball(4))


def test_translation_shifts_support(rng):
    K, t = odd_ball(3, 0.1), np.array([0.3, -1.2, 2.0])
    U = random_directions(rng, 3, 100)
    assert np.allclose(B.translate(K, t)(U), K(U) + U @ t, atol=1e-14)
    assert np.allclose(B.width(B.translate(K, t), U[0]), B.width(K, U[0]), atol=1e-13)


def test_reflection_and_symmetral(rng):
    K = odd_ball(3, 0.1)
    U = random_directions(rng, 3, 100)
    assert np.allclose(B.reflect(K)(U), K(-U), atol=1e-15)
    S = B.central_symmetral(K)
    assert np.allclose(S(U), S(-U), atol=1e-14)
    assert np.allclose(S(U), 1.0, atol=1e-14)  # constant width 2 gives the unit ball
    R = B.reflect(B.ReuleauxRevolution(1.0))
    assert isinstance(R, B.Reflection)
    assert B.reflect(R) is R.body


def test_scale_is_homothety(rng):
    K = B.ReuleauxRevolution(1.0)
    U = random_directions(rng, 3, 50)
    assert np.allclose(B.scale(K, 2.5)(U), 2.5 * K(U), atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("eps", [0.05, 0.1])
def test_odd_perturbed_ball_has_constant_width(n, eps, rng):
    K = odd_ball(n, eps)
    U = random_directions(rng, n, 1000)
    w = K(U) + K(-U)
    assert np.ptp(w) < 1e-12 and w.mean() == pytest.approx(2.0, abs=1e-12)
    radii = B.tangent_radii(K, U)
    assert radii.min() > 0
    # radii at u and -u add to 2r pairwise in a shared frame
    assert np.allclose(np.sort(radii, axis=1) + np.sort(B.tangent_radii(K, -U), axis=1)[:, ::-1], 2.0, atol=1e-12)


def test_make_constant_width_shrinks_eps():
    K = B.make_constant_width(3, 1.0, [(1.0, (3, 0, 0))], eps=2.0)
    assert K.eps < 2.0 and K.eps >= 1.0 / 16
    U = random_directions(np.random.default_rng(0), 3, 1000)
    assert B.tangent_radii(K, U).min() > 1e-3


def test_make_constant_width_zero_is_ball():
    assert isinstance(B.make_constant_width(3, 1.0, [(0.0, (3, 0, 0))], eps=1.0), B.Ball)


def test_make_constant_width_failure():
    # an even term breaks constant width; the library refuses anything it cannot make convex
    with pytest.raises((ConstructionFailedError, ValueError)):
        B.make_constant_width(3, 1.0, [(1e12, (3, 0, 0))], eps=1e12)


def test_reuleaux_width_is_constant(rng):
    K = B.ReuleauxRevolution(1.0)
    U = random_directions(rng, 3, 2000)
    assert np.abs(K(U) + K(-U) - 1.0).max() < 1e-12


def test_reuleaux_hessian_matches_fd(rng):
    K = B.ReuleauxRevolution(1.0)
    checked = 0
    for u in random_directions(rng, 3, 40):
        try:
            H = K.hessian(u)
        except NoHessianError:
            continue
        fd, noise = O.fd_hessian_checked(K.support, u, h=1e-5)
        if noise > 1e-3:  # too close to a ridge for the oracle
            continue
        assert np.abs(H - fd).max() < 1e-4
        checked += 1
    assert checked > 20


def test_reuleaux_axis_rotation(rng):
    axis = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    K0, K1 = B.ReuleauxRevolution(1.0), B.ReuleauxRevolution(1.0, axis=axis)
    # rotation taking e3 to axis: swap via a Householder reflection
    v = e(3, 2) - axis
    Hh = np.eye(3) - 2 * np.outer(v, v) / (v @ v)
    U = random_directions(rng, 3, 100)
    assert np.allclose(K1(U @ Hh.T), K0(U), atol=1e-12)


def test_as_polytope_of_sum():
    V = B.as_polytope(B.minkowski_sum(cube(2), B.translate(cube(2), [1.0, 0.0])))
    assert V.shape[1] == 2
    assert V[:, 0].max() == pytest.approx(3.0)
    assert B.as_polytope(unit_ball(2)) is None


def test_polytope_symmetry_flag():
    assert cube(3).is_symmetric
    simplex = B.Polytope(np.vstack([np.zeros(3), np.eye(3)]))
    assert not simplex.is_symmetric
