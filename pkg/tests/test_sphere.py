import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from convexlab import sphere as S
from convexlab.errors import DomainError, InvalidDimensionError
from convexlab.grassmann import random_rotation
import oracles as O


def test_random_direction_is_unit(rng):
    u = S.random_direction(rng, 3)
    assert abs(np.linalg.norm(u) - 1) < 1e-12


def test_random_direction_rejects_small_dimension(rng):
    with pytest.raises(InvalidDimensionError):
        S.random_direction(rng, 1)


def test_random_direction_mean_is_small():
    U = S.random_directions(np.random.default_rng(1), 3, 100_000)
    assert np.linalg.norm(U.mean(axis=0)) < 0.02  # CLT: 3/sqrt(N) ~ 0.0095


def test_rotation_leaves_projection_law_unchanged():
    rng = np.random.default_rng(2)
    a = S.normalize(np.array([0.3, -1.0, 2.0]))
    R = random_rotation(rng, 3)
    first = S.random_directions(rng, 3, 5000) @ a
    second = (S.random_directions(rng, 3, 5000) @ R.T) @ a
    assert stats.ks_2samp(first, second).pvalue > 0.01


def test_tangent_frame_of_e1():
    fr = S.tangent_frame(np.array([1.0, 0.0, 0.0]))
    assert np.allclose(fr.basis, [[0, 1, 0], [0, 0, 1]], atol=1e-15)


@given(st.lists(st.floats(-10, 10), min_size=2, max_size=6).filter(lambda v: np.linalg.norm(v) > 1e-3))
@settings(max_examples=200, deadline=None)
def test_tangent_frame_completeness(v):
    u = S.normalize(np.array(v))
    fr = S.tangent_frame(u)
    assert np.abs(fr.basis.T @ fr.basis + np.outer(u, u) - np.eye(len(u))).max() < 1e-10
    assert np.abs(fr.basis @ u).max() < 1e-12
    assert np.abs(fr.basis @ fr.basis.T - np.eye(len(u) - 1)).max() < 1e-12


def test_tangent_frame_diagonal_direction():
    u = np.ones(3) / np.sqrt(3)
    assert np.abs(S.tangent_frame(u).basis @ u).max() < 1e-12


def test_tangent_frame_is_deterministic():
    u = S.normalize(np.array([0.2, -0.7, 0.1, 0.5]))
    assert np.array_equal(S.tangent_frame(u).basis, S.tangent_frame(u.copy()).basis)


def test_as_direction_rejects_non_unit():
    with pytest.raises(DomainError):
        S.as_direction([1.0, 1.0])


def test_cap_area_hemisphere():
    assert S.cap_area(0.0, 3) == pytest.approx(2 * np.pi, rel=1e-13)


@pytest.mark.parametrize("i", [1, 2, 3, 7, 50])
def test_cap_measure_s2_matches_archimedes(i):
    cap = S.Cap(np.array([0.0, 0.0, 1.0]), i)
    assert S.cap_measure(cap, 3) == pytest.approx(O.spherical_cap_area_s2(cap.threshold), rel=1e-11)


def test_cap_measure_i1_is_pi():
    assert S.cap_measure(S.Cap(np.array([0.0, 0.0, 1.0]), 1), 3) == pytest.approx(np.pi, rel=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cap_measure_strictly_decreasing(n):
    vals = [S.cap_measure(S.Cap(S.normalize(np.ones(n)), i), n) for i in range(1, 40)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.03 * vals[0]  # arc length decays like 1/i on the circle


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_full_cap_is_whole_sphere(n):
    assert S.cap_area(-1.0, n) == pytest.approx(S.sphere_area(n), rel=1e-12)


def test_cap_membership():
    cap = S.Cap(np.array([0.0, 0.0, 1.0]), 2)  # threshold 7/8
    assert cap.contains(np.array([0.0, 0.0, 1.0]))
    assert not cap.contains(np.array([1.0, 0.0, 0.0]))


def test_trapezoid_cos_squared():
    rule = S.sphere_quadrature(1, 64)
    assert rule.integrate(lambda v: v[:, 0] ** 2) == pytest.approx(np.pi, abs=1e-12)


def test_s2_second_moment():
    rule = S.sphere_quadrature(2, 2000)
    assert len(rule) >= 2000
    assert abs(rule.integrate(lambda v: v[:, 2] ** 2) - 4 * np.pi / 3) < 1e-4


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("order", [8, 64, 2000])
def test_rules_integrate_constants_and_odd_functions(d, order):
    rule = S.sphere_quadrature(d, order)
    assert np.all(rule.weights > 0)
    assert abs(rule.weights.sum() - S.sphere_area(d + 1)) < 1e-9
    a = np.arange(1.0, d + 2)
    assert abs(rule.integrate(lambda v: v @ a)) < 1e-9
    assert abs(rule.integrate(lambda v: (v @ a) ** 3)) < 1e-9
    assert np.allclose(np.linalg.norm(rule.nodes, axis=1), 1.0, atol=1e-14)


def test_s3_second_moment():
    rule = S.sphere_quadrature(3, 4000)
    # by symmetry each coordinate squared integrates to |S^3| / 4
    assert rule.integrate(lambda v: v[:, 1] ** 2) == pytest.approx(S.sphere_area(4) / 4, rel=1e-9)


def test_quadrature_rejects_bad_arguments():
    with pytest.raises(InvalidDimensionError):
        S.sphere_quadrature(5, 100)
    with pytest.raises(DomainError):
        S.sphere_quadrature(2, 4)
