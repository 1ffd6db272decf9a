"""Directions, tangent frames, spherical caps and quadrature on S^{n-1}.

All measures are unnormalized Hausdorff measures; divide by
:func:`sphere_area` to get the probability (Haar) convention.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import DomainError, InvalidDimensionError

UNIT_TOL = 1e-12


def sphere_area(n):
    """Hausdorff measure of S^{n-1} in R^n (2*pi for n=2, 4*pi for n=3)."""
    return 2.0 * np.pi ** (n / 2.0) / special.gamma(n / 2.0)


def as_direction(u, tol=UNIT_TOL):
    """Validate ``u`` as a unit vector of dimension >= 2 and return it as an array."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.shape[0] < 2:
        raise InvalidDimensionError(f"direction must be a vector of length >= 2, got shape {u.shape}")
    if abs(np.linalg.norm(u) - 1.0) > tol:
        raise DomainError(f"direction is not a unit vector (norm {np.linalg.norm(u)!r})")
    return u


def normalize(x):
    x = np.asarray(x, dtype=float)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def random_direction(rng, n):
    """Uniform direction on S^{n-1} drawn from the generator ``rng``."""
    return random_directions(rng, n, 1)[0]


def random_directions(rng, n, size):
    """``size`` i.i.d. uniform directions, shape (size, n)."""
    if n < 2:
        raise InvalidDimensionError(f"need n >= 2, got {n}")
    return normalize(rng.standard_normal((size, n)))


@dataclass(frozen=True)
class TangentFrame:
    base: np.ndarray
    basis: np.ndarray  # (n-1, n), rows span base^perp

    def compress(self, matrix):
        """Restrict a symmetric n x n matrix to base^perp in this basis."""
        return self.basis @ matrix @ self.basis.T


def tangent_frames(U):
    """Orthonormal bases of u^perp for each row of ``U``; returns shape (m, n-1, n).

    Each u is completed by the coordinate vectors ordered by increasing |u_j|
    (the largest coordinate is dropped) and then Gram-Schmidt orthonormalized
    twice.  The result depends only on u.
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    m, n = U.shape
    order = np.argsort(np.abs(U), axis=1, kind="stable")[:, : n - 1]
    cand = np.eye(n)[order]  # (m, n-1, n)
    basis = np.empty_like(cand)
    for j in range(n - 1):
        v = cand[:, j, :]
        for _ in range(2):
            v = v - np.sum(v * U, axis=1, keepdims=True) * U
            for i in range(j):
                b = basis[:, i, :]
                v = v - np.sum(v * b, axis=1, keepdims=True) * b
        basis[:, j, :] = v / np.linalg.norm(v, axis=1, keepdims=True)
    return basis


def tangent_frame(u):
    u = as_direction(u)
    return TangentFrame(base=u, basis=tangent_frames(u[None, :])[0])


@dataclass(frozen=True)
class Cap:
    """The cap {v : <v, center> >= 1 - 1/(2 i^2)} around ``center``."""

    center: np.ndarray
    index: int

    def __post_init__(self):
        if int(self.index) < 1:
            raise DomainError("cap index must be a positive integer")

    @property
    def threshold(self):
        return 1.0 - 1.0 / (2.0 * self.index**2)

    @property
    def angle(self):
        # arccos(threshold) without cancellation near 1
        return 2.0 * np.arcsin(1.0 / (2.0 * self.index))

    def contains(self, v):
        return np.asarray(v) @ self.center >= self.threshold


def cap_area(threshold, n):
    """H^{n-1} of {v in S^{n-1} : <v, c> >= threshold}, for threshold in [-1, 1]."""
    if n < 2:
        raise InvalidDimensionError(f"need n >= 2, got {n}")
    threshold = float(np.clip(threshold, -1.0, 1.0))
    return _cap_area_angle(np.arccos(threshold), n)


def _cap_area_angle(angle, n):
    # substitute t = cos(phi): the (1-t^2)^((n-3)/2) dt weight becomes sin^(n-2)(phi) dphi
    if n == 2:
        return 2.0 * angle
    val, _ = integrate.quad(lambda p: np.sin(p) ** (n - 2), 0.0, angle, epsabs=0.0, epsrel=1e-13)
    return sphere_area(n - 1) * val


def cap_measure(cap, n):
    return _cap_area_angle(cap.angle, n)


@dataclass(frozen=True)
class QuadratureRule:
    dim: int
    nodes: np.ndarray  # (N, dim+1)
    weights: np.ndarray  # (N,)

    def __len__(self):
        return len(self.weights)

    def integrate(self, f):
        """Integrate a vectorized ``f(nodes) -> (N,)`` against surface measure."""
        return float(np.dot(self.weights, f(self.nodes)))


def sphere_quadrature(d, order):
    """Positive-weight rule on S^d in R^{d+1} with roughly ``order`` nodes.

    d=1: ``order`` equally spaced angles (trapezoid).  d=2: Gauss-Legendre
    in the last coordinate times a trapezoid in the azimuth.  d>=3:
    Gauss-Jacobi in the last coordinate times the rule on S^{d-1}.
    """
    if d not in (1, 2, 3, 4):
        raise InvalidDimensionError(f"sphere dimension d must be in 1..4, got {d}")
    if order < 8:
        raise DomainError(f"quadrature order must be >= 8, got {order}")
    return _quadrature(int(d), int(order))


@lru_cache(maxsize=64)
def _quadrature(d, order):
    if d == 1:
        theta = 2.0 * np.pi * np.arange(order) / order
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(order, 2.0 * np.pi / order)
    elif d == 2:
        # Gauss-Legendre in the height times 2m equally spaced azimuths; node set is antipodal
        m = max(2, int(np.ceil(np.sqrt(order / 2.0))))
        z, wz = special.roots_legendre(m)
        phi = np.pi * np.arange(2 * m) / m
        r = np.sqrt(1.0 - z * z)
        nodes = np.column_stack(
            [np.outer(r, np.cos(phi)).ravel(), np.outer(r, np.sin(phi)).ravel(), np.repeat(z, 2 * m)]
        )
        weights = np.repeat(wz, 2 * m) * (np.pi / m)
    else:
        m = max(4, int(round(order ** (1.0 / d))))
        lower = _quadrature(d - 1, max(8, order // m))
        a = (d - 2) / 2.0
        t, wt = special.roots_jacobi(m, a, a)
        s = np.sqrt(1.0 - t * t)
        nodes = np.vstack([np.column_stack([si * lower.nodes, np.full(len(lower), ti)]) for ti, si in zip(t, s)])
        weights = np.concatenate([wi * lower.weights for wi in wt])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(dim=d, nodes=nodes, weights=weights)
