"""Principal radii of curvature, surface-area density and relative curvature.

The relative curvature operator compares the Hessian of a body with that of a
positively curved reference body::

    L(u) = A0(u)^{-1/2} A(u) A0(u)^{-1/2}

where A, A0 are the Hessians of the support functions restricted to u^perp.
For a body whose width function matches twice the reference's,
L(u) + L(-u) = 2 I.
"""
from dataclasses import dataclass
from itertools import combinations
import warnings

import numpy as np

from .errors import ConvexityError, DimensionMismatchError, SingularReferenceError, UnsupportedMethodError
from .sphere import Cap, as_direction, cap_measure, tangent_frame

CLAMP_TOL = 1e-9
SQRT_FLOOR = 1e-12
REFERENCE_MIN_RADIUS = 1e-8


@dataclass(frozen=True)
class CurvatureSpectrum:
    direction: np.ndarray
    radii: np.ndarray
    frame: object
    clamped: bool = False

    @property
    def density(self):
        return float(np.prod(self.radii))


def _clamp(eigs, what="radius"):
    if eigs.min() < -CLAMP_TOL:
        raise ConvexityError(f"negative principal {what} {eigs.min():.3e}")
    clamped = bool(np.any(eigs < 0))
    if clamped:
        warnings.warn(f"clamped round-off negative {what} {eigs.min():.2e} to 0", RuntimeWarning, stacklevel=3)
    return np.maximum(eigs, 0.0), clamped


def _compressed(body, u, frame):
    A = frame.compress(body.hessian(u))
    return 0.5 * (A + A.T)


def radii_of_curvature(body, u, frame=None):
    """Principal radii at normal ``u``: eigenvalues of d^2 h(u) restricted to u^perp."""
    u = as_direction(u)
    if body.dim != u.size:
        raise DimensionMismatchError(f"body in R^{body.dim}, direction in R^{u.size}")
    frame = frame or tangent_frame(u)
    radii, clamped = _clamp(np.linalg.eigvalsh(_compressed(body, u, frame)))
    return CurvatureSpectrum(direction=u, radii=radii, frame=frame, clamped=clamped)


def surface_density(body, u):
    """Density of S_{n-1}(K, .) at u: the product of the principal radii."""
    return radii_of_curvature(body, u).density


def psd_inv_sqrt(A, floor=SQRT_FLOOR):
    lam, W = np.linalg.eigh(A)
    return (W / np.sqrt(np.maximum(lam, floor))) @ W.T


@dataclass(frozen=True)
class RelativeSpectrum:
    """Eigenvalues x of L(u) (ascending) and y of L(-u) paired along a common eigenbasis."""

    direction: np.ndarray
    x: np.ndarray
    y: np.ndarray
    L_plus: np.ndarray
    L_minus: np.ndarray
    k: int = None
    beta: float = None

    @property
    def residual_sum(self):
        return float(np.max(np.abs(self.x + self.y - 2.0)))

    def residual_k(self, k=None, beta=None):
        """max over |I| = k of |x_I + y_I - 2 beta|."""
        k = self.k if k is None else k
        beta = self.beta if beta is None else beta
        if k is None or beta is None:
            raise ValueError("residual_k needs k and beta")
        return max(
            abs(np.prod(self.x[list(I)]) + np.prod(self.y[list(I)]) - 2.0 * beta)
            for I in combinations(range(len(self.x)), k)
        )

    @property
    def commutator(self):
        C = self.L_plus @ self.L_minus - self.L_minus @ self.L_plus
        return float(np.linalg.norm(C, 2))


def relative_operator(body, reference, u, frame):
    A0 = _compressed(reference, u, frame)
    r0 = np.linalg.eigvalsh(A0)
    if r0.min() <= REFERENCE_MIN_RADIUS:
        raise SingularReferenceError(f"reference radius {r0.min():.3e} at {u} is not positive")
    S = psd_inv_sqrt(A0)
    L = S @ _compressed(body, u, frame) @ S
    return 0.5 * (L + L.T)


def relative_curvature_eigs(body, reference, u, k=None, beta=None):
    """Relative principal radii of ``body`` against ``reference`` at u and -u.

    The frame of u is reused at -u (both tangent spaces equal u^perp).  The
    common eigenbasis is taken from a generic combination of L(u) and L(-u),
    which diagonalizes both whenever they commute.
    """
    u = as_direction(u)
    if body.dim != reference.dim or body.dim != u.size:
        raise DimensionMismatchError("body, reference and direction must share the dimension")
    frame = tangent_frame(u)
    Lp = relative_operator(body, reference, u, frame)
    Lm = relative_operator(body, reference, -u, frame)
    _, W = np.linalg.eigh(Lp + Lm / np.sqrt(2.0))
    xs = np.einsum("ia,ij,ja->a", W, Lp, W)
    ys = np.einsum("ia,ij,ja->a", W, Lm, W)
    order = np.argsort(xs, kind="stable")
    x, _ = _clamp(xs[order], "relative radius")
    y, _ = _clamp(ys[order], "relative radius")
    return RelativeSpectrum(direction=u, x=x, y=y, L_plus=Lp, L_minus=Lm, k=k, beta=beta)


def cap_mesh(u, angle, mesh_res, azimuths=None):
    """Vertices and triangles of a geodesic polar mesh of the cap of given angle around u (n=3)."""
    frame = tangent_frame(u)
    e1, e2 = frame.basis
    M = azimuths or 6 * mesh_res
    phi = angle * np.arange(1, mesh_res + 1) / mesh_res
    psi = 2.0 * np.pi * np.arange(M) / M
    ring = np.cos(psi)[:, None] * e1 + np.sin(psi)[:, None] * e2
    verts = [u[None, :]]
    for p in phi:
        verts.append(np.cos(p) * u + np.sin(p) * ring)
    V = np.vstack(verts)
    cur = np.arange(M)
    nxt = np.roll(cur, -1)
    tris = [np.column_stack([np.zeros(M, dtype=int), 1 + cur, 1 + nxt])]
    for a in range(mesh_res - 1):
        inner, outer = 1 + a * M, 1 + (a + 1) * M
        tris.append(np.column_stack([inner + cur, outer + cur, outer + nxt]))
        tris.append(np.column_stack([inner + cur, outer + nxt, inner + nxt]))
    return V, np.vstack(tris)


def mesh_area(points, tris):
    a, b, c = points[tris[:, 0]], points[tris[:, 1]], points[tris[:, 2]]
    return 0.5 * float(np.sum(np.linalg.norm(np.cross(b - a, c - a), axis=1)))


def rnd_ratio(body, u, i, mesh_res=32):
    """S_2(K, cap_i(u)) / H^2(cap_i(u)) with the numerator from the reverse spherical image.

    The cap is meshed, its vertices are mapped by the reverse Gauss map and
    the image triangle areas are summed; no Hessians are used.
    """
    u = as_direction(u)
    if body.dim != 3:
        raise UnsupportedMethodError("cap meshing is implemented for n = 3 only")
    if not body.is_smooth:
        raise UnsupportedMethodError(f"{body.kind} body is not smooth near the cap")
    cap = Cap(u, int(i))
    V, T = cap_mesh(u, cap.angle, mesh_res)
    image = mesh_area(body.gradient(V), T)
    return image / cap_measure(cap, 3)


RND_COLUMNS = ("i", "cap_measure", "image_area", "ratio", "limit", "rel_error")


def rnd_table(body, u, indices, mesh_res=32):
    """Rows (i, cap measure, image area, ratio, limiting density, relative error)."""
    u = as_direction(u)
    limit = surface_density(body, u)
    rows = []
    for i in indices:
        cm = cap_measure(Cap(u, int(i)), 3)
        ratio = rnd_ratio(body, u, i, mesh_res)
        rows.append((int(i), cm, ratio * cm, ratio, limit, abs(ratio - limit) / limit))
    return rows
