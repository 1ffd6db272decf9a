"""Linear subspaces of R^n: Haar sampling and restriction of support functions."""
from dataclasses import dataclass

import numpy as np

from . import bodies as B
from .errors import DimensionMismatchError, InvalidDimensionError


@dataclass(frozen=True)
class Subspace:
    basis: np.ndarray  # (n, k), orthonormal columns

    def __post_init__(self):
        Q = np.asarray(self.basis, dtype=float)
        if Q.ndim != 2 or not 1 <= Q.shape[1] <= Q.shape[0]:
            raise InvalidDimensionError(f"basis must be n x k with 1 <= k <= n, got {Q.shape}")
        if np.abs(Q.T @ Q - np.eye(Q.shape[1])).max() > 1e-12:
            raise InvalidDimensionError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", Q)

    @property
    def n(self):
        return self.basis.shape[0]

    @property
    def k(self):
        return self.basis.shape[1]

    @classmethod
    def span(cls, *vectors):
        """Orthonormalized span of the given (independent) vectors."""
        Q, R = np.linalg.qr(np.column_stack(vectors))
        return cls(Q * np.sign(np.diag(R)))

    @classmethod
    def coordinate(cls, n, indices):
        return cls(np.eye(n)[:, list(indices)])

    def rotated(self, R):
        return Subspace(R @ self.basis)


def haar_subspace(rng, n, k):
    """Subspace drawn from the rotation-invariant probability measure on G(n, k)."""
    if not 1 <= k <= n:
        raise InvalidDimensionError(f"need 1 <= k <= n, got n={n}, k={k}")
    Z = rng.standard_normal((n, k))
    Q, R = np.linalg.qr(Z)
    # sign-fix so the factorization is unique and the law is exactly Haar
    d = np.sign(np.diag(R))
    d[d == 0] = 1.0
    return Subspace(Q * d)


def random_rotation(rng, n):
    Q = haar_subspace(rng, n, n).basis
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


class Projected(B.SupportBody):
    """K|U viewed as a body in R^k: v -> h_K(Q v)."""

    kind = "projection"

    def __init__(self, body, subspace, label=None):
        super().__init__(subspace.k, label)
        self.body = body
        self.basis = subspace.basis

    has_hessian = property(lambda self: self.body.has_hessian)
    is_smooth = property(lambda self: self.body.is_smooth)
    is_symmetric = property(lambda self: self.body.is_symmetric)

    def _value(self, V):
        return self.body._value(V @ self.basis.T)

    def _gradient(self, V):
        return self.body._gradient(V @ self.basis.T) @ self.basis

    def _hessian(self, V):
        H = self.body._hessian(V @ self.basis.T)
        return np.einsum("ia,mij,jb->mab", self.basis, H, self.basis)


def project_body(body, U):
    """Restriction of the support function of ``body`` to the subspace ``U``."""
    if body.dim != U.n:
        raise DimensionMismatchError(f"body lives in R^{body.dim}, subspace in R^{U.n}")
    Q = U.basis
    if isinstance(body, B.Ball):
        return B.Ball(Q.T @ body.center, body.radius, label=body.label)
    if isinstance(body, B.Ellipsoid):
        return B.Ellipsoid(Q.T @ body.shape @ Q, Q.T @ body.center, label=body.label)
    if isinstance(body, B.Polytope):
        return B.Polytope(body.vertices @ Q, label=body.label)
    if isinstance(body, B.MinkowskiSum):
        return B.MinkowskiSum([(project_body(b, U), w) for b, w in body.parts], label=body.label)
    if isinstance(body, B.Translated):
        return B.Translated(project_body(body.body, U), Q.T @ body.shift, label=body.label)
    if isinstance(body, B.Reflection):
        return B.Reflection(project_body(body.body, U), label=body.label)
    return Projected(body, U)
