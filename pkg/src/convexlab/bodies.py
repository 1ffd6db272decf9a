"""Convex bodies represented by their support functions.

Every body evaluates the degree-1 homogeneous extension ``H`` of its support
function at arbitrary nonzero points of R^n, together with its gradient (the
reverse Gauss map on the sphere) and, where it exists, its Hessian.  All
evaluators are vectorized over the rows of a 2-D array.
"""
import numpy as np

from .errors import (
    ConstructionFailedError,
    ConvexityError,
    DimensionMismatchError,
    DomainError,
    InvalidDimensionError,
    MultivaluedError,
    NoHessianError,
)
from .sphere import random_directions, tangent_frames

TIE_TOL = 1e-12
RIDGE_TOL = 1e-12


def _rows(x, dim):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.shape[-1] != dim:
        raise DimensionMismatchError(f"expected points in R^{dim}, got shape {x.shape}")
    return X, single


def _norms(X):
    """Row norms without underflow for tiny rows (rows must be nonzero)."""
    m = np.abs(X).max(axis=1)
    return m * np.linalg.norm(X / m[:, None], axis=1)


class SupportBody:
    """Abstract support-function evaluator.

    Subclasses implement ``_value``, ``_gradient`` and optionally ``_hessian``
    on (m, n) arrays.
    """

    kind = "abstract"
    has_hessian = False
    is_smooth = False
    is_symmetric = False

    def __init__(self, dim, label=None):
        dim = int(dim)
        if dim < 1:
            raise InvalidDimensionError(f"dimension must be >= 1, got {dim}")
        self.dim = dim
        self.label = label

    def support(self, x):
        X, single = _rows(x, self.dim)
        zero = ~X.any(axis=1)
        if zero.any():
            # H(0) = 0; the homogeneous formulas divide by |x|
            v = np.zeros(len(X))
            v[~zero] = self._value(X[~zero])
        else:
            v = self._value(X)
        return float(v[0]) if single else v

    __call__ = support

    def gradient(self, x):
        X, single = _rows(x, self.dim)
        g = self._gradient(X)
        return g[0] if single else g

    def hessian(self, x):
        X, single = _rows(x, self.dim)
        h = self._hessian(X)
        return h[0] if single else h

    def _hessian(self, X):
        raise NoHessianError(f"{self.kind} bodies have no pointwise Hessian")

    def __repr__(self):
        return f"<{type(self).__name__} kind={self.kind} dim={self.dim}>"


class Ball(SupportBody):
    kind = "ball"
    has_hessian = True
    is_smooth = True
    is_symmetric = True

    def __init__(self, center, radius, label=None):
        center = np.asarray(center, dtype=float).ravel()
        super().__init__(center.size, label)
        if not radius > 0:
            raise DomainError(f"ball radius must be positive, got {radius}")
        self.center = center
        self.radius = float(radius)

    def _value(self, X):
        return X @ self.center + self.radius * np.linalg.norm(X, axis=1)

    def _gradient(self, X):
        return self.center + self.radius * X / np.linalg.norm(X, axis=1, keepdims=True)

    def _hessian(self, X):
        s = np.linalg.norm(X, axis=1)
        U = X / s[:, None]
        P = np.eye(self.dim) - U[:, :, None] * U[:, None, :]
        return self.radius * P / s[:, None, None]


class Ellipsoid(SupportBody):
    """Ellipsoid {c + M y : |y| <= 1} with shape matrix A = M M^T."""

    kind = "ellipsoid"
    has_hessian = True
    is_smooth = True
    is_symmetric = True

    def __init__(self, shape, center=None, label=None):
        A = np.asarray(shape, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidDimensionError("ellipsoid shape matrix must be square")
        super().__init__(A.shape[0], label)
        if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
            raise DomainError("ellipsoid shape matrix must be symmetric")
        if np.linalg.eigvalsh(A).min() <= 0:
            raise DomainError("ellipsoid shape matrix must be positive definite")
        self.shape = A
        self.center = np.zeros(self.dim) if center is None else np.asarray(center, dtype=float).ravel()
        if self.center.size != self.dim:
            raise DimensionMismatchError("ellipsoid center has wrong dimension")

    def _value(self, X):
        return X @ self.center + np.sqrt(np.einsum("mi,ij,mj->m", X, self.shape, X))

    def _gradient(self, X):
        AX = X @ self.shape
        q = np.sqrt(np.sum(AX * X, axis=1))
        return self.center + AX / q[:, None]

    def _hessian(self, X):
        AX = X @ self.shape
        q = np.sqrt(np.sum(AX * X, axis=1))
        outer = AX[:, :, None] * AX[:, None, :] / (q * q)[:, None, None]
        return (self.shape[None] - outer) / q[:, None, None]


class Polytope(SupportBody):
    kind = "polytope"

    def __init__(self, vertices, label=None):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        if V.size == 0:
            raise DomainError("polytope needs at least one vertex")
        super().__init__(V.shape[1], label)
        if np.linalg.matrix_rank(V - V[0], tol=1e-12 * max(1.0, np.abs(V).max())) < self.dim:
            raise DomainError("polytope vertices are not affinely full-dimensional")
        self.vertices = V

    @property
    def is_symmetric(self):
        c = self.vertices.mean(axis=0)
        D = self.vertices - c
        scale = max(1.0, np.abs(D).max())
        dist = np.linalg.norm(D[:, None, :] + D[None, :, :], axis=2)
        return bool(np.all(dist.min(axis=1) < 1e-9 * scale))

    def _value(self, X):
        return (X @ self.vertices.T).max(axis=1)

    def _gradient(self, X):
        vals = X @ self.vertices.T
        top = vals.max(axis=1, keepdims=True)
        tol = TIE_TOL * np.maximum(1.0, np.abs(top))
        ties = vals >= top - tol
        for row in range(len(X)):
            idx = np.flatnonzero(ties[row])
            pts = np.unique(self.vertices[idx], axis=0)
            if len(pts) > 1:
                raise MultivaluedError(
                    f"support set in direction {X[row]} contains {len(pts)} vertices", pts
                )
        return self.vertices[np.argmax(vals, axis=1)]


def _monomial(X, powers):
    if np.any(powers < 0):
        return np.zeros(len(X))
    return np.prod(X**powers, axis=1)


class OddPerturbedBall(SupportBody):
    """Ball of radius r plus an odd polynomial perturbation on the sphere.

    On the unit sphere h(u) = r + eps * q(u) with
    q(u) = sum_t coef_t * u^powers_t and every monomial of odd degree, so
    h(u) + h(-u) = 2r exactly.  Each term extends homogeneously as
    coef * x^powers / |x|^(deg-1).
    """

    kind = "odd_perturbed_ball"
    has_hessian = True
    is_smooth = True

    def __init__(self, dim, radius, terms, eps=1.0, label=None):
        super().__init__(dim, label)
        if not radius > 0:
            raise DomainError(f"radius must be positive, got {radius}")
        self.radius = float(radius)
        self.eps = float(eps)
        parsed = []
        for coef, powers in _normalize_terms(terms):
            powers = tuple(int(p) for p in powers)
            if len(powers) != dim:
                raise DimensionMismatchError(f"monomial {powers} does not match dimension {dim}")
            if min(powers) < 0 or sum(powers) % 2 != 1:
                raise DomainError(f"monomial {powers} is not of odd degree")
            parsed.append((float(coef), powers))
        self.terms = tuple(parsed)

    @property
    def is_symmetric(self):
        return self.eps == 0.0 or all(c == 0.0 for c, _ in self.terms)

    def _parts(self, X):
        s = np.linalg.norm(X, axis=1)
        for coef, powers in self.terms:
            yield coef * self.eps, np.asarray(powers), sum(powers), s

    def _value(self, X):
        # s * h(x/s) avoids under/overflow of s**(1-d) for extreme |x|
        s = _norms(X)
        U = X / s[:, None]
        out = np.full(len(X), self.radius)
        for coef, powers in self.terms:
            out = out + coef * self.eps * _monomial(U, np.asarray(powers))
        return s * out

    def _gradient(self, X):
        n = self.dim
        s = np.linalg.norm(X, axis=1)
        out = self.radius * X / s[:, None]
        eye = np.eye(n, dtype=int)
        for c, a, d, s in self._parts(X):
            p = _monomial(X, a)
            dp = np.column_stack([a[i] * _monomial(X, a - eye[i]) for i in range(n)])
            g = s ** (1 - d)
            dg = (1 - d) * s[:, None] ** (-d - 1) * X
            out = out + c * (dp * g[:, None] + p[:, None] * dg)
        return out

    def _hessian(self, X):
        n = self.dim
        s = np.linalg.norm(X, axis=1)
        U = X / s[:, None]
        UU = U[:, :, None] * U[:, None, :]
        out = self.radius * (np.eye(n) - UU) / s[:, None, None]
        eye = np.eye(n, dtype=int)
        for c, a, d, s in self._parts(X):
            p = _monomial(X, a)
            dp = np.column_stack([a[i] * _monomial(X, a - eye[i]) for i in range(n)])
            ddp = np.empty((len(X), n, n))
            for i in range(n):
                for j in range(n):
                    ddp[:, i, j] = a[i] * (a[j] - (i == j)) * _monomial(X, a - eye[i] - eye[j])
            g = s ** (1 - d)
            dg = (1 - d) * s[:, None] ** (-d - 1) * X
            ddg = ((1 - d) * s ** (-d - 1))[:, None, None] * (np.eye(n) - (d + 1) * UU)
            out = out + c * (
                ddp * g[:, None, None]
                + dp[:, :, None] * dg[:, None, :]
                + dg[:, :, None] * dp[:, None, :]
                + p[:, None, None] * ddg
            )
        return out


def _normalize_terms(terms):
    if isinstance(terms, dict):
        return [(c, p) for p, c in terms.items()]
    return list(terms)


class ReuleauxRevolution(SupportBody):
    """Reuleaux triangle of width w spun about one of its symmetry axes (n=3).

    In (radial, axial) coordinates the profile has one vertex on the axis at
    height w/sqrt(3); the centroid sits at the origin.  On the arc opposite
    vertex p_i the support is <p_i, v> + w|v|, elsewhere it is the max over
    vertices.
    """

    kind = "reuleaux_revolution"
    _COS30 = np.sqrt(3.0) / 2.0

    def __init__(self, width, axis=(0.0, 0.0, 1.0), label=None):
        axis = np.asarray(axis, dtype=float).ravel()
        if axis.size != 3:
            raise InvalidDimensionError("reuleaux_revolution is defined in R^3 only")
        super().__init__(3, label)
        if not width > 0:
            raise DomainError(f"width must be positive, got {width}")
        self.width = float(width)
        self.axis = axis / np.linalg.norm(axis)
        w = self.width
        self.profile = np.array(
            [[0.0, w / np.sqrt(3.0)], [w / 2, -w / (2 * np.sqrt(3.0))], [-w / 2, -w / (2 * np.sqrt(3.0))]]
        )
        self._arc_dirs = -self.profile / np.linalg.norm(self.profile, axis=1, keepdims=True)

    def _coords(self, X):
        z = X @ self.axis
        perp = X - z[:, None] * self.axis
        s = np.linalg.norm(perp, axis=1)
        return s, z, perp

    def _pieces(self, V):
        """Profile support on 2-D directions V (m, 2): value, active arc (or -1), vertex argmax."""
        r = _norms(V)
        vert = V @ self.profile.T
        cosang = (V / r[:, None]) @ self._arc_dirs.T
        arc_vals = np.where(cosang >= self._COS30, vert + self.width * r[:, None], -np.inf)
        best_arc = np.argmax(arc_vals, axis=1)
        arc_best = arc_vals[np.arange(len(V)), best_arc]
        vbest = vert.max(axis=1)
        use_arc = arc_best >= vbest
        value = np.where(use_arc, arc_best, vbest)
        return value, np.where(use_arc, best_arc, -1), np.argmax(vert, axis=1), cosang

    def _value(self, X):
        s, z, _ = self._coords(X)
        return self._pieces(np.column_stack([s, z]))[0]

    def _profile_gradient(self, V):
        _, arc, vtx, cosang = self._pieces(V)
        r = np.linalg.norm(V, axis=1)
        G = self.profile[vtx].copy()
        on_arc = arc >= 0
        G[on_arc] = self.profile[arc[on_arc]] + self.width * V[on_arc] / r[on_arc, None]
        return G, arc, cosang

    def _gradient(self, X):
        s, z, perp = self._coords(X)
        G, _, _ = self._profile_gradient(np.column_stack([s, z]))
        safe = np.where(s > 0, s, 1.0)
        e = np.where((s > 0)[:, None], perp / safe[:, None], 0.0)
        return G[:, :1] * e + G[:, 1:] * self.axis

    def _hessian(self, X):
        s, z, perp = self._coords(X)
        V = np.column_stack([s, z])
        G, arc, cosang = self._profile_gradient(V)
        if np.any(np.abs(cosang - self._COS30) < RIDGE_TOL):
            raise NoHessianError("direction lies on a ridge between arc and vertex sectors")
        r = np.linalg.norm(V, axis=1)
        Vh = V / r[:, None]
        # profile Hessian: w (I - v v^T) / |v| on arcs, zero at vertices
        on_arc = (arc >= 0).astype(float)[:, None, None]
        Hp = on_arc * self.width * (np.eye(2) - Vh[:, :, None] * Vh[:, None, :]) / r[:, None, None]
        safe = np.where(s > 0, s, 1.0)
        e = np.where((s > 0)[:, None], perp / safe[:, None], 0.0)
        a = self.axis
        # on the axis G_s / s tends to the radial second derivative
        radial = np.where(s > 0, G[:, 0] / safe, Hp[:, 0, 0])
        ee = e[:, :, None] * e[:, None, :]
        ea = e[:, :, None] * a[None, None, :]
        return (
            Hp[:, 0, 0, None, None] * ee
            + radial[:, None, None] * (np.eye(3) - np.outer(a, a) - ee)
            + Hp[:, 0, 1, None, None] * (ea + np.swapaxes(ea, 1, 2))
            + Hp[:, 1, 1, None, None] * np.outer(a, a)
        )


class MinkowskiSum(SupportBody):
    """Positive combination sum_i w_i K_i; support values add with weights."""

    kind = "sum"

    def __init__(self, parts, label=None):
        parts = [(body, float(w)) for body, w in parts]
        if not parts:
            raise DomainError("a Minkowski sum needs at least one part")
        dims = {b.dim for b, _ in parts}
        if len(dims) != 1:
            raise DimensionMismatchError(f"summands have different dimensions {sorted(dims)}")
        if any(not w > 0 for _, w in parts):
            raise DomainError("Minkowski weights must be positive")
        super().__init__(dims.pop(), label)
        self.parts = tuple(parts)

    @property
    def has_hessian(self):
        return all(b.has_hessian for b, _ in self.parts)

    @property
    def is_smooth(self):
        return all(b.is_smooth for b, _ in self.parts)

    @property
    def is_symmetric(self):
        return all(b.is_symmetric for b, _ in self.parts)

    def _value(self, X):
        return sum(w * b._value(X) for b, w in self.parts)

    def _gradient(self, X):
        return sum(w * b._gradient(X) for b, w in self.parts)

    def _hessian(self, X):
        return sum(w * b._hessian(X) for b, w in self.parts)


class Translated(SupportBody):
    kind = "translate"

    def __init__(self, body, shift, label=None):
        super().__init__(body.dim, label)
        self.body = body
        self.shift = np.asarray(shift, dtype=float).ravel()
        if self.shift.size != body.dim:
            raise DimensionMismatchError("shift has wrong dimension")

    has_hessian = property(lambda self: self.body.has_hessian)
    is_smooth = property(lambda self: self.body.is_smooth)
    is_symmetric = property(lambda self: self.body.is_symmetric)

    def _value(self, X):
        return self.body._value(X) + X @ self.shift

    def _gradient(self, X):
        return self.body._gradient(X) + self.shift

    def _hessian(self, X):
        return self.body._hessian(X)


class Reflection(SupportBody):
    """K* = -K, with h_{K*}(u) = h_K(-u)."""

    kind = "reflection"

    def __init__(self, body, label=None):
        super().__init__(body.dim, label)
        self.body = body

    has_hessian = property(lambda self: self.body.has_hessian)
    is_smooth = property(lambda self: self.body.is_smooth)
    is_symmetric = property(lambda self: self.body.is_symmetric)

    def _value(self, X):
        return self.body._value(-X)

    def _gradient(self, X):
        return -self.body._gradient(-X)

    def _hessian(self, X):
        return self.body._hessian(-X)


# -- operations -------------------------------------------------------------


def support(body, u):
    return body.support(u)


def reverse_gauss(body, u):
    """Boundary point of ``body`` with outer normal ``u`` (gradient of H at u)."""
    return body.gradient(u)


def support_hessian(body, u):
    """Hessian of the homogeneous extension of h at ``u``; it annihilates u."""
    return body.hessian(u)


def width(body, u):
    u = np.asarray(u, dtype=float)
    return body.support(u) + body.support(-u)


def reflect(body):
    if isinstance(body, Ball):
        return Ball(-body.center, body.radius, label=body.label)
    if isinstance(body, Ellipsoid):
        return Ellipsoid(body.shape, -body.center, label=body.label)
    if isinstance(body, Polytope):
        return Polytope(-body.vertices, label=body.label)
    if isinstance(body, OddPerturbedBall):
        terms = [(-c, p) for c, p in body.terms]
        return OddPerturbedBall(body.dim, body.radius, terms, body.eps, label=body.label)
    if isinstance(body, MinkowskiSum):
        return MinkowskiSum([(reflect(b), w) for b, w in body.parts], label=body.label)
    if isinstance(body, Translated):
        return Translated(reflect(body.body), -body.shift, label=body.label)
    if isinstance(body, Reflection):
        return body.body
    return Reflection(body)


def minkowski_sum(a, b):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot add bodies of dimension {a.dim} and {b.dim}")
    return MinkowskiSum([(a, 1.0), (b, 1.0)])


def scale(body, factor):
    """The dilate factor * K (factor > 0)."""
    return MinkowskiSum([(body, factor)])


def translate(body, shift):
    return Translated(body, shift)


def central_symmetral(body):
    """(K + K*) / 2: centrally symmetric, same width function as K."""
    return MinkowskiSum([(body, 0.5), (reflect(body), 0.5)])


def as_polytope(body):
    """Vertex description of ``body`` if it is built from polytopes only, else None."""
    if isinstance(body, Polytope):
        return body.vertices
    if isinstance(body, Translated):
        V = as_polytope(body.body)
        return None if V is None else V + body.shift
    if isinstance(body, Reflection):
        V = as_polytope(body.body)
        return None if V is None else -V
    if isinstance(body, MinkowskiSum):
        acc = np.zeros((1, body.dim))
        for b, w in body.parts:
            V = as_polytope(b)
            if V is None:
                return None
            acc = (acc[:, None, :] + w * V[None, :, :]).reshape(-1, body.dim)
            acc = np.unique(acc, axis=0)
        return acc
    return None


def tangent_radii(body, U):
    """Eigenvalues of the Hessian restricted to u^perp for each row of U, ascending."""
    U = np.atleast_2d(U)
    B = tangent_frames(U)
    H = body.hessian(U)
    M = np.einsum("mai,mij,mbj->mab", B, H, B)
    return np.linalg.eigvalsh(0.5 * (M + np.swapaxes(M, 1, 2)))


def make_constant_width(n, r, coeffs, eps, samples=1000, seed=0):
    """Odd-perturbed ball of width 2r, shrinking ``eps`` by halves until convex.

    The body is accepted once the smallest principal radius over ``samples``
    seeded directions exceeds 1e-3 * r.
    """
    terms = _normalize_terms(coeffs)
    if not r > 0:
        raise DomainError("r must be positive")
    if eps == 0 or all(c == 0 for c, _ in terms):
        return Ball(np.zeros(n), r)
    U = random_directions(np.random.default_rng(seed), n, samples)
    delta = 1e-3 * r
    e = float(eps)
    while abs(e) >= 1e-8 * r:
        body = OddPerturbedBall(n, r, terms, e)
        if tangent_radii(body, U).min() > delta:
            return body
        e /= 2.0
    raise ConstructionFailedError(f"could not make eps={eps} convex: shrank below {1e-8 * r}")


def check_convexity(body, U, tol=1e-9):
    """Raise ConvexityError if a restricted Hessian at any row of U is indefinite beyond ``tol``."""
    radii = tangent_radii(body, U)
    if radii.min() < -tol:
        raise ConvexityError(f"negative principal radius {radii.min():.3e}")
    return radii


def subadditivity_defect(body, P, Q):
    """max of h(p+q) - h(p) - h(q) over paired rows; <= 0 for a convex support function."""
    return float(np.max(body.support(P + Q) - body.support(P) - body.support(Q)))
