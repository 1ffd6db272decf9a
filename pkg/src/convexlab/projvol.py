"""k-volumes of projections V_k(K|U), brightness statistics and Minkowski gaps."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import bodies as B
from .errors import DimensionMismatchError, DomainError, UnsupportedMethodError
from .grassmann import Subspace, haar_subspace, project_body
from .sphere import sphere_quadrature

DEFAULT_ORDER = {2: 512, 3: 4000, 4: 8000}
CORNER_ORDER = 4096


def hull_volume(points, k):
    """k-volume of the convex hull of ``points`` (rows in R^k), k <= 3."""
    P = np.asarray(points, dtype=float).reshape(len(points), -1)
    if k > 3:
        raise UnsupportedMethodError(f"hull volumes are implemented for k <= 3, got k={k}")
    if P.shape[1] != k:
        raise DimensionMismatchError(f"points live in R^{P.shape[1]}, expected R^{k}")
    if len(P) < k + 1:
        raise DomainError(f"need at least {k + 1} points for a {k}-volume")
    if k == 1:
        return float(P.max() - P.min())
    if k == 2:
        return abs(_shoelace(monotone_chain(P)))
    try:
        return float(ConvexHull(P).volume)
    except QhullError:
        return 0.0


def monotone_chain(P):
    """Convex hull vertices of 2-D points in counter-clockwise order."""
    pts = sorted(set(map(tuple, np.asarray(P, dtype=float))))
    if len(pts) <= 2:
        return np.array(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _shoelace(poly):
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def curvature_quadrature_volume(body, order=None):
    """(1/k) * integral over S^{k-1} of h * det(d^2 h | v^perp) for a body in R^k."""
    k = body.dim
    rule = sphere_quadrature(k - 1, order or DEFAULT_ORDER.get(k, 8000))
    V = rule.nodes
    H = body.hessian(V)
    # H annihilates v, so adding v v^T puts eigenvalue 1 on v and keeps the tangent spectrum
    det = np.linalg.det(H + V[:, :, None] * V[:, None, :])
    return float(np.dot(rule.weights, body.support(V) * det)) / k


def corner_robust_area(body, order=None):
    """Area of a planar body as (1/2) * integral of g^2 - g'^2 over the circle.

    Only first derivatives of the support function enter, taken by central
    differences on the uniform angle grid, so corners are harmless.  The
    body is first moved to its Steiner point (the first Fourier mode of g is
    removed), which makes the discrete formula translation invariant.
    """
    if body.dim != 2:
        raise DimensionMismatchError("corner-robust area needs a planar body")
    m = order or CORNER_ORDER
    theta = 2.0 * np.pi * np.arange(m) / m
    step = 2.0 * np.pi / m
    c, s = np.cos(theta), np.sin(theta)
    g = body.support(np.column_stack([c, s]))
    g = g - (2.0 / m) * (np.dot(g, c) * c + np.dot(g, s) * s)
    dg = (np.roll(g, -1) - np.roll(g, 1)) / (2.0 * step)
    return 0.5 * step * float(np.sum(g * g - dg * dg))


def projection_volume(body, U, order=None, method="auto"):
    """V_k(K|U).

    ``method`` is one of "auto", "width", "hull", "quadrature", "corner".
    Auto dispatch: k=1 width; polytopes with k <= 3 exact hull; bodies with
    Hessians curvature quadrature; otherwise k=2 corner-robust.
    """
    if body.dim != U.n:
        raise DimensionMismatchError(f"body in R^{body.dim}, subspace in R^{U.n}")
    k = U.k
    if method == "auto":
        method = _choose_method(body, k)
    if method == "width":
        q = U.basis[:, 0]
        return B.width(body, q)
    if method == "hull":
        V = B.as_polytope(body)
        if V is None:
            raise UnsupportedMethodError("hull method needs a polytope")
        return hull_volume(V @ U.basis, k)
    proj = project_body(body, U)
    if method == "quadrature":
        if not proj.has_hessian:
            raise UnsupportedMethodError(f"{body.kind} body has no Hessian for curvature quadrature")
        return curvature_quadrature_volume(proj, order)
    if method == "corner":
        if k != 2:
            raise UnsupportedMethodError("corner-robust formula is planar (k=2) only")
        return corner_robust_area(proj, order)
    raise UnsupportedMethodError(f"unknown method {method!r}")


def _choose_method(body, k):
    if k == 1:
        return "width"
    if k <= 3 and B.as_polytope(body) is not None:
        return "hull"
    if body.has_hessian:
        return "quadrature"
    if k == 2:
        return "corner"
    raise UnsupportedMethodError(f"no projection-volume method for a {body.kind} body with k={k}")


def volume(body, order=None):
    return projection_volume(body, Subspace(np.eye(body.dim)), order)


CSV_HEADER = ("body-id", "n", "k", "N", "seed", "mean", "std", "min", "max", "rel-spread")


@dataclass(frozen=True)
class BrightnessReport:
    k: int
    n_samples: int
    mean: float
    std: float
    min: float
    max: float
    rel_spread: float
    seed: int
    values: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def stderr(self):
        return self.std / np.sqrt(self.n_samples)

    def csv_row(self, body_id, n):
        return [body_id, n, self.k, self.n_samples, self.seed] + [
            repr(float(x)) for x in (self.mean, self.std, self.min, self.max, self.rel_spread)
        ]

    def as_dict(self):
        d = asdict(self)
        d.pop("values")
        return d


def subspace_stream(seed, n, k, N):
    """N Haar subspaces, the i-th drawn from its own child of SeedSequence(seed)."""
    children = np.random.SeedSequence(seed).spawn(N)
    return [haar_subspace(np.random.default_rng(c), n, k) for c in children]


def brightness_stats(body, k, N, seed, order=None, workers=1, method="auto"):
    """Monte Carlo statistics of V_k(K|U) over N Haar-random subspaces.

    Sample i always uses the i-th child stream of ``seed``, so the report is
    independent of ``workers``.
    """
    if N < 2:
        raise DomainError("need N >= 2 samples")
    subspaces = subspace_stream(seed, body.dim, k, N)

    def one(U):
        return projection_volume(body, U, order, method)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = np.array(list(pool.map(one, subspaces)))
    else:
        vals = np.array([one(U) for U in subspaces])
    return summarize(vals, k, seed)


def summarize(vals, k, seed):
    vals = np.asarray(vals, dtype=float)
    mean = float(vals.mean())
    return BrightnessReport(
        k=k,
        n_samples=len(vals),
        mean=mean,
        std=float(vals.std(ddof=1)),
        min=float(vals.min()),
        max=float(vals.max()),
        rel_spread=float((vals.max() - vals.min()) / mean),
        seed=seed,
        values=vals,
    )


def minkowski_projection_gap(a, b, U, k=None, order=None):
    """V_k((a+b)|U)^(1/k) - V_k(a|U)^(1/k) - V_k(b|U)^(1/k); nonnegative by Minkowski's inequality."""
    if a.dim != b.dim:
        raise DimensionMismatchError("bodies must share the ambient dimension")
    k = U.k if k is None else k
    if k != U.k:
        raise DimensionMismatchError(f"k={k} does not match subspace dimension {U.k}")
    vab = projection_volume(B.minkowski_sum(a, b), U, order)
    va = projection_volume(a, U, order)
    vb = projection_volume(b, U, order)
    return vab ** (1.0 / k) - va ** (1.0 / k) - vb ** (1.0 / k)
