"""Algebraic constraint checkers and projection-function scans.

The constraint system studied here is, for nonnegative x, y in R^{m}:

    x_i + y_i = 2            for every i
    x_I + y_I = 2 b          for every index set I with |I| = k

where x_I is the product of the x_i over I.  It is what the relative radii
of curvature of a constant-width body satisfy at an antipodal pair of
normals when its k-th projection function is a multiple of a reference's.
"""
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import optimize

from . import bodies as B
from .errors import DomainError, NotARevolutionBodyError
from .grassmann import Subspace
from .projvol import projection_volume, subspace_stream
from .sphere import random_directions

CONSTRAINT_TOL = 1e-9
DISTINCT_TOL = 1e-9
PAIR_GAP = 1e-6
PRODUCT_TOL = 1e-8
SPREAD_THRESHOLD = 1e-4
HOMOTHETY_REL_TOL = 1e-3


@dataclass(frozen=True)
class LemmaInstance:
    x: tuple
    y: tuple
    k: int
    b: float

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        y = tuple(float(v) for v in self.y)
        if len(x) != len(y):
            raise DomainError("x and y must have the same length")
        if min(x + y) < 0:
            raise DomainError("entries must be nonnegative")
        if not self.b > 0:
            raise DomainError("b must be positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def m(self):
        """Number of coordinates (n - 1)."""
        return len(self.x)


def subset_sums(x, y, k):
    """x_I + y_I for every |I| = k, in lexicographic subset order."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    idx = np.array(list(combinations(range(x.shape[-1]), k)))
    return np.prod(x[..., idx], axis=-1) + np.prod(y[..., idx], axis=-1)


def product_spread(inst):
    """(max_i |x_i + y_i - 2|, spread of x_I + y_I over all |I| = k)."""
    if not 1 <= inst.k <= inst.m:
        raise DomainError(f"k={inst.k} outside 1..{inst.m}")
    x, y = np.array(inst.x), np.array(inst.y)
    sums = subset_sums(x, y, inst.k)
    return float(np.max(np.abs(x + y - 2.0))), float(sums.max() - sums.min())


def hypotheses_hold(inst, tol=CONSTRAINT_TOL):
    pairs, _ = product_spread(inst)
    sums = subset_sums(inst.x, inst.y, inst.k)
    return pairs < tol and float(np.max(np.abs(sums - 2.0 * inst.b))) < tol


def distinct_values(values, tol=DISTINCT_TOL):
    """Cluster sorted values whose consecutive gaps are <= tol."""
    v = np.sort(np.asarray(values, dtype=float))
    reps = [v[0]]
    for a in v[1:]:
        if a - reps[-1] > tol:
            reps.append(a)
    return reps


@dataclass(frozen=True)
class Verdict:
    status: str  # "pass", "fail" or "not-applicable"
    detail: str = ""
    witness: tuple = field(default=())

    def __bool__(self):
        return self.status != "fail"


def check_alg2(inst, tol=CONSTRAINT_TOL):
    """If the constraint system holds, x and y take at most two distinct values each."""
    if not 2 <= inst.k <= inst.m - 1:
        raise DomainError(f"two-value check needs 2 <= k <= n-2, got k={inst.k}, n-1={inst.m}")
    if not hypotheses_hold(inst, tol):
        return Verdict("not-applicable", "constraint system violated")
    dx, dy = distinct_values(inst.x), distinct_values(inst.y)
    if len(dx) <= 2 and len(dy) <= 2:
        return Verdict("pass", f"{len(dx)} distinct x, {len(dy)} distinct y")
    return Verdict("fail", "more than two distinct values", (tuple(dx), tuple(dy)))


def check_alg3(inst, tol=CONSTRAINT_TOL):
    """For k = n-2: whenever x_i != x_j, the products over l != i, j of x_l and of y_l equal b."""
    if inst.m < 3:
        raise DomainError("needs n >= 4")
    if inst.k != inst.m - 1:
        raise DomainError(f"needs k = n-2 = {inst.m - 1}, got {inst.k}")
    if not hypotheses_hold(inst, tol):
        return Verdict("not-applicable", "constraint system violated")
    x, y = np.array(inst.x), np.array(inst.y)
    checked = []
    for i, j in combinations(range(inst.m), 2):
        if abs(x[i] - x[j]) <= PAIR_GAP:
            continue
        rest = [l for l in range(inst.m) if l not in (i, j)]
        px, py = float(np.prod(x[rest])), float(np.prod(y[rest]))
        checked.append((i, j, px, py))
        if abs(px - inst.b) > PRODUCT_TOL or abs(py - inst.b) > PRODUCT_TOL:
            return Verdict("fail", f"pair ({i}, {j}) gives products {px!r}, {py!r}", (i, j, px, py))
    if not checked:
        return Verdict("pass", "vacuous: no pair with x_i != x_j")
    return Verdict("pass", f"{len(checked)} pairs checked", tuple(checked))


def two_value_instance(m, k, ell, a):
    """Instance with x = (a,)*ell + (c,)*(m-ell), y = 2 - x, solving the subset system for c.

    Returns None when no admissible c in [0, 2] other than c = a exists.
    """
    if not 1 <= ell <= m - 1:
        raise DomainError("ell must split the coordinates into two nonempty groups")

    def spread(c):
        x = np.array([a] * ell + [c] * (m - ell))
        s = subset_sums(x, 2.0 - x, k)
        return s.max() - s.min()

    def residual(c):
        # signed version: sums with the fewest a's minus sums with the most
        x = np.array([a] * ell + [c] * (m - ell))
        s = subset_sums(x, 2.0 - x, k)
        return s[-1] - s[0]

    grid = np.linspace(0.0, 2.0, 401)
    vals = np.array([residual(c) for c in grid])
    roots = []
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if flo == 0.0:
            roots.append(lo)
        elif flo * fhi < 0:
            roots.append(optimize.brentq(residual, lo, hi, xtol=1e-15))
    for c in roots:
        if abs(c - a) > 1e-6 and spread(c) < CONSTRAINT_TOL:
            x = [a] * ell + [c] * (m - ell)
            y = [2.0 - v for v in x]
            b = float(subset_sums(x, y, k)[0]) / 2.0
            return LemmaInstance(tuple(x), tuple(y), k, b) if b > 0 else None
    return None


def constant_instance(m, k, a):
    x = (float(a),) * m
    y = (2.0 - float(a),) * m
    return LemmaInstance(x, y, k, (a**k + (2.0 - a) ** k) / 2.0)


def solve_case_c(beta):
    """The pair (x_low, x_high) with x_low + x_high = 2 and x_low * x_high = beta.

    Equals (1 - sqrt(1 - beta), 1 + sqrt(1 - beta)); the small root is
    evaluated as beta / (1 + sqrt(1 - beta)) to avoid cancellation.
    """
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    s = np.sqrt(1.0 - beta)
    return float(beta / (1.0 + s)), float(1.0 + s)


def power_mean_gap(x, y, k):
    """(x^k + y^k)/2 - ((x + y)/2)^k, nonnegative for x, y >= 0 and k >= 1."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return (x**k + y**k) / 2.0 - ((x + y) / 2.0) ** k


@dataclass(frozen=True)
class ScanVerdict:
    alpha_mean: float
    alpha_spread: float
    beta_mean: float
    beta_spread: float
    verdict: str
    k: int
    n_samples: int
    seed: int
    width_ratios: np.ndarray = field(repr=False, compare=False, default=None)
    brightness_ratios: np.ndarray = field(repr=False, compare=False, default=None)
    profiles: dict = field(repr=False, compare=False, default=None)

    @property
    def beta_normalized(self):
        """Brightness ratio after dilating K so that alpha = 1."""
        return self.beta_mean / self.alpha_mean**self.k


def _spread(r):
    return float((r.max() - r.min()) / r.mean())


def nakajima_scan(K, K0, k, N, seed, order=None, threshold=SPREAD_THRESHOLD):
    """Compare width and k-brightness functions of K against a symmetric reference K0."""
    if K.dim != K0.dim:
        raise DomainError("bodies must share the ambient dimension")
    if not K0.is_symmetric:
        raise DomainError("reference body must be centrally symmetric")
    U = random_directions(np.random.default_rng(seed), K.dim, N)
    w = (K.support(U) + K.support(-U)) / (K0.support(U) + K0.support(-U))
    subspaces = subspace_stream(seed, K.dim, k, N)
    b = np.array([projection_volume(K, S, order) / projection_volume(K0, S, order) for S in subspaces])
    return _verdict(w, b, k, seed, threshold)


def _verdict(w, b, k, seed, threshold, profiles=None):
    a_mean, a_spread = float(w.mean()), _spread(w)
    b_mean, b_spread = float(b.mean()), _spread(b)
    if a_spread >= threshold or b_spread >= threshold:
        verdict = "not-proportional"
    elif abs(b_mean - a_mean**k) <= HOMOTHETY_REL_TOL * a_mean**k:
        verdict = "consistent-homothety"
    else:
        verdict = "proportional-but-unequal"
    return ScanVerdict(a_mean, a_spread, b_mean, b_spread, verdict, k, len(b), seed, w, b, profiles)


def _axis_complement(axis):
    Q, _ = np.linalg.qr(np.column_stack([axis, np.eye(len(axis))]))
    return Q[:, 1:]


def is_revolution_body(body, axis, n_rotations=16, n_directions=64, tol=1e-9, seed=0):
    rng = np.random.default_rng(seed)
    U = random_directions(rng, body.dim, n_directions)
    h = body.support(U)
    C = _axis_complement(axis)
    for _ in range(n_rotations):
        # random rotations inside the orthogonal complement of the axis
        G = np.linalg.qr(rng.standard_normal((body.dim - 1, body.dim - 1)))[0]
        R = np.outer(axis, axis) + C @ G @ C.T
        if np.max(np.abs(body.support(U @ R.T) - h)) > tol * max(1.0, np.abs(h).max()):
            return False
    return True


def revolution_check(K, K0, axis, k, N, seed, order=None, profile_points=33, threshold=SPREAD_THRESHOLD):
    """nakajima_scan for bodies of revolution about a common axis, with polar-angle profiles.

    ``profiles`` holds the width ratio at polar angle t against the axis and
    the k-brightness ratio on the subspace spanned by the direction at angle t
    and k-1 directions orthogonal to the axis.
    """
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    for body in (K, K0):
        if not is_revolution_body(body, axis):
            raise NotARevolutionBodyError(f"{body.kind} body is not rotationally symmetric about {axis}")
    scan = nakajima_scan(K, K0, k, N, seed, order, threshold)
    C = _axis_complement(axis)
    t = np.linspace(0.0, np.pi / 2, profile_points)
    dirs = np.cos(t)[:, None] * axis + np.sin(t)[:, None] * C[:, 0]
    wp = B.width(K, dirs) / B.width(K0, dirs)
    bp = []
    for d in dirs:
        S = Subspace.span(d, *C[:, 1:k].T) if k > 1 else Subspace.span(d)
        bp.append(projection_volume(K, S, order) / projection_volume(K0, S, order))
    profiles = {"polar_angle": t, "width_ratio": wp, "brightness_ratio": np.array(bp)}
    return _verdict(scan.width_ratios, scan.brightness_ratios, k, seed, threshold, profiles)


def odd_ball_family(n, eps, radius=1.0, powers=None):
    powers = powers or (3,) + (0,) * (n - 1)
    return B.OddPerturbedBall(n, radius, [(1.0, powers)], eps)


def variance_descent(n, k, eps_values, N, seed, order=None):
    """beta-spread of odd-perturbed balls h = 1 + eps * u_1^3 against the unit ball, one row per eps."""
    ref = B.Ball(np.zeros(n), 1.0)
    rows = []
    for eps in eps_values:
        scan = nakajima_scan(odd_ball_family(n, eps), ref, k, N, seed, order)
        rows.append((float(eps), scan.alpha_spread, scan.beta_spread, scan.beta_mean, scan.verdict))
    return rows


def valid_instances(m=4, ks=(2, 3), grid=np.linspace(0.0, 2.0, 21)):
    """Constant and two-valued instances that satisfy the constraint system exactly."""
    out = []
    for k in ks:
        for a in grid:
            out.append(constant_instance(m, k, a))
            for ell in range(1, m):
                inst = two_value_instance(m, k, ell, a)
                if inst is not None:
                    out.append(inst)
    return out


def fuzz_three_valued(m, k, N, seed, tol=CONSTRAINT_TOL):
    """Count random x in [0, 2]^m with >= 3 distinct values (y = 2 - x) whose subset sums agree."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 2.0, size=(N, m))
    xs = np.sort(x, axis=1)
    distinct = 1 + np.sum(np.diff(xs, axis=1) > DISTINCT_TOL, axis=1)
    x = x[distinct >= 3]
    sums = subset_sums(x, 2.0 - x, k)
    return len(x), int(np.sum(sums.max(axis=1) - sums.min(axis=1) < tol))


SUITE_COLUMNS = ("check", "k", "cases", "failures", "max_residual")


def lemma_suite(fuzz=100_000, seed=0, m=4):
    """Run every algebraic check; one row per check, failures must be 0."""
    rows = []
    insts = valid_instances(m)
    for k in (2, 3):
        group = [i for i in insts if i.k == k]
        bad = [i for i in group if check_alg2(i).status != "pass"]
        worst = max(max(product_spread(i)) for i in group)
        rows.append(("two_values", k, len(group), len(bad), worst))
    group = [i for i in insts if i.k == m - 1]
    bad = [i for i in group if check_alg3(i).status != "pass"]
    rows.append(("product_identity", m - 1, len(group), len(bad), 0.0))
    for k in (2, 3):
        n_cases, hits = fuzz_three_valued(m, k, fuzz, seed + k)
        rows.append(("fuzz_three_valued", k, n_cases, hits, 0.0))
    rng = np.random.default_rng(seed)
    betas = rng.uniform(0.0, 1.0, 1000)
    betas = betas[(betas > 0) & (betas < 1)]
    sols = np.array([solve_case_c(b) for b in betas])
    res = max(np.max(np.abs(sols.sum(axis=1) - 2.0)), np.max(np.abs(sols.prod(axis=1) - betas)))
    rows.append(("case_c_closed_form", 3, len(betas), int(res > 1e-14), float(res)))
    x, y = rng.uniform(0.0, 3.0, (2, fuzz))
    kk = rng.integers(1, 8, fuzz)
    gaps = power_mean_gap(x, y, kk)
    rows.append(("power_mean_gap", 0, fuzz, int(np.sum(gaps < -1e-12)), float(-min(gaps.min(), 0.0))))
    return rows
