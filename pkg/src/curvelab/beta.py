"""Jones beta numbers and their metric substitutes.

Euclidean quantities (``beta_inf``, ``beta_p``) measure distance to lines and
need coordinates. ``beta2_ball`` and ``beta_tilde_arc`` only use distances and
work in every space. ``dyadic_excess_sum`` is the telescoping sum of midpoint
excesses over a dyadic filtration of a closed curve.

For a Euclidean ball, ``diam(B)`` means the diameter of the ball as a subset
of R^d, i.e. twice the radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .curvature import NOISE_ULPS
from .curves import Arc, Curve, DyadicFiltration, Sample
from .errors import DomainError, UnsupportedOperation
from .kernels import DEFAULT_CAP, excess_integrand, triple_sum
from .metric import Ball, MetricSpace, as_ids
from .nets import MultiresolutionFamily

_CHUNK_ELEMS = 1 << 22


# -- Euclidean line fitting ----------------------------------------------------------

def _require_euclidean(space: MetricSpace) -> None:
    if not space.euclidean:
        raise UnsupportedOperation("this beta number needs Euclidean coordinates")


def _ball_points(cloud, ball: Ball, domain) -> np.ndarray:
    ids = as_ids(domain, cloud.n)
    d = cloud.distances_from(cloud.points[ball.center], ids)
    return ids[d <= ball.radius]


def orthogonal_regression(X: np.ndarray, w: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Weighted total-least-squares line: ``(centroid, unit direction)``."""
    w = np.ones(len(X)) if w is None else np.asarray(w, float)
    c = (w[:, None] * X).sum(axis=0) / w.sum()
    Y = (X - c) * np.sqrt(w)[:, None]
    _, _, vt = np.linalg.svd(Y, full_matrices=False)
    return c, vt[0]


def _line_distances(X: np.ndarray, anchors: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Distances of every point of X to each line ``anchor + t*dir``; shape (lines, points)."""
    rel = X[None, :, :] - anchors[:, None, :]
    along = np.einsum("lpd,ld->lp", rel, dirs)
    perp = rel - along[:, :, None] * dirs[:, None, :]
    return np.sqrt((perp * perp).sum(axis=2))


def _candidate_chunks(X: np.ndarray):
    """Yield ``(anchors, dirs)`` for the finite line candidate set.

    Candidates: the line through every pair of points, the regression line,
    and for each pair direction the parallel line through the midrange of the
    perpendicular offsets (the thinnest strip with that direction, in 2-D).
    """
    k, d = X.shape
    c, u = orthogonal_regression(X)
    yield c[None, :], u[None, :]
    iu, ju = np.triu_indices(k, 1)
    step = max(1, _CHUNK_ELEMS // max(k * d, 1))
    for s in range(0, iu.size, step):
        i, j = iu[s:s + step], ju[s:s + step]
        dirs = X[j] - X[i]
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        yield X[i], dirs
        rel = X[None, :, :] - X[i][:, None, :]
        along = np.einsum("lpd,ld->lp", rel, dirs)
        perp = rel - along[:, :, None] * dirs[:, None, :]
        mid = (perp.min(axis=1) + perp.max(axis=1)) / 2
        yield X[i] + mid, dirs


def _planar_width(X: np.ndarray) -> float | None:
    """Half-width of the thinnest strip around planar points, or None when
    the hull is degenerate.

    Some side of an optimal strip is flush with a convex hull edge, so only
    hull edge directions need checking.
    """
    try:
        hull = ConvexHull(X)
    except QhullError:
        return None
    H = X[hull.vertices]
    edges = np.roll(H, -1, axis=0) - H
    normals = np.c_[-edges[:, 1], edges[:, 0]]
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    off = normals @ X.T
    return float((off.max(axis=1) - off.min(axis=1)).min() / 2)


def _thinnest(X: np.ndarray) -> float:
    """Smallest max point-to-line distance over lines; exact in the plane,
    best of the candidate set otherwise. Widths within rounding of zero are 0."""
    extent = float(np.ptp(X, axis=0).max())
    floor = NOISE_ULPS * np.finfo(float).eps * extent
    # every point lies within the trailing singular mass of the principal line
    s = np.linalg.svd(X - X.mean(axis=0), compute_uv=False)
    if float(np.sqrt((s[1:] ** 2).sum())) <= floor:
        return 0.0
    best = _planar_width(X) if X.shape[1] == 2 else None
    if best is None:
        best = _candidate_width(X)
    return 0.0 if best <= floor else best


def _candidate_width(X: np.ndarray) -> float:
    best = np.inf
    for anchors, dirs in _candidate_chunks(X):
        best = min(best, float(_line_distances(X, anchors, dirs).max(axis=1).min()))
    return best


def beta_inf(cloud, ball: Ball, domain=None) -> float:
    """Half-width of the thinnest candidate cylinder around ``B ∩ domain``, over diam(B)."""
    _require_euclidean(cloud)
    ids = _ball_points(cloud, ball, domain)
    if ids.size <= 2:
        return 0.0
    X = cloud.points[ids]
    X = np.unique(X, axis=0)
    if len(X) <= 2:
        return 0.0
    return _thinnest(X) / (2.0 * ball.radius)


def beta_p(cloud, ball: Ball, weights, p: int = 2, domain=None) -> float:
    """L^p beta number of the weighted points in ``B``.

    ``weights`` is indexed like the cloud. p=2 uses the exact weighted
    regression line; p=1 takes the best line of the candidate set.
    """
    _require_euclidean(cloud)
    if p not in (1, 2):
        raise DomainError(f"beta_p supports p in {{1, 2}}, got {p}")
    weights = np.asarray(weights, float)
    if np.any(weights < 0):
        raise DomainError("weights must be nonnegative")
    ids = _ball_points(cloud, ball, domain)
    w = weights[ids]
    mass = w.sum()
    if not mass > 0:
        raise DomainError("ball carries zero mass")
    X = cloud.points[ids]
    diam = 2.0 * ball.radius
    if p == 2:
        c, u = orthogonal_regression(X, w)
        dist = _line_distances(X, c[None, :], u[None, :])[0]
        return float(np.sqrt((w * dist * dist).sum() / mass) / diam)
    if len(X) <= 2:
        return 0.0
    best = np.inf
    for anchors, dirs in _candidate_chunks(X):
        best = min(best, float((_line_distances(X, anchors, dirs) @ w).min() / mass))
    return best / diam


@dataclass
class MultiresReport:
    """A sum over the balls of a family with one row per ball."""

    total: float
    rows: list[dict] = field(default_factory=list)


def beta_inf_multires_sum(cloud, domain, family: MultiresolutionFamily) -> MultiresReport:
    """Sum of ``beta_inf(B)^2 * diam(B)`` over every ball of the family."""
    _require_euclidean(cloud)
    rows = []
    total = 0.0
    for n, ball in family.balls():
        b = beta_inf(cloud, ball, domain)
        term = b * b * 2.0 * ball.radius
        total += term
        rows.append({"scale": n, "center": ball.center, "radius": ball.radius,
                     "beta_inf": b, "term": term})
    return MultiresReport(total, rows)


# -- metric beta numbers ---------------------------------------------------------------

@dataclass(frozen=True)
class BetaReport:
    ball: Ball
    value: float  # beta_2(B)
    triple_sum: float  # sum of excess * w^3 over ordered triples in B
    members: int
    mode: str
    stderr: float  # standard error of triple_sum (0 when exact)
    local_diam: float  # diam(B ∩ samples)
    seed: int | None = None

    @property
    def term(self) -> float:
        """``beta_2(B)^2 * radius(B)``: the per-ball summand of the multiresolution sum."""
        return self.triple_sum / self.ball.radius ** 3

    def as_row(self) -> dict:
        return {"center": self.ball.center, "radius": self.ball.radius, "members": self.members,
                "beta2": self.value, "term": self.term, "triple_sum": self.triple_sum,
                "mode": self.mode, "stderr": self.stderr, "local_diam": self.local_diam}


def beta2_ball(sample: Sample, ball: Ball, *, mode: str = "det", cap: int = DEFAULT_CAP,
               seed: int = 0, key: tuple[int, ...] = (), workers: int = 1) -> BetaReport:
    """``beta_2(B)^2 = radius^-4 * sum of excess * w_i w_j w_k`` over sample triples in B.

    The ball center is an id of ``sample.space``.
    """
    inside = sample.distances_to(ball.center) <= ball.radius
    sub = sample.restrict(inside)
    k = len(sub)
    if k < 3:
        diam = float(sub.distances().max()) if k == 2 else 0.0
        return BetaReport(ball, 0.0, 0.0, k, "det", 0.0, diam, None)
    D = sub.distances()
    ts = triple_sum(D, sub.weights, excess_integrand, mode=mode, cap=cap, seed=seed, key=key,
                    workers=workers)
    value = np.sqrt(max(ts.value, 0.0)) / ball.radius ** 2
    return BetaReport(ball, float(value), ts.value, k, ts.mode, ts.stderr, float(D.max()),
                      ts.seed)


def ordered_excess_sum(D: np.ndarray) -> float:
    """``sum_{i<j<k} D[i,j] + D[j,k] - D[i,k]`` in O(m^2)."""
    m = D.shape[0]
    if m < 3:
        return 0.0
    j = np.arange(m)
    upper = np.triu(D, 1)
    left = upper.sum(axis=0)  # sum_{i<j} D[i,j]
    right = upper.sum(axis=1)  # sum_{k>j} D[j,k]
    R = np.cumsum(D, axis=1)
    tail = R[:, -1:] - R  # tail[i, j] = sum_{k>j} D[i,k]
    cross = np.zeros(m)
    cross[1:] = np.cumsum(tail, axis=0)[j[1:] - 1, j[1:]]  # sum_{i<j} tail[i, j]
    return float(((m - 1 - j) * left + j * right - cross).sum())


def beta_tilde_arc(curve: Curve, arc: Arc, m: int = 200) -> float:
    """Jones-type beta number of a sub-arc from ordered triple excesses.

    ``beta~^2 * diam = length^-3 * (integral over a<x<y<z<b of the ordered
    excess)``, evaluated with an m-point midpoint rule.
    """
    if m < 3:
        raise DomainError("beta_tilde_arc needs m >= 3")
    L = arc.length
    if L <= 0:
        return 0.0
    h = L / m
    s = arc.a + (np.arange(m) + 0.5) * h
    sample = curve.sample_at(np.concatenate([s, [arc.a, arc.b]]))
    Dfull = sample.distances()
    diam = float(Dfull.max())
    if diam <= 0:
        return 0.0
    integral = ordered_excess_sum(Dfull[:m, :m]) * h ** 3
    return float(np.sqrt(max(integral, 0.0) / L ** 3 / diam))


@dataclass(frozen=True)
class DyadicExcess:
    total: float
    per_level: np.ndarray  # per_level[k-1] sums the level-k terms, k = 1..depth
    length: float  # curve length, the telescoping bound

    @property
    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.per_level)


def dyadic_excess_sum(curve: Curve, depth: int, filtration: DyadicFiltration | int = 0) -> DyadicExcess:
    """Sum of midpoint excesses over dyadic intervals of levels 1..depth.

    Level 1 is the whole circle, level k has ``2**(k-1)`` intervals. Parameter
    ``t`` in [0, 1) maps to arc length ``t * length``; filtration 1 shifts the
    grid by 1/3.
    """
    if not curve.closed:
        raise DomainError("dyadic excess sums need a closed curve")
    if depth < 1:
        raise DomainError("depth must be at least 1")
    offset = filtration.offset if isinstance(filtration, DyadicFiltration) else int(filtration)
    fine = DyadicFiltration(offset, depth).endpoints(depth)  # 2**depth grid points
    N = fine.size
    sample = curve.sample_at(fine * curve.length)
    ids = sample.ids
    per_level = np.empty(depth)
    for k in range(1, depth + 1):
        step = N >> (k - 1)  # interval width in grid steps
        a = np.arange(0, N, step)
        mid = a + step // 2
        b = (a + step) % N
        d_am = sample.space.paired(ids[a], ids[mid])
        d_mb = sample.space.paired(ids[mid], ids[b])
        d_ab = sample.space.paired(ids[a], ids[b])
        per_level[k - 1] = float((d_am + d_mb - d_ab).sum())
    return DyadicExcess(float(per_level.sum()), per_level, curve.length)
