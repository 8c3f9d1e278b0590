"""Finite metric spaces, closed balls and subset diameters.

Three concrete spaces are provided:

* :class:`EuclideanCloud` -- points in R^d with the Euclidean metric,
* :class:`ExplicitMetric` -- a validated n x n distance matrix,
* :class:`PowerTransform` -- ``dist**alpha`` over another space (the snowflake).

Every space exposes the same small surface (``n``, ``dist``, ``pairwise``,
``scaled``) so downstream code never branches on the concrete type except where
Euclidean geometry is genuinely required.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DomainError, ValidationError

SYMMETRY_TOL = 1e-12
TRIANGLE_TOL = 1e-9
EXHAUSTIVE_LIMIT = 300


def as_ids(ids: Iterable[int] | np.ndarray | None, n: int) -> np.ndarray:
    """Normalize a point subset to an int array, validating range."""
    if ids is None:
        return np.arange(n)
    arr = np.asarray(ids, dtype=np.int64).reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise DomainError(f"point id out of range for a space of {n} points")
    return arr


class MetricSpace:
    """Common interface; subclasses implement ``_block``."""

    n: int

    # geometry hooks
    euclidean = False
    interpolable = False

    def _block(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def pairwise(self, a=None, b=None) -> np.ndarray:
        """Distance block between id sets ``a`` and ``b`` (``b`` defaults to ``a``)."""
        ia = as_ids(a, self.n)
        ib = ia if b is None else as_ids(b, self.n)
        return self._block(ia, ib)

    def paired(self, a, b) -> np.ndarray:
        """Elementwise distances ``dist(a[k], b[k])``."""
        ia, ib = as_ids(a, self.n), as_ids(b, self.n)
        return np.array([self._block(ia[k:k + 1], ib[k:k + 1])[0, 0] for k in range(ia.size)])

    def dist(self, i: int, j: int) -> float:
        ij = as_ids([i, j], self.n)
        return float(self._block(ij[:1], ij[1:])[0, 0])

    def scaled(self, factor: float) -> "MetricSpace":
        raise NotImplementedError

    def check_axioms(self, ids=None, samples: int = 20000, seed: int = 0) -> None:
        """Raise :class:`ValidationError` if the metric axioms fail.

        Exhaustive for at most 300 points, random triples above that.
        """
        ids = as_ids(ids, self.n)
        check_metric_matrix(self.pairwise(ids) if ids.size <= EXHAUSTIVE_LIMIT else None,
                            space=self, ids=ids, samples=samples, seed=seed)


class EuclideanCloud(MetricSpace):
    euclidean = True
    interpolable = True

    def __init__(self, points: Sequence[Sequence[float]] | np.ndarray):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValidationError("a point cloud needs at least one point given as rows of coordinates")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("point coordinates must be finite")
        pts.setflags(write=False)
        self.points = pts
        self.n = pts.shape[0]
        self.dim = pts.shape[1]

    def _block(self, a, b):
        return cdist(self.points[a], self.points[b])

    def paired(self, a, b):
        ia, ib = as_ids(a, self.n), as_ids(b, self.n)
        return np.sqrt(((self.points[ia] - self.points[ib]) ** 2).sum(axis=1))

    def distances_from(self, x: np.ndarray, ids=None) -> np.ndarray:
        """Distances from an arbitrary coordinate ``x`` to the given points."""
        ids = as_ids(ids, self.n)
        return np.sqrt(((self.points[ids] - np.asarray(x, dtype=float)) ** 2).sum(axis=1))

    def scaled(self, factor: float) -> "EuclideanCloud":
        return EuclideanCloud(self.points * factor)

    def __repr__(self) -> str:
        return f"EuclideanCloud(n={self.n}, dim={self.dim})"


class ExplicitMetric(MetricSpace):
    def __init__(self, matrix, validate: bool = True):
        d = np.array(matrix, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise ValidationError("distance matrix must be square and nonempty")
        if validate:
            check_metric_matrix(d)
        d.setflags(write=False)
        self.matrix = d
        self.n = d.shape[0]

    @classmethod
    def from_flat(cls, n: int, flat: Sequence[float]) -> "ExplicitMetric":
        flat = np.asarray(flat, dtype=float)
        if flat.size != n * n:
            raise ValidationError(f"expected {n * n} distances for n={n}, got {flat.size}")
        return cls(flat.reshape(n, n))

    def _block(self, a, b):
        return self.matrix[np.ix_(a, b)]

    def paired(self, a, b):
        return self.matrix[as_ids(a, self.n), as_ids(b, self.n)]

    def scaled(self, factor: float) -> "ExplicitMetric":
        return ExplicitMetric(self.matrix * factor, validate=False)

    def __repr__(self) -> str:
        return f"ExplicitMetric(n={self.n})"


class PowerTransform(MetricSpace):
    """``dist**alpha`` over ``base``; a metric for alpha in (0, 1]."""

    def __init__(self, base: MetricSpace, alpha: float):
        if not 0 < alpha <= 1:
            raise DomainError(f"power transform exponent must lie in (0, 1], got {alpha}")
        self.base = base
        self.alpha = float(alpha)
        self.n = base.n

    def _block(self, a, b):
        return self.base._block(a, b) ** self.alpha

    def paired(self, a, b):
        return self.base.paired(a, b) ** self.alpha

    def scaled(self, factor: float) -> "PowerTransform":
        # (c * d)**alpha == factor * d**alpha  with  c = factor**(1/alpha)
        return PowerTransform(self.base.scaled(factor ** (1.0 / self.alpha)), self.alpha)

    def __repr__(self) -> str:
        return f"PowerTransform({self.base!r}, alpha={self.alpha})"


def check_metric_matrix(d: np.ndarray | None, space: MetricSpace | None = None, ids=None,
                        samples: int = 20000, seed: int = 0) -> None:
    """Validate symmetry, identity and the triangle inequality.

    With a full matrix ``d`` of at most 300 points the check is exhaustive;
    otherwise random triples are drawn from ``space`` (or from ``d``).
    """
    if d is not None:
        if not np.all(np.isfinite(d)):
            raise ValidationError("distances must be finite")
        scale = float(np.max(np.abs(d))) if d.size else 0.0
        if np.max(np.abs(d - d.T), initial=0.0) > SYMMETRY_TOL * max(scale, 1.0):
            raise ValidationError("distance matrix is not symmetric")
        if np.any(np.diag(d) != 0):
            raise ValidationError("distance matrix must have a zero diagonal")
        off = ~np.eye(d.shape[0], dtype=bool)
        if np.any(d[off] <= 0):
            raise ValidationError("distinct points must be at positive distance")
        tol = TRIANGLE_TOL * max(scale, 1e-300)
        if d.shape[0] <= EXHAUSTIVE_LIMIT:
            for j in range(d.shape[0]):
                # d[i,k] <= d[i,j] + d[j,k] for all i, k
                if np.any(d > d[:, j][:, None] + d[j, :][None, :] + tol):
                    raise ValidationError("triangle inequality violated")
            return
    rng = np.random.default_rng(seed)
    n = d.shape[0] if d is not None else len(ids)
    tri = rng.integers(0, n, size=(samples, 3))
    if d is not None:
        dij, djk, dik = d[tri[:, 0], tri[:, 1]], d[tri[:, 1], tri[:, 2]], d[tri[:, 0], tri[:, 2]]
    else:
        pts = np.asarray(ids)[tri]
        dij = space.paired(pts[:, 0], pts[:, 1])
        djk = space.paired(pts[:, 1], pts[:, 2])
        dik = space.paired(pts[:, 0], pts[:, 2])
    scale = max(float(np.max(dik, initial=0.0)), 1e-300)
    if np.any(dik > dij + djk + TRIANGLE_TOL * scale):
        raise ValidationError("triangle inequality violated on sampled triples")


@dataclass(frozen=True)
class Ball:
    """Closed ball ``{y : dist(center, y) <= radius}``."""

    center: int
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"ball radius must be positive, got {self.radius}")

    def dilate(self, factor: float) -> "Ball":
        return Ball(self.center, self.radius * factor)


def dist(space: MetricSpace, i: int, j: int) -> float:
    return space.dist(i, j)


def ball_members(space: MetricSpace, ball: Ball, domain=None) -> np.ndarray:
    """Domain ids within the closed ball, in domain order."""
    domain = as_ids(domain, space.n)
    if not 0 <= ball.center < space.n:
        raise DomainError(f"ball center {ball.center} is not a point of the space")
    d = space.pairwise([ball.center], domain)[0]
    return domain[d <= ball.radius]


def subset_diam(space: MetricSpace, subset) -> float:
    ids = as_ids(subset, space.n)
    if ids.size == 0:
        raise DomainError("diameter of an empty subset is undefined")
    if ids.size == 1:
        return 0.0
    if space.euclidean and ids.size > 2000:
        # the diameter is attained on the convex hull
        from scipy.spatial import ConvexHull

        pts = space.points[ids]
        try:
            hull = pts[ConvexHull(pts).vertices]
        except Exception:
            hull = pts
        return float(cdist(hull, hull).max())
    best = 0.0
    for start in range(0, ids.size, 1024):
        best = max(best, float(space.pairwise(ids[start:start + 1024], ids).max()))
    return best
