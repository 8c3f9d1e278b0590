"""Polyline curves, arcs, ball components and dyadic filtrations of the circle.

A :class:`Curve` is an ordered list of vertex ids into a metric space, open or
closed, parameterized by arc length on ``[0, length]`` (closed curves wrap).
In a Euclidean cloud the parameterization interpolates linearly along
segments; in any other space a parameter resolves to the nearer vertex, since
segment interiors do not exist there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .metric import Ball, EuclideanCloud, MetricSpace, as_ids

THIRD = 1.0 / 3.0
_MAX_LEVEL = 60


@dataclass(frozen=True)
class Sample:
    """Weighted points of a space; the discrete stand-in for length measure.

    ``params`` are the arc-length positions the points were taken at (when
    they come from a curve).
    """

    space: MetricSpace
    ids: np.ndarray
    weights: np.ndarray
    params: np.ndarray | None = None

    def __len__(self) -> int:
        return int(self.ids.size)

    def distances(self, rows=None, cols=None) -> np.ndarray:
        r = self.ids if rows is None else self.ids[rows]
        c = self.ids if cols is None else self.ids[cols]
        return self.space.pairwise(r, c)

    def distances_to(self, loc) -> np.ndarray:
        """Distances from a location (coordinates or a vertex id) to every sample."""
        return location_distances(self.space, loc, self.ids)

    def restrict(self, mask) -> "Sample":
        mask = np.asarray(mask)
        return Sample(self.space, self.ids[mask], self.weights[mask],
                      None if self.params is None else self.params[mask])

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())


def location_distances(space: MetricSpace, loc, ids) -> np.ndarray:
    if isinstance(loc, (int, np.integer)):
        return space.pairwise([int(loc)], ids)[0]
    if not space.euclidean:
        raise DomainError("coordinate locations need a Euclidean space")
    return space.distances_from(loc, ids)


class Curve:
    """Arc-length parameterized polyline through ``vertices`` of ``space``."""

    def __init__(self, space: MetricSpace, vertices=None, closed: bool = False):
        self.space = space
        self.vertices = as_ids(vertices, space.n)
        if self.vertices.size == 0:
            raise DomainError("a curve needs at least one vertex")
        self.closed = bool(closed)
        v = self.vertices
        if v.size > 1:
            nxt = np.roll(v, -1) if self.closed else v[1:]
            edges = space.paired(v[: nxt.size], nxt)
        else:
            edges = np.zeros(0)
        if np.any(edges <= 0):
            raise DomainError("consecutive curve vertices must be at positive distance")
        self.edge_lengths = edges
        self.cum = np.concatenate([[0.0], np.cumsum(edges)])
        self.length = float(self.cum[-1])

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_points(cls, points, closed: bool = False) -> "Curve":
        cloud = EuclideanCloud(points)
        return cls(cloud, np.arange(cloud.n), closed)

    def scaled(self, factor: float) -> "Curve":
        return Curve(self.space.scaled(factor), self.vertices, self.closed)

    @property
    def euclidean(self) -> bool:
        return self.space.euclidean

    @property
    def coords(self) -> np.ndarray:
        if not self.space.euclidean:
            raise DomainError("curve coordinates need a Euclidean space")
        return self.space.points[self.vertices]

    @property
    def n_segments(self) -> int:
        return int(self.edge_lengths.size)

    # -- parameterization -----------------------------------------------------
    def _normalize(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.closed:
            return np.mod(s, self.length) if self.length > 0 else np.zeros_like(s)
        tol = 1e-12 * max(self.length, 1.0)
        if np.any(s < -tol) or np.any(s > self.length + tol):
            raise DomainError(f"parameter outside [0, {self.length}] on an open curve")
        return np.clip(s, 0.0, self.length)

    def _locate(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Segment index and fraction along it for normalized parameters."""
        if self.n_segments == 0:
            return np.zeros(s.shape, dtype=np.int64), np.zeros(s.shape)
        k = np.searchsorted(self.cum, s, side="right") - 1
        k = np.clip(k, 0, self.n_segments - 1)
        t = (s - self.cum[k]) / self.edge_lengths[k]
        return k, np.clip(t, 0.0, 1.0)

    def point_at(self, s):
        """Coordinates at ``s`` (Euclidean) or the id of the nearer vertex."""
        arr = self._normalize(np.atleast_1d(s))
        out = self.points_at(arr, normalized=True)
        return out[0] if np.ndim(s) == 0 else out

    def points_at(self, s, normalized: bool = False) -> np.ndarray:
        s = np.asarray(s, dtype=float) if normalized else self._normalize(s)
        k, t = self._locate(s)
        v = self.vertices
        if self.space.euclidean:
            p0 = self.space.points[v[k]]
            p1 = self.space.points[v[(k + 1) % v.size]] if self.n_segments else p0
            out = p0 + t[:, None] * (p1 - p0)
            # vertices come back exactly
            out[t == 0.0] = p0[t == 0.0]
            out[t == 1.0] = p1[t == 1.0]
            return out
        if self.n_segments == 0:
            return np.full(s.shape, v[0])
        nxt = v[(k + 1) % v.size]
        return np.where(t <= 0.5, v[k], nxt)

    def sample_at(self, params, weights=None) -> Sample:
        params = self._normalize(params)
        w = np.full(params.shape, np.nan) if weights is None else np.broadcast_to(
            np.asarray(weights, float), params.shape).copy()
        if self.space.euclidean:
            return Sample(EuclideanCloud(self.points_at(params, normalized=True)),
                          np.arange(params.size), w, params)
        return Sample(self.space, self.points_at(params, normalized=True).astype(np.int64), w, params)

    def sample(self, m: int) -> Sample:
        """``m`` midpoint-rule samples, each carrying arc-length weight ``length/m``."""
        if m < 1:
            raise DomainError("sample count must be positive")
        h = self.length / m
        return self.sample_at((np.arange(m) + 0.5) * h, h)

    def vertex_sample(self) -> Sample:
        """The vertices themselves, weighted by half the adjacent edge lengths."""
        e = self.edge_lengths
        w = np.zeros(self.vertices.size)
        if e.size:
            w[: e.size] += e / 2
            w[np.arange(1, e.size + 1) % self.vertices.size] += e / 2
        return Sample(self.space, self.vertices.copy(), w, self.cum[: self.vertices.size].copy())

    def __repr__(self) -> str:
        kind = "closed" if self.closed else "open"
        return f"Curve({kind}, vertices={self.vertices.size}, length={self.length:.6g})"


@dataclass(frozen=True)
class Arc:
    """Parameter interval ``[a, b]``; on a closed curve ``b`` may exceed the
    length, meaning the arc wraps through parameter 0."""

    curve: Curve
    a: float
    b: float

    def __post_init__(self):
        if self.b < self.a:
            raise DomainError("arc needs a <= b")

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, other: "Arc", tol: float = 1e-12) -> bool:
        L = self.curve.length
        if self.curve.closed and self.length >= L - tol:  # the whole loop
            return other.length <= L + tol
        shifts = (0.0, L, -L) if self.curve.closed else (0.0,)
        return any(self.a - tol <= other.a + d and other.b + d <= self.b + tol for d in shifts)

    def __repr__(self) -> str:
        return f"Arc([{self.a:.6g}, {self.b:.6g}])"


def _ball_center(curve: Curve, E) -> tuple[object, float]:
    if isinstance(E, Ball):
        return int(E.center), E.radius
    loc, r = E
    if not r > 0:
        raise DomainError("ball radius must be positive")
    return loc, float(r)


def lambda_components(curve: Curve, E) -> list[Arc]:
    """Maximal parameter intervals mapped into the closed ball ``E``.

    ``E`` is a :class:`Ball` (center id in ``curve.space``) or a pair
    ``(location, radius)`` with coordinates or a vertex id. In Euclidean
    clouds segment/sphere crossings are solved exactly; elsewhere the
    resolution is one vertex, and a run of in-ball vertices gives the arc
    between its first and last vertex.
    """
    loc, r = _ball_center(curve, E)
    L = curve.length
    if curve.space.euclidean:
        c = curve.space.points[loc] if isinstance(loc, (int, np.integer)) else np.asarray(loc, float)
        intervals = _euclidean_intervals(curve, c, r)
    else:
        d = location_distances(curve.space, loc, curve.vertices)
        intervals = _join_vertex_runs(curve, d <= r)
    if not intervals:
        return []
    merged = [list(intervals[0])]
    tol = 1e-12 * max(L, 1.0)
    for a, b in intervals[1:]:
        if a <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    if curve.closed and len(merged) > 1 and merged[0][0] <= tol and merged[-1][1] >= L - tol:
        first = merged.pop(0)
        merged[-1][1] = L + first[1]
    if curve.closed and len(merged) == 1 and merged[0][0] <= tol and merged[0][1] >= L - tol:
        return [Arc(curve, 0.0, L)]
    return [Arc(curve, a, b) for a, b in merged]


def _euclidean_intervals(curve: Curve, c: np.ndarray, r: float) -> list[tuple[float, float]]:
    v = curve.vertices
    pts = curve.space.points
    if curve.n_segments == 0:
        return [(0.0, 0.0)] if np.linalg.norm(pts[v[0]] - c) <= r else []
    k = np.arange(curve.n_segments)
    p0 = pts[v[k]]
    p1 = pts[v[(k + 1) % v.size]]
    d = p1 - p0
    f = p0 - c
    qa = (d * d).sum(axis=1)
    qb = (d * f).sum(axis=1)
    qc = (f * f).sum(axis=1) - r * r
    disc = qb * qb - qa * qc
    ok = disc >= 0
    root = np.sqrt(np.where(ok, disc, 0.0))
    t1 = (-qb - root) / qa
    t2 = (-qb + root) / qa
    # endpoints decided by the exact closed-ball test, not the roots
    in0 = np.sqrt((f * f).sum(axis=1)) <= r
    in1 = np.sqrt(((p1 - c) ** 2).sum(axis=1)) <= r
    lo = np.where(in0, 0.0, np.clip(t1, 0.0, 1.0))
    hi = np.where(in1, 1.0, np.clip(t2, 0.0, 1.0))
    ok &= (lo <= hi) & ((t2 >= 0) | in0) & ((t1 <= 1) | in1)
    ok |= in0 | in1
    out = []
    for seg in np.flatnonzero(ok):
        a = curve.cum[seg] + lo[seg] * curve.edge_lengths[seg]
        b = curve.cum[seg] + hi[seg] * curve.edge_lengths[seg]
        out.append((float(a), float(b)))
    return out


def _join_vertex_runs(curve: Curve, inside: np.ndarray) -> list[tuple[float, float]]:
    out = []
    n = inside.size
    i = 0
    while i < n:
        if not inside[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and inside[j + 1]:
            j += 1
        b = curve.cum[j]
        if curve.closed and j == n - 1 and inside[0] and i > 0:
            b = curve.length  # continues through the closing edge
        out.append((float(curve.cum[i]), float(b)))
        i = j + 1
    if curve.closed and inside.all():
        return [(0.0, curve.length)]
    return out


def lambda_extension(curve: Curve, E, factor: float) -> list[tuple[Arc, Arc]]:
    """Pair each arc of ``E`` with the arc of the dilated ball containing it."""
    loc, r = _ball_center(curve, E)
    small = lambda_components(curve, (loc, r))
    big = lambda_components(curve, (loc, r * factor))
    out = []
    for arc in small:
        host = next((h for h in big if h.contains(arc)), None)
        if host is None:  # only possible through rounding at the boundary
            host = max(big, key=lambda h: min(h.b, arc.b) - max(h.a, arc.a))
        out.append((arc, host))
    return out


# -- dyadic filtrations -----------------------------------------------------------

@dataclass(frozen=True)
class DyadicInterval:
    filtration: int  # 0 for the standard grid, 1 for the grid rotated by 1/3
    level: int
    index: int

    @property
    def length(self) -> float:
        return 2.0 ** -self.level

    @property
    def start(self) -> float:
        return (self.filtration * THIRD + self.index * 2.0 ** -self.level) % 1.0

    @property
    def end(self) -> float:
        return self.start + self.length

    def exact_start(self) -> Fraction:
        return (Fraction(self.filtration, 3) + Fraction(self.index, 2 ** self.level)) % 1

    def contains(self, start: float, length: float, tol: float = 1e-12) -> bool:
        off = (start - self.start) % 1.0
        if off > 1.0 - tol:
            off -= 1.0
        return off >= -tol and off + length <= self.length + tol


@dataclass(frozen=True)
class DyadicFiltration:
    offset: int  # 0 or 1, rotation by offset/3
    depth: int

    def __post_init__(self):
        if self.offset not in (0, 1):
            raise DomainError("filtration offset must be 0 or 1 (rotation by 0 or 1/3)")

    def level(self, k: int) -> list[DyadicInterval]:
        return [DyadicInterval(self.offset, k, j) for j in range(2 ** k)]

    def endpoints(self, k: int) -> np.ndarray:
        """Interval start points of level ``k`` on [0, 1)."""
        return (self.offset * THIRD + np.arange(2 ** k) * 2.0 ** -k) % 1.0


def _containing(filtration: int, start: float, length: float) -> DyadicInterval | None:
    """Deepest interval of one filtration containing ``[start, start+length]``."""
    s = (start - filtration * THIRD) % 1.0
    best = None
    for k in range(1, _MAX_LEVEL):
        size = 2.0 ** -k
        if size < length:
            break
        j = math.floor(s / size)
        if s + length <= (j + 1) * size:
            best = DyadicInterval(filtration, k, int(j) % (2 ** k))
        else:
            break  # a straddled boundary stays a boundary at every finer level
    return best


def one_third_containing(start: float, length: float) -> DyadicInterval:
    """A dyadic interval of either filtration containing ``J = [start, start+length]``
    (mod 1) with at most six times its length.

    The smallest containing interval across both filtrations is returned; the
    unrotated grid wins ties.
    """
    if not 0 < length < 1.0 / 6.0:
        raise DomainError(f"interval length must lie in (0, 1/6), got {length}")
    cands = [c for c in (_containing(0, start, length), _containing(1, start, length)) if c is not None]
    if not cands:
        raise AssertionError("no containing dyadic interval; 1/3 rotation argument violated")
    best = max(cands, key=lambda c: (c.level, -c.filtration))
    if best.length > 6 * length * (1 + 1e-12):
        raise AssertionError(f"containing interval of length {best.length} exceeds 6|J|={6 * length}")
    return best


# -- regularity -------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityEstimate:
    constant: float
    argmax: tuple
    ratios: np.ndarray  # per trial: max(r/mu, mu/r)
    resolution: float


def measure_regularity(curve: Curve, trials) -> RegularityEstimate:
    """Worst two-sided ratio between ball preimage length and radius."""
    trials = list(trials)
    if not trials:
        raise DomainError("measure_regularity needs at least one (point, radius) trial")
    ratios = np.empty(len(trials))
    for t, (loc, r) in enumerate(trials):
        mu = sum(arc.length for arc in lambda_components(curve, (loc, r)))
        ratios[t] = np.inf if mu == 0 else max(r / mu, mu / r)
    i = int(np.argmax(ratios))
    resolution = 0.0 if curve.space.euclidean else float(curve.edge_lengths.max(initial=0.0))
    loc, r = trials[i]
    key = (int(loc) if isinstance(loc, (int, np.integer)) else tuple(np.asarray(loc).tolist()), float(r))
    return RegularityEstimate(float(ratios[i]), key, ratios, resolution)


def vertex_trials(curve: Curve, radii, stride: int = 1) -> list[tuple[int, float]]:
    """Trials centered at every ``stride``-th vertex for each radius."""
    return [(int(v), float(r)) for v in curve.vertices[::stride] for r in radii]
