"""Epsilon-nets and multiresolution ball families.

A family holds, for each integer scale ``n``, a ``unit * 2**-n``-net of ``K``
and the balls of radius ``A * unit * 2**-n`` centered at its points. ``unit``
defaults to 1; it exists so that a dilated input can be paired with the
identically dilated family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .metric import Ball, MetricSpace, as_ids, subset_diam

ORDERS = ("input", "farthest")


@dataclass(frozen=True)
class Net:
    epsilon: float
    members: np.ndarray
    domain: np.ndarray

    def __len__(self) -> int:
        return int(self.members.size)

    def check(self, space: MetricSpace) -> None:
        """Assert separation (strict) and covering (closed)."""
        if self.members.size > 1:
            d = space.pairwise(self.members)
            np.fill_diagonal(d, np.inf)
            assert d.min() > self.epsilon, "net points closer than epsilon"
        cover = space.pairwise(self.domain, self.members).min(axis=1)
        assert cover.max() <= self.epsilon, "domain point not covered"


def build_net(space: MetricSpace, domain, epsilon: float, order: str = "input",
              seed_members=None) -> Net:
    """Greedy epsilon-net.

    ``order="input"`` scans the domain in order and keeps a point iff it is at
    distance > epsilon from every point kept so far. ``order="farthest"``
    starts from the first domain point and repeatedly adds the point farthest
    from the current net while that distance exceeds epsilon.
    ``seed_members`` are placed in the net first; they must already be
    epsilon-separated.
    """
    if not epsilon > 0:
        raise DomainError(f"net epsilon must be positive, got {epsilon}")
    dom = as_ids(domain, space.n)
    if dom.size == 0:
        raise DomainError("cannot build a net of an empty domain")
    if order not in ORDERS:
        raise DomainError(f"unknown insertion order {order!r}; expected one of {ORDERS}")

    members: list[int] = []
    # distance from each domain point to the current net
    near = np.full(dom.size, np.inf)

    def add(pid: int) -> None:
        members.append(int(pid))
        np.minimum(near, space.pairwise([pid], dom)[0], out=near)

    if seed_members is not None:
        for pid in as_ids(seed_members, space.n):
            add(pid)

    if order == "input":
        for pos in range(dom.size):
            if near[pos] > epsilon:
                add(dom[pos])
    else:
        if not members:
            add(dom[0])
        while True:
            pos = int(np.argmax(near))
            if not near[pos] > epsilon:
                break
            add(dom[pos])
    return Net(float(epsilon), np.array(members, dtype=np.int64), dom)


@dataclass(frozen=True)
class Scale:
    n: int
    net: Net
    radius: float

    @property
    def balls(self) -> list[Ball]:
        return [Ball(int(c), self.radius) for c in self.net.members]


@dataclass(frozen=True)
class MultiresolutionFamily:
    A: float
    n_min: int
    n_max: int
    nested: bool
    unit: float
    order: str
    scales: tuple[Scale, ...]
    warnings: tuple[str, ...] = field(default=())

    def balls(self):
        """Yield ``(n, Ball)`` over all scales, coarse to fine."""
        for sc in self.scales:
            for b in sc.balls:
                yield sc.n, b

    def __len__(self) -> int:
        return sum(len(sc.net) for sc in self.scales)

    def as_dict(self) -> dict:
        return {
            "A": self.A, "n_min": self.n_min, "n_max": self.n_max, "nested": self.nested,
            "unit": self.unit, "order": self.order, "warnings": list(self.warnings),
            "scales": [
                {"n": sc.n, "epsilon": sc.net.epsilon, "radius": sc.radius,
                 "centers": sc.net.members.tolist()}
                for sc in self.scales
            ],
        }


def default_scale_range(space: MetricSpace, K, unit: float = 1.0) -> tuple[int, int]:
    """``n_min``: finest n with ``unit*2**-n >= diam(K)``; ``n_max``: first n below
    the minimum positive spacing of K."""
    ids = as_ids(K, space.n)
    diam = subset_diam(space, ids)
    if diam == 0:
        return 0, 0
    n_min = math.floor(-math.log2(diam / unit))
    while unit * 2.0 ** -n_min < diam:
        n_min -= 1
    spacing = _min_spacing(space, ids)
    n_max = math.floor(-math.log2(spacing / unit)) + 1
    while unit * 2.0 ** -n_max >= spacing:
        n_max += 1
    return n_min, max(n_max, n_min)


def _min_spacing(space: MetricSpace, ids: np.ndarray) -> float:
    best = np.inf
    for s in range(0, ids.size, 1024):
        d = space.pairwise(ids[s:s + 1024], ids)
        d = d[d > 0]
        if d.size:
            best = min(best, float(d.min()))
    return best


def build_family(space: MetricSpace, K=None, A: float = 2.0, n_min: int | None = None,
                 n_max: int | None = None, nested: bool = False, order: str = "input",
                 unit: float = 1.0) -> MultiresolutionFamily:
    if not A > 1:
        raise DomainError(f"family parameter A must exceed 1, got {A}")
    if not unit > 0:
        raise DomainError("family unit must be positive")
    ids = as_ids(K, space.n)
    if ids.size == 0:
        raise DomainError("K must be nonempty")
    lo, hi = default_scale_range(space, ids, unit)
    n_min = lo if n_min is None else int(n_min)
    n_max = hi if n_max is None else int(n_max)
    if n_min > n_max:
        raise DomainError(f"n_min={n_min} exceeds n_max={n_max}")
    warnings = []
    if nested and unit * 2.0 ** -n_min < subset_diam(space, ids):
        warnings.append(
            f"nested family starts at n_min={n_min} with unit*2^-n_min below diam(K); "
            "the coarsest net may hold more than one point"
        )
    scales = []
    prev = None
    for n in range(n_min, n_max + 1):
        eps = unit * 2.0 ** -n
        net = build_net(space, ids, eps, order=order,
                        seed_members=prev.members if (nested and prev is not None) else None)
        scales.append(Scale(n, net, A * eps))
        prev = net
    return MultiresolutionFamily(float(A), n_min, n_max, bool(nested), float(unit), order,
                                 tuple(scales), tuple(warnings))
