"""Pointwise triple functionals: excess, Menger curvature, comparability.

Scalar functions take a space and point ids. The ``*_from_sides`` variants
work elementwise on arrays of the three pairwise distances and are what the
triple-sum kernels use.
"""

from __future__ import annotations

import math

import numpy as np

from .metric import MetricSpace

# Excess below this multiple of eps * (longest side) is rounding noise and is
# treated as exact collinearity.
NOISE_ULPS = 16.0
_EPS = np.finfo(float).eps


def _sorted_sides(a, b, c):
    """Elementwise (max, median, min) of three arrays, selected exactly."""
    a, b, c = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float), np.asarray(c, float))
    lo_ab, hi_ab = np.minimum(a, b), np.maximum(a, b)
    return np.maximum(hi_ab, c), np.maximum(lo_ab, np.minimum(hi_ab, c)), np.minimum(lo_ab, c)


def excess_from_sides(a, b, c):
    """Unordered excess ``a + b + c - 2 max(a, b, c)`` with a noise floor.

    Choosing the longest side as the "outer" pair minimizes the ordered
    excess over the three possible middle points. It is evaluated as
    ``min - (max - median)``, which keeps full relative accuracy for needles.
    """
    m, mid, lo = _sorted_sides(a, b, c)
    e = lo - (m - mid)
    return np.where(e <= NOISE_ULPS * _EPS * m, 0.0, e)


def menger_sq_from_sides(a, b, c):
    """Squared Menger curvature from pairwise distances, 0 when degenerate.

    Heron's formula in Kahan's ordering for ``m >= mid >= lo``:
    ``16 Area^2 = (m + (mid + lo)) (lo - (m - mid)) (lo + (m - mid)) (m + (mid - lo))``,
    with the second factor (the excess) taken from :func:`excess_from_sides`
    so that collinear triples give an exact zero.
    """
    m, mid, lo = _sorted_sides(a, b, c)
    e = excess_from_sides(m, mid, lo)
    prod = m * mid * lo
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (m + (mid + lo)) * e * (lo + (m - mid)) * (m + (mid - lo)) / (prod * prod)
    return np.where((e > 0) & (prod > 0), out, 0.0)


def comparable_from_sides(a, b, c, A: float):
    """``A * min(a, b, c) >= max(a, b, c)`` and no coincident points.

    The comparison allows the same rounding slack as the excess noise floor,
    so equal sides computed from coordinates still compare equal.
    """
    m, _, lo = _sorted_sides(a, b, c)
    return (lo > 0) & (A * lo >= m * (1.0 - NOISE_ULPS * _EPS))


def delta1(space: MetricSpace, x1: int, x2: int, x3: int) -> float:
    """Ordered excess of ``x2`` as the middle point."""
    d = space.pairwise([x1, x2, x3])
    return float(d[0, 1] + d[1, 2] - d[0, 2])


def delta(space: MetricSpace, x1: int, x2: int, x3: int) -> float:
    d = space.pairwise([x1, x2, x3])
    return float(excess_from_sides(d[0, 1], d[1, 2], d[0, 2]))


def menger(space: MetricSpace, x1: int, x2: int, x3: int) -> float:
    """Reciprocal circumradius of the planar triangle with these side lengths."""
    d = space.pairwise([x1, x2, x3])
    return menger_from_sides(d[0, 1], d[1, 2], d[0, 2])


def menger_from_sides(a: float, b: float, c: float) -> float:
    a, b, c = sorted((float(a), float(b), float(c)), reverse=True)
    if c <= 0:
        return 0.0
    e = float(excess_from_sides(a, b, c))
    if e == 0.0:
        return 0.0
    # Kahan's ordering of Heron's factors for a >= b >= c
    area4 = math.sqrt((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c)))
    return area4 / (a * b * c)


def is_comparable(space: MetricSpace, x1: int, x2: int, x3: int, A: float) -> bool:
    d = space.pairwise([x1, x2, x3])
    return bool(comparable_from_sides(d[0, 1], d[1, 2], d[0, 2], A))
