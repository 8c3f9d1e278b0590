"""Randomized invariants (hypothesis)."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from curvelab.curvature import excess_from_sides, menger_sq_from_sides
from curvelab.curves import one_third_containing
from curvelab.metric import Ball, EuclideanCloud, PowerTransform, ball_members
from curvelab.nets import build_net

# coordinates on a 1e-3 grid: squared distances never underflow
coord = st.integers(-100_000, 100_000).map(lambda k: k / 1000)
clouds = st.integers(2, 25).flatmap(lambda n: arrays(float, (n, 2), elements=coord)).filter(
    lambda P: len(np.unique(P, axis=0)) == len(P))


def sides(P):
    a = np.linalg.norm(P[0] - P[1])
    b = np.linalg.norm(P[1] - P[2])
    c = np.linalg.norm(P[0] - P[2])
    return a, b, c


@given(clouds)
def test_euclidean_axioms(P):
    EuclideanCloud(P).check_axioms()


@given(clouds, st.floats(0.05, 1.0))
def test_power_transform_triangle(P, alpha):
    D = PowerTransform(EuclideanCloud(P), alpha).pairwise()
    n = len(P)
    for j in range(n):
        assert np.all(D <= D[:, [j]] + D[[j], :] + 1e-9 * (1 + D.max()))


@given(clouds, st.floats(0.0, 50), st.floats(0.0, 50))
def test_ball_monotone(P, r1, r2):
    sp = EuclideanCloud(P)
    lo, hi = sorted((r1 + 1e-9, r2 + 1e-9))
    assert set(ball_members(sp, Ball(0, lo))) <= set(ball_members(sp, Ball(0, hi)))


@given(arrays(float, (3, 2), elements=coord))
def test_excess_chain(P):
    a, b, c = sides(P)
    d = float(excess_from_sides(a, b, c))
    diam = max(a, b, c)
    ordered = [a + b - c, b + c - a, a + c - b]
    assert 0 <= d <= diam + 1e-12
    assert all(d <= o + 1e-9 * (1 + diam) for o in ordered)
    assert all(o <= 2 * diam + 1e-9 for o in ordered)


@given(arrays(float, (3, 2), elements=coord), st.floats(0.01, 100))
def test_menger_permutation_and_homogeneity(P, lam):
    a, b, c = sides(P)
    base = float(menger_sq_from_sides(a, b, c))
    for perm in ((b, c, a), (c, a, b), (b, a, c)):
        assert np.isclose(float(menger_sq_from_sides(*perm)), base, rtol=1e-9, atol=0)
    scaled = float(menger_sq_from_sides(lam * a, lam * b, lam * c))
    assert np.isclose(scaled, base / lam ** 2, rtol=1e-6, atol=1e-300)


@given(clouds, st.floats(0.01, 50), st.sampled_from(["input", "farthest"]))
@settings(max_examples=60)
def test_net_invariants(P, eps, order):
    sp = EuclideanCloud(P)
    build_net(sp, None, eps, order=order).check(sp)


@given(st.floats(0, 1, exclude_max=True), st.floats(1e-9, 1 / 6, exclude_max=True))
@settings(max_examples=500)
def test_one_third(start, length):
    I = one_third_containing(start, length)
    assert I.contains(start, length)
    assert I.length <= 6 * length
