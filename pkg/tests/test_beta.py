import numpy as np
import pytest

from curvelab.beta import (beta2_ball, beta_inf, beta_inf_multires_sum, beta_p, beta_tilde_arc,
                           dyadic_excess_sum, ordered_excess_sum)
from curvelab.curves import Arc, Curve
from curvelab.errors import DomainError, UnsupportedOperation
from curvelab.generators import circle, segment, snowflake_segment
from curvelab.metric import Ball, EuclideanCloud
from curvelab.nets import build_family


def test_beta_inf_collinear_and_single():
    sp = EuclideanCloud([[0, 0], [1, 1], [2, 2]])
    assert beta_inf(sp, Ball(0, 5.0)) == 0
    assert beta_inf(sp, Ball(0, 0.5)) == 0


def test_beta_inf_thin_triangle():
    # exact thinnest strip around (0,0),(1,0),(0.5,h): half of the smallest altitude
    h = 0.1
    sp = EuclideanCloud([[0, 0], [1, 0], [0.5, h]])
    r = 1.0
    assert beta_inf(sp, Ball(0, r)) == pytest.approx((h / 2) / (2 * r), rel=1e-12)


def test_beta_inf_needs_euclidean():
    with pytest.raises(UnsupportedOperation):
        beta_inf(snowflake_segment(0.5, 10).space, Ball(0, 1.0))


def test_beta_p_cross_is_rms_offset():
    sp = EuclideanCloud([[2, 0], [-2, 0], [0, 1], [0, -1]])
    ball = Ball(0, 4.0)
    v = beta_p(sp, ball, np.ones(4), p=2)
    assert v == pytest.approx(np.sqrt(0.5) / 8.0, rel=1e-12)


def test_beta_p_collinear_zero_and_bounded_by_beta_inf():
    rng = np.random.default_rng(5)
    assert beta_p(EuclideanCloud([[0, 0], [1, 0], [3, 0]]), Ball(0, 5.0), np.ones(3)) == pytest.approx(0, abs=1e-15)
    for _ in range(20):
        sp = EuclideanCloud(rng.normal(size=(12, 2)))
        b = Ball(0, 3.0)
        w = np.ones(12)
        binf = beta_inf(sp, b)
        assert beta_p(sp, b, w, 2) <= binf + 1e-9
        assert beta_p(sp, b, w, 1) <= binf + 1e-9


def test_beta_p_zero_mass():
    with pytest.raises(DomainError):
        beta_p(EuclideanCloud([[0, 0], [9, 0]]), Ball(0, 1.0), [0.0, 1.0])


def test_beta2_segment_is_zero():
    s = segment(1.0, 50).curve.sample(100)
    assert beta2_ball(s, Ball(0, 2.0)).value == 0.0


def test_beta2_dilation_invariant():
    c = circle(1.0, 120).curve
    s1 = c.sample(60)
    s2 = c.scaled(3.0).sample(60)
    v1 = beta2_ball(s1, Ball(0, 1.0)).value
    v2 = beta2_ball(s2, Ball(0, 3.0)).value
    assert v2 == pytest.approx(v1, rel=1e-12)


def test_beta2_whole_circle_stable():
    c = circle(1.0, 360).curve
    v200 = beta2_ball(c.sample(200), Ball(0, 2.0)).value
    v400 = beta2_ball(c.sample(400), Ball(0, 2.0)).value
    assert v200 > 0 and abs(v200 - v400) / v400 < 0.02


def test_beta2_empty_and_small_balls():
    s = circle(1.0, 100).curve.sample(100)
    rep = beta2_ball(s, Ball(0, 1e-6))
    assert rep.value == 0 and rep.members == 1


def test_ordered_excess_sum_matches_loops():
    rng = np.random.default_rng(0)
    P = rng.normal(size=(15, 2))
    D = EuclideanCloud(P).pairwise()
    brute = sum(D[i, j] + D[j, k] - D[i, k] for i in range(15) for j in range(i + 1, 15) for k in range(j + 1, 15))
    assert ordered_excess_sum(D) == pytest.approx(brute, rel=1e-12)


def test_beta_tilde_segment_zero_and_semicircle_stable():
    seg = segment(2.0, 20).curve
    assert beta_tilde_arc(seg, Arc(seg, 0.2, 1.5)) == pytest.approx(0, abs=1e-6)
    c = circle(1.0, 720).curve
    arc = Arc(c, 0.0, np.pi)
    a, b = beta_tilde_arc(c, arc, 200), beta_tilde_arc(c, arc, 400)
    assert a > 0 and abs(a - b) / b < 0.02


def test_beta_tilde_dilation_invariant():
    c = circle(1.0, 360).curve
    c3 = c.scaled(3.0)
    a = beta_tilde_arc(c, Arc(c, 0.5, 2.0), 100)
    b = beta_tilde_arc(c3, Arc(c3, 1.5, 6.0), 100)
    assert b == pytest.approx(a, rel=1e-9)


def test_dyadic_excess_bounded_and_monotone():
    c = circle(1.0, 360).curve
    sums = [dyadic_excess_sum(c, k).total for k in range(1, 13)]
    assert all(s <= c.length + 1e-9 for s in sums)
    assert all(b >= a - 1e-12 for a, b in zip(sums, sums[1:]))


def test_dyadic_depth_one_is_twice_the_half_chord():
    c = circle(1.0, 360).curve
    d = dyadic_excess_sum(c, 1)
    p0, ph = c.point_at(0.0), c.point_at(c.length / 2)
    assert d.total == pytest.approx(2 * np.linalg.norm(p0 - ph), rel=1e-12)


def test_dyadic_out_and_back_segment():
    pts = np.c_[np.r_[np.linspace(0, 1, 11), np.linspace(0.9, 0.1, 9)], np.zeros(20)]
    c = Curve.from_points(pts, closed=True)
    assert c.length == pytest.approx(2.0)
    for k in range(1, 9):
        assert dyadic_excess_sum(c, k).total <= c.length + 1e-9
    with pytest.raises(DomainError):
        dyadic_excess_sum(segment().curve, 3)


def test_beta_inf_multires():
    seg = segment(1.0, 128)
    fam = build_family(seg.space, None, A=2, n_min=0, n_max=5)
    assert beta_inf_multires_sum(seg.space, None, fam).total == 0
    c = circle(1.0, 256)
    fam = build_family(c.space, None, A=2, n_min=0, n_max=6)
    rep = beta_inf_multires_sum(c.space, None, fam)
    c2 = circle(1.0, 512)
    rep2 = beta_inf_multires_sum(c2.space, None, build_family(c2.space, None, A=2, n_min=0, n_max=6))
    assert 0 < rep.total < np.inf
    assert abs(rep.total / rep2.total - 1) < 0.10
    big = c.space.scaled(4.0)
    fam4 = build_family(big, None, A=2, n_min=-2, n_max=4, unit=1.0)
    assert beta_inf_multires_sum(big, None, fam4).total == pytest.approx(4 * rep.total, rel=1e-9)


def test_beta_inf_collinear_cloud_is_zero_without_hull():
    x = np.linspace(0.0, 1.0, 400)
    sp = EuclideanCloud(np.c_[x, 0.3 * x])
    assert beta_inf(sp, Ball(0, 2.0)) == 0.0
