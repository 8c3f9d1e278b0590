import numpy as np
import pytest

from curvelab.errors import DomainError
from curvelab.generators import circle, segment
from curvelab.metric import EuclideanCloud
from curvelab.nets import build_family, build_net, default_scale_range


def line(xs):
    return EuclideanCloud(np.c_[np.asarray(xs, float), np.zeros(len(xs))])


def test_greedy_hand_trace():
    sp = line([0, 0.5, 1.2, 2.0])
    net = build_net(sp, None, 1.0)
    assert net.members.tolist() == [0, 2]
    net.check(sp)


def test_small_epsilon_keeps_everything():
    sp = line([0, 0.5, 1.2, 2.0])
    assert build_net(sp, None, 0.1).members.tolist() == [0, 1, 2, 3]


def test_large_epsilon_keeps_first_point():
    sp = line([0, 0.5, 1.2, 2.0])
    assert build_net(sp, None, 2.0).members.tolist() == [0]


def test_epsilon_must_be_positive():
    with pytest.raises(DomainError):
        build_net(line([0, 1]), None, 0.0)


def test_separation_is_strict():
    # a point at exactly epsilon is covered, not added
    assert build_net(line([0, 1, 2]), None, 1.0).members.tolist() == [0, 2]


def test_farthest_order_is_a_net():
    sp = EuclideanCloud(np.random.default_rng(3).uniform(size=(300, 2)))
    net = build_net(sp, None, 0.1, order="farthest")
    net.check(sp)


def test_one_point_family():
    sp = line([0.5])
    fam = build_family(sp, None, A=2, n_min=0, n_max=4, nested=True)
    assert [len(sc.net) for sc in fam.scales] == [1] * 5
    assert all(b.center == 0 for _, b in fam.balls())


def test_nested_circle_family():
    g = circle(1.0, 256)
    fam = build_family(g.space, None, A=2, n_min=0, n_max=6, nested=True)
    sizes = [len(sc.net) for sc in fam.scales]
    assert sizes == sorted(sizes)
    for a, b in zip(fam.scales[:-1], fam.scales[1:]):
        assert set(a.net.members) <= set(b.net.members)
        b.net.check(g.space)
    for sc in fam.scales:
        assert sc.radius == 2 * 2.0 ** -sc.n


def test_nested_warning_when_coarsest_scale_too_fine():
    g = circle(1.0, 64)
    fam = build_family(g.space, None, A=2, n_min=1, n_max=3, nested=True)
    assert fam.warnings


def test_A_must_exceed_one():
    with pytest.raises(DomainError):
        build_family(line([0, 1]), None, A=1.0)


def test_default_scale_range():
    g = segment(1.0, 101)  # spacing 0.01, diam 1
    lo, hi = default_scale_range(g.space, None)
    assert lo == 0 and 2.0 ** -lo >= 1.0
    assert 2.0 ** -hi < 0.01 <= 2.0 ** -(hi - 1)


def test_ball_count_grows_like_length():
    g = circle(1.0, 2000)
    fam = build_family(g.space, None, A=2, n_min=0, n_max=8)
    ratios = [len(sc.net) / (2.0 ** sc.n * g.length) for sc in fam.scales]
    # disjoint half-radius balls: at most 1 net point per eps of length, roughly
    assert max(ratios) <= 1.0
    assert ratios[-1] > 0.25


def test_unit_parameter_rescales_scales():
    g = circle(1.0, 200)
    a = build_family(g.space, None, A=2, n_min=0, n_max=4)
    b = build_family(g.space.scaled(3.0), None, A=2, n_min=0, n_max=4, unit=3.0)
    for sa, sb in zip(a.scales, b.scales):
        assert sa.net.members.tolist() == sb.net.members.tolist()
        assert sb.radius == pytest.approx(3 * sa.radius)
