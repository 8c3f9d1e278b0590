import numpy as np
import pytest

import frozen
from curvelab.curves import Curve
from curvelab.generators import circle, generate, segment
from curvelab.nets import build_family
from curvelab.verify import (glue_components, global_curvature_functional, hahlomaa_condition_sum,
                             large_ball_diagnostic, localized_functional, multires_curvature_sum)

CIRCLE = circle(1.0, 360).curve


def test_global_matches_frozen_oracle():
    for m in (100, 200):
        v = global_curvature_functional(CIRCLE, m).value
        assert v == pytest.approx(frozen.CIRCLE_GLOBAL[m], rel=1e-12)


def test_global_segment_zero_and_scaling():
    assert global_curvature_functional(segment(1.0, 200).curve, 100).value == 0.0
    a = global_curvature_functional(CIRCLE, 80).value
    assert global_curvature_functional(CIRCLE.scaled(2.0), 80).value == pytest.approx(2 * a, rel=1e-12)


def test_multires_A4_dominates_A2():
    r2 = multires_curvature_sum(CIRCLE, 100, A=2, nested=True)
    r4 = multires_curvature_sum(CIRCLE, 100, A=4, nested=True)
    assert 0 < r2.value <= r4.value < np.inf
    assert r2.ratio == pytest.approx(r2.value / CIRCLE.length)
    assert len(r2.rows) == r2.meta["balls"]


def test_multires_segment_zero():
    assert multires_curvature_sum(segment(1.0, 100).curve, 100).value == 0.0


def test_localized_segment_zero_single_component():
    seg = segment(2.0, 50).curve
    rep = localized_functional(seg, 1.0, 0.3, m=100)
    assert rep.value == 0.0
    assert rep.meta["gluing"]["components"] == 1 and rep.meta["gluing"]["added_length"] == 0


def test_localized_monotone_in_R():
    vals = [localized_functional(CIRCLE, 0.0, R, m=120).value for R in (0.25, 0.5, 1.0, 2.0)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_localized_full_ball_equals_global():
    rep = localized_functional(CIRCLE, 0.0, 2.5, m=100)
    assert rep.value == pytest.approx(global_curvature_functional(CIRCLE, 100).value, rel=1e-12)


def test_gluing_hairpin():
    L = 6.0
    top = np.c_[np.linspace(L, 0, 61), np.full(61, 0.2)]
    bottom = np.c_[np.linspace(0, L, 61), np.zeros(61)]
    right = np.c_[np.full(3, L + 0.1), [0.05, 0.1, 0.15]][::-1]
    pts = np.r_[bottom, right[::-1], top]
    curve = Curve.from_points(pts)
    z = 3.0  # on the lower arm
    glue = glue_components(curve, curve.point_at(z), 0.25)
    assert glue.count == 2
    assert glue.added_length <= glue.bound
    assert glue.curve is not None


def test_hahlomaa_comparability_filter_and_segment():
    s = CIRCLE.sample(80)
    a1 = hahlomaa_condition_sum(s, 1.0, np.array([1.0, 0.0]), 1.0).value
    a3 = hahlomaa_condition_sum(s, 3.0, np.array([1.0, 0.0]), 1.0).value
    assert 0 <= a1 <= a3
    seg = segment(1.0, 50).curve.sample(60)
    assert hahlomaa_condition_sum(seg, 3.0, 0, 2.0).value == 0.0


def test_cantor_hahlomaa_matches_oracle():
    for level in (2, 3):
        g = generate(f"cantor:{level}")
        from curvelab.curves import Sample
        s = Sample(g.space, g.domain, g.weights)
        v = hahlomaa_condition_sum(s, 3.0, 0, 2.0).value
        assert v == pytest.approx(frozen.CANTOR_HAHLOMAA[level], rel=1e-9)


def test_large_ball_counts():
    s = CIRCLE.sample(200)
    fam = build_family(s.space, None, A=2, n_min=0, n_max=6)
    counts = large_ball_diagnostic(s, fam, CIRCLE.length)
    assert counts[0] > 0 and counts[6] == 0
    assert max(counts.values()) <= 64
    assert large_ball_diagnostic(s, None) == {}


def test_localized_ball_across_the_seam_is_one_component():
    c = circle(1.0, 360).curve
    glue = glue_components(c, c.point_at(0.0), 0.5)
    assert glue.count == 1 and glue.added_length == 0.0
