import numpy as np
import pytest

from curvelab.curves import measure_regularity
from curvelab.errors import DomainError
from curvelab.generators import GeneratorSpec, generate


def test_circle_length_deficit():
    g = generate("circle:1:360")
    assert g.curve.closed and abs(g.curve.length - 2 * np.pi) < 1e-3


@pytest.mark.parametrize("k", range(6))
def test_koch_length_exact(k):
    g = generate(f"koch:{k}")
    assert g.curve.length == pytest.approx((4 / 3) ** k, rel=1e-12)
    assert g.length == pytest.approx((4 / 3) ** k, rel=1e-15)


def test_cantor_audit():
    g = generate("cantor:3")
    assert g.curve is None and len(g.domain) == 64
    D = g.space.pairwise()
    np.fill_diagonal(D, np.inf)
    assert D.min() == pytest.approx(3 * 4.0 ** -3)
    assert g.weights.sum() == pytest.approx(1.0)


def test_segment_stadium_lengths():
    assert generate("segment:2.5:7").curve.length == pytest.approx(2.5)
    g = generate("stadium:1:2:400")
    assert abs(g.curve.length - g.length) / g.length < 1e-3


def test_lipschitz_graph_deterministic():
    a, b = generate("lipschitz:3:0.1:200"), generate("lipschitz:3:0.1:200")
    assert np.array_equal(a.space.points, b.space.points)
    assert a.curve.length >= 1.0


def test_star_tree_metric():
    g = generate("star:3:1:100")  # 301 points: sampled check above 300
    g.space.check_axioms(samples=50000)
    small = generate("star:4:2:10")
    small.space.check_axioms()
    assert small.length == 8.0
    assert small.space.dist(1, 11) == pytest.approx(2 * 0.2)


def test_snowflake():
    g = generate("snowflake:0.5:5")
    assert g.space.dist(0, 4) == pytest.approx(1.0)
    assert g.space.dist(0, 1) == pytest.approx(0.5)


def test_koch_regularity_nondecreasing():
    vals = []
    for k in range(1, 5):
        c = generate(f"koch:{k}").curve
        pts = c.space.points[c.vertices[:: max(1, c.vertices.size // 16)]]
        trials = [(p, r) for p in pts for r in (0.02, 0.05, 0.1, 0.2)]
        vals.append(measure_regularity(c, trials).constant)
    assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("bad", ["moebius:1", "circle:-1:10", "circle:1:2", "koch:-1", "koch:1.5",
                                 "snowflake:1.5", "segment:1:1", "star:0:1:1"])
def test_invalid_specs(bad):
    with pytest.raises(DomainError):
        generate(bad)


def test_spec_roundtrip():
    assert str(GeneratorSpec.parse("circle:1:360")) == "circle:1:360"
