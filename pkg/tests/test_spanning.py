import numpy as np
import pytest

from curvelab.errors import DisconnectedError, DomainError
from curvelab.generators import circle, generate, segment
from curvelab.metric import EuclideanCloud
from curvelab.nets import build_net
from curvelab.spanning import (NetGraph, audit_tour, build_net_graph, double_euler_tour,
                               parameterize_connected_set)


def test_path_of_three_points():
    sp = EuclideanCloud([[0, 0], [2, 0], [4, 0]])
    g = build_net_graph(sp, build_net(sp, None, 1.0))
    assert [(u, v) for u, v, _ in g.edges] == [(0, 1), (1, 2)]


def test_single_point_graph():
    sp = EuclideanCloud([[0, 0]])
    g = build_net_graph(sp, build_net(sp, None, 1.0))
    assert g.edges == () and len(g.vertices) == 1
    t = double_euler_tour(g)
    assert t.length(g) == 0


def test_edges_are_minimum_spanning_and_within_radius():
    sp = EuclideanCloud(np.random.default_rng(0).uniform(size=(200, 2)))
    net = build_net(sp, None, 0.05)
    g = build_net_graph(sp, net)
    assert len(g.edges) == len(net) - 1
    assert all(w < 8 * 0.05 and u < v for u, v, w in g.edges)
    assert g.total_length <= len(net) * 8 * 0.05


def test_disconnected_error_names_components():
    sp = EuclideanCloud([[0, 0], [0.1, 0], [5, 0], [5.1, 0]])
    with pytest.raises(DisconnectedError) as exc:
        build_net_graph(sp, build_net(sp, None, 0.2))
    e = exc.value
    assert e.gap >= 8 * 0.2 and e.exit_code == 4
    assert set(e.components[0]) == {0} and set(e.components[1]) == {2}


def test_path_tour_length():
    g = NetGraph(np.array([0, 1, 2]), ((0, 1, 1.0), (1, 2, 2.0)), 1.0, 8.0, True)
    t = double_euler_tour(g)
    assert t.length(g) == 6.0 and t.order[0] == 0 == t.order[-1]
    assert audit_tour(g, t)["all_once_per_direction"]


def test_triangle_tour():
    g = NetGraph(np.array([0, 1, 2]), ((0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)), 1.0, 8.0, True)
    t = double_euler_tour(g)
    assert t.length(g) == 6.0
    assert audit_tour(g, t) == {"closed": True, "all_once_per_direction": True, "steps": 6, "edges": 3}


def test_random_connected_graph_500():
    rng = np.random.default_rng(11)
    edges = {}
    for v in range(1, 500):
        u = int(rng.integers(0, v))
        edges[(u, v)] = float(rng.uniform(0.1, 1))
    for _ in range(400):
        u, v = sorted(rng.choice(500, 2, replace=False).tolist())
        edges.setdefault((u, v), float(rng.uniform(0.1, 1)))
    g = NetGraph(np.arange(500), tuple((u, v, w) for (u, v), w in sorted(edges.items())), 1.0, 8.0, False)
    t = double_euler_tour(g)
    audit = audit_tour(g, t)
    assert audit["closed"] and audit["all_once_per_direction"]
    assert t.length(g) == pytest.approx(2 * g.total_length)


def test_tour_needs_connected_graph():
    g = NetGraph(np.array([0, 1]), (), 1.0, 8.0, True)
    with pytest.raises(DomainError):
        double_euler_tour(g)


def test_dense_circle_bounds():
    g = circle(1.0, 2000)
    par = parameterize_connected_set(g.space, None, 4, reference_length=2 * np.pi)
    s = par.summary()
    assert s["tour_length"] == pytest.approx(2 * s["edge_length"])
    assert s["tour_length"] <= 32 * 2 * np.pi
    assert s["hausdorff_gap"] <= 5 * 2.0 ** -4
    assert s["edge_length"] <= min(s["count_bound"], 16 * 2 * np.pi)


def test_two_points_coarse_scale_degenerate():
    sp = EuclideanCloud([[0, 0], [0.3, 0]])
    par = parameterize_connected_set(sp, None, epsilon=1.0)
    assert len(par.net) == 1 and par.curve.length == 0


def test_L_shape_covers_net():
    pts = np.r_[np.c_[np.linspace(0, 1, 101), np.zeros(101)], np.c_[np.ones(100), np.linspace(0.01, 1, 100)]]
    sp = EuclideanCloud(pts)
    par = parameterize_connected_set(sp, None, 3, reference_length=2.0)
    assert set(par.tour.order) == set(par.net.members.tolist())
    assert audit_tour(par.graph, par.tour)["all_once_per_direction"]


def test_explicit_metric_tour():
    g = generate("star:3:1:40")
    par = parameterize_connected_set(g.space, g.domain, 4, reference_length=3.0)
    assert par.curve.length <= 32 * 3.0
    assert par.hausdorff_gap <= 5 * 2.0 ** -4


def test_override_radius_flagged_non_conformant():
    g = segment(1.0, 200)
    par = parameterize_connected_set(g.space, None, 4, radius=1.0)
    assert par.summary()["conformant_radius"] is False
