"""Net graphs, doubled Euler tours and closed-curve parameterizations of
connected sampled sets.

Pipeline for a scale ``eps``: take an eps-net of the sample, join net points
closer than ``8 * eps`` whenever they lie in different components (shortest
pairs first), walk the resulting connected graph along every edge once in each
direction, and read the walk as a closed polyline.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .curves import Curve
from .errors import DisconnectedError, DomainError
from .metric import MetricSpace, as_ids
from .nets import Net, build_net

CONNECT_FACTOR = 8.0


class UnionFind:
    def __init__(self, items):
        self.parent = {int(x): int(x) for x in items}
        self.size = {int(x): 1 for x in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self) -> list[list[int]]:
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return sorted((sorted(g) for g in out.values()), key=lambda g: g[0])


@dataclass(frozen=True)
class NetGraph:
    vertices: np.ndarray  # point ids
    edges: tuple[tuple[int, int, float], ...]  # (u, v, length) with u < v
    epsilon: float
    radius: float  # connection radius actually used
    conformant: bool  # radius == 8 * epsilon

    @property
    def total_length(self) -> float:
        return float(sum(e[2] for e in self.edges))

    def adjacency(self) -> dict[int, list[int]]:
        adj = {int(v): [] for v in self.vertices}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def is_connected(self) -> bool:
        uf = UnionFind(self.vertices)
        for u, v, _ in self.edges:
            uf.union(u, v)
        return len(uf.groups()) <= 1

    def as_dict(self) -> dict:
        return {"vertices": self.vertices.tolist(),
                "edges": [[u, v, w] for u, v, w in self.edges],
                "epsilon": self.epsilon, "radius": self.radius, "conformant": self.conformant}


def build_net_graph(space: MetricSpace, net: Net, radius: float | None = None) -> NetGraph:
    """Join net points at distance < radius (default 8 eps) across components.

    Candidate pairs are processed by ascending length, then by id pair, so
    the output is the minimum spanning forest of the threshold graph.
    Raises :class:`DisconnectedError` if more than one component remains.
    """
    conformant = radius is None
    radius = CONNECT_FACTOR * net.epsilon if radius is None else float(radius)
    ids = net.members
    edges: list[tuple[int, int, float]] = []
    uf = UnionFind(ids)
    if ids.size > 1:
        D = space.pairwise(ids)
        iu, ju = np.triu_indices(ids.size, 1)
        d = D[iu, ju]
        keep = d < radius
        iu, ju, d = iu[keep], ju[keep], d[keep]
        a, b = ids[iu], ids[ju]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        for p in np.lexsort((hi, lo, d)):
            u, v = int(lo[p]), int(hi[p])
            if uf.union(u, v):
                edges.append((u, v, float(d[p])))
                if len(edges) == ids.size - 1:
                    break
    groups = uf.groups()
    if len(groups) > 1:
        first = np.array(groups[0])
        rest = np.array([x for g in groups[1:] for x in g])
        block = space.pairwise(first, rest)
        i, j = np.unravel_index(int(np.argmin(block)), block.shape)
        other = next(g for g in groups[1:] if int(rest[j]) in g)
        raise DisconnectedError(
            f"net graph has {len(groups)} components; points {int(first[i])} and {int(rest[j])} "
            f"are {block[i, j]:.6g} apart, not below the connection radius {radius:.6g}",
            (groups[0], other), float(block[i, j]), radius)
    return NetGraph(ids.copy(), tuple(edges), net.epsilon, radius, conformant)


@dataclass(frozen=True)
class Tour:
    order: tuple[int, ...]  # closed vertex walk, first == last
    steps: tuple[tuple[int, int], ...]  # (edge index, direction +1 for u->v, -1 for v->u)

    def length(self, graph: NetGraph) -> float:
        return float(sum(graph.edges[e][2] for e, _ in self.steps))

    def as_dict(self, graph: NetGraph, space: MetricSpace | None = None) -> dict:
        verts = [{"id": int(v)} for v in graph.vertices]
        if space is not None and space.euclidean:
            for rec in verts:
                rec["coords"] = space.points[rec["id"]].tolist()
        return {"vertices": verts,
                "edges": [[u, v, w] for u, v, w in graph.edges],
                "order": list(self.order),
                "length": self.length(graph)}


def double_euler_tour(graph: NetGraph) -> Tour:
    """Hierholzer circuit on the graph with every edge doubled into two arcs.

    Starts at the lowest vertex id; neighbors are tried in ascending id order.
    """
    if not graph.is_connected():
        raise DomainError("double Euler tour needs a connected graph")
    start = int(graph.vertices.min())
    if not graph.edges:
        return Tour((start,), ())
    out_arcs: dict[int, list[tuple[int, int, int]]] = defaultdict(list)  # v -> (to, edge, dir)
    for e, (u, v, _) in enumerate(graph.edges):
        out_arcs[u].append((v, e, +1))
        out_arcs[v].append((u, e, -1))
    for v in out_arcs:
        # popped from the end, so sort descending to try small ids first
        out_arcs[v].sort(key=lambda t: (t[0], t[1]), reverse=True)
    stack: list[tuple[int, tuple[int, int] | None]] = [(start, None)]
    circuit: list[tuple[int, tuple[int, int] | None]] = []
    while stack:
        v, via = stack[-1]
        if out_arcs[v]:
            to, e, direction = out_arcs[v].pop()
            stack.append((to, (e, direction)))
        else:
            circuit.append(stack.pop())
    circuit.reverse()
    order = tuple(v for v, _ in circuit)
    steps = tuple(via for _, via in circuit[1:])
    return Tour(order, steps)


def audit_tour(graph: NetGraph, tour: Tour) -> dict:
    """Count traversals per edge and direction; a valid doubled tour has every
    count equal to 1."""
    counts = {(e, d): 0 for e in range(len(graph.edges)) for d in (+1, -1)}
    for k, (e, d) in enumerate(tour.steps):
        u, v, _ = graph.edges[e]
        a, b = (u, v) if d == +1 else (v, u)
        if (tour.order[k], tour.order[k + 1]) != (a, b):
            raise AssertionError(f"step {k} does not follow edge {e}")
        counts[(e, d)] += 1
    closed = tour.order[0] == tour.order[-1]
    return {"closed": closed, "all_once_per_direction": all(c == 1 for c in counts.values()),
            "steps": len(tour.steps), "edges": len(graph.edges)}


@dataclass(frozen=True)
class Parameterization:
    curve: Curve
    net: Net
    graph: NetGraph
    tour: Tour
    hausdorff_gap: float  # sup_{x in E} dist(x, G) + sup_{y in G} dist(E, y)
    gap_resolution: float
    reference_length: float | None

    @property
    def edge_length(self) -> float:
        return self.graph.total_length

    @property
    def count_bound(self) -> float:
        """``#net * 8 eps``."""
        return len(self.net) * CONNECT_FACTOR * self.net.epsilon

    def summary(self) -> dict:
        eps = self.net.epsilon
        out = {
            "epsilon": eps, "net_size": len(self.net), "edges": len(self.graph.edges),
            "edge_length": self.edge_length, "count_bound": self.count_bound,
            "tour_length": self.curve.length, "hausdorff_gap": self.hausdorff_gap,
            "hausdorff_bound": 5 * eps, "gap_resolution": self.gap_resolution,
            "conformant_radius": self.graph.conformant,
        }
        if self.reference_length is not None:
            L = self.reference_length
            out.update(reference_length=L, edge_bound=16 * L, lipschitz_bound=32 * L)
        return out


def hausdorff_gap(space: MetricSpace, domain: np.ndarray, graph: NetGraph) -> tuple[float, float]:
    """Two-sided gap between the edge set and the sample, as a conservative
    upper estimate, with its discretization resolution.

    Euclidean edges are straight segments, discretized at spacing ``eps/32``;
    elsewhere the edge set is just the net points.
    """
    if not space.euclidean:
        to_net = space.pairwise(domain, graph.vertices).min(axis=1).max()
        return float(to_net), 0.0
    h = graph.epsilon / 32
    pts = [space.points[graph.vertices]]
    for u, v, w in graph.edges:
        t = np.linspace(0.0, 1.0, max(2, int(np.ceil(w / h)) + 1))
        pts.append(space.points[u] + t[:, None] * (space.points[v] - space.points[u]))
    E = np.vstack(pts)
    G = space.points[domain]
    out_side = cKDTree(G).query(E)[0].max() + h / 2
    in_side = cKDTree(E).query(G)[0].max()
    return float(out_side + in_side), h / 2


def parameterize_connected_set(space: MetricSpace, domain=None, scale: int | None = None, *,
                               epsilon: float | None = None, order: str = "input",
                               reference_length: float | None = None,
                               radius: float | None = None) -> Parameterization:
    """Closed Lipschitz curve through a net of a connected sample.

    Give either ``scale`` (eps = 2**-scale) or ``epsilon``.
    """
    if (scale is None) == (epsilon is None):
        raise DomainError("give exactly one of scale or epsilon")
    eps = 2.0 ** -scale if epsilon is None else float(epsilon)
    dom = as_ids(domain, space.n)
    net = build_net(space, dom, eps, order=order)
    graph = build_net_graph(space, net, radius=radius)
    tour = double_euler_tour(graph)
    walk = list(tour.order[:-1]) if len(tour.order) > 1 else list(tour.order)
    curve = Curve(space, walk, closed=True)
    gap, res = hausdorff_gap(space, dom, graph)
    return Parameterization(curve, net, graph, tour, gap, res, reference_length)
