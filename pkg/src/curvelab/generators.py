"""Test inputs with known lengths: curves, a Cantor dust, a metric tree and a
snowflaked segment.

Specs are written ``kind:arg:arg...``, for example ``circle:1:360`` (radius 1,
360 vertices) or ``koch:3``. See :data:`GRAMMAR`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import Curve
from .errors import DomainError
from .metric import EuclideanCloud, ExplicitMetric, MetricSpace, PowerTransform

GRAMMAR = {
    "segment": "segment:LENGTH:M",
    "circle": "circle:RADIUS:M",
    "stadium": "stadium:RADIUS:STRAIGHT:M",
    "koch": "koch:LEVEL[:SCALE]",
    "lipschitz": "lipschitz:SEED:AMPLITUDE:M",
    "cantor": "cantor:LEVEL[:SCALE]",
    "star": "star:ARMS:ARM_LENGTH:POINTS_PER_ARM",
    "snowflake": "snowflake:ALPHA:M",
}


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    params: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        kind, *rest = text.strip().split(":")
        if kind not in GRAMMAR:
            raise DomainError(f"unknown generator {kind!r}; known: {', '.join(GRAMMAR)}")
        return cls(kind, tuple(float(x) for x in rest))

    def __str__(self) -> str:
        return ":".join([self.kind, *(f"{p:g}" for p in self.params)])


@dataclass
class Generated:
    spec: GeneratorSpec
    space: MetricSpace
    curve: Curve | None = None
    length: float | None = None  # analytic length, when known
    domain: np.ndarray | None = None
    weights: np.ndarray | None = None
    meta: dict = field(default_factory=dict)


def _args(spec: GeneratorSpec, names: list[str], defaults: dict | None = None) -> dict:
    defaults = defaults or {}
    if not (len(names) - len(defaults) <= len(spec.params) <= len(names)):
        raise DomainError(f"{spec.kind} expects {GRAMMAR[spec.kind]}")
    vals = dict(defaults)
    vals.update(zip(names, spec.params))
    return vals


def _count(x: float, name: str, lo: int) -> int:
    if x != int(x) or x < lo:
        raise DomainError(f"{name} must be an integer >= {lo}, got {x:g}")
    return int(x)


def segment(length: float = 1.0, m: int = 200) -> Generated:
    if not length > 0 or m < 2:
        raise DomainError("segment needs length > 0 and m >= 2")
    x = np.linspace(0.0, length, m)
    pts = np.c_[x, np.zeros(m)]
    return Generated(GeneratorSpec("segment", (length, m)), EuclideanCloud(pts),
                     Curve.from_points(pts), length)


def circle(radius: float = 1.0, m: int = 360) -> Generated:
    if not radius > 0 or m < 3:
        raise DomainError("circle needs radius > 0 and m >= 3")
    th = 2 * np.pi * np.arange(m) / m
    pts = radius * np.c_[np.cos(th), np.sin(th)]
    curve = Curve.from_points(pts, closed=True)
    return Generated(GeneratorSpec("circle", (radius, m)), curve.space, curve, 2 * np.pi * radius)


def stadium(radius: float = 1.0, straight: float = 2.0, m: int = 400) -> Generated:
    """Two half circles joined by parallel segments, vertices spread by length."""
    if not radius > 0 or straight < 0 or m < 4:
        raise DomainError("stadium needs radius > 0, straight >= 0, m >= 4")
    L = 2 * straight + 2 * np.pi * radius
    s = L * np.arange(m) / m
    pts = np.empty((m, 2))
    arc = np.pi * radius
    for k, t in enumerate(s):
        if t < straight:
            pts[k] = (t, -radius)
        elif t < straight + arc:
            phi = (t - straight) / radius - np.pi / 2
            pts[k] = (straight + radius * np.cos(phi), radius * np.sin(phi))
        elif t < 2 * straight + arc:
            pts[k] = (straight - (t - straight - arc), radius)
        else:
            phi = (t - 2 * straight - arc) / radius + np.pi / 2
            pts[k] = (radius * np.cos(phi), radius * np.sin(phi))
    # keep the four junction points as vertices so the straights stay exact
    junctions = np.array([[0, -radius], [straight, -radius], [straight, radius], [0, radius]], float)
    params = np.array([0, straight, straight + arc, 2 * straight + arc])
    order = np.argsort(np.concatenate([s, params]), kind="stable")
    allpts = np.vstack([pts, junctions])[order]
    keep = np.r_[True, np.linalg.norm(np.diff(allpts, axis=0), axis=1) > 1e-12]
    allpts = allpts[keep]
    if np.linalg.norm(allpts[-1] - allpts[0]) <= 1e-12:
        allpts = allpts[:-1]
    curve = Curve.from_points(allpts, closed=True)
    return Generated(GeneratorSpec("stadium", (radius, straight, m)), curve.space, curve, L)


def koch_prefix(level: int = 3, scale: float = 1.0) -> Generated:
    """Open Koch polyline on the base segment [0, scale]; 4**level segments."""
    if level < 0:
        raise DomainError("koch level must be >= 0")
    pts = np.array([[0.0, 0.0], [scale, 0.0]])
    rot = np.array([[0.5, -np.sqrt(3) / 2], [np.sqrt(3) / 2, 0.5]])
    for _ in range(level):
        a, b = pts[:-1], pts[1:]
        d = (b - a) / 3
        p1 = a + d
        p3 = a + 2 * d
        p2 = p1 + d @ rot.T
        new = np.empty((4 * len(a) + 1, 2))
        new[0:-1:4], new[1::4], new[2::4], new[3::4] = a, p1, p2, p3
        new[-1] = pts[-1]
        pts = new
    return Generated(GeneratorSpec("koch", (level, scale)), EuclideanCloud(pts),
                     Curve.from_points(pts), scale * (4 / 3) ** level, meta={"level": level})


def lipschitz_graph(seed: int = 0, amplitude: float = 0.1, m: int = 400, modes: int = 6) -> Generated:
    """Graph of a random trigonometric polynomial on [0, 1]."""
    if m < 2:
        raise DomainError("lipschitz graph needs m >= 2")
    rng = np.random.default_rng(int(seed))
    freq = np.arange(1, modes + 1)
    coef = rng.normal(size=modes) / freq
    phase = rng.uniform(0, 2 * np.pi, size=modes)
    x = np.linspace(0, 1, m)
    y = amplitude * (coef[None, :] * np.sin(2 * np.pi * freq[None, :] * x[:, None] + phase)).sum(axis=1)
    lip = amplitude * 2 * np.pi * np.abs(coef * freq).sum()
    pts = np.c_[x, y]
    return Generated(GeneratorSpec("lipschitz", (seed, amplitude, m)), EuclideanCloud(pts),
                     Curve.from_points(pts), None, meta={"lipschitz_bound": float(lip)})


def four_corner_cantor(level: int = 3, scale: float = 1.0) -> Generated:
    """Centers of the ``4**level`` squares of the four-corner Cantor construction,
    each carrying mass ``4**-level``."""
    if level < 0:
        raise DomainError("cantor level must be >= 0")
    centers = np.array([[0.5, 0.5]])
    side = 1.0
    for _ in range(level):
        child = side / 4
        offs = np.array([[-1, -1], [-1, 1], [1, -1], [1, 1]]) * (side / 2 - child / 2)
        centers = (centers[:, None, :] + offs[None, :, :]).reshape(-1, 2)
        side = child
    pts = centers * scale
    n = len(pts)
    return Generated(GeneratorSpec("cantor", (level, scale)), EuclideanCloud(pts), None, None,
                     np.arange(n), np.full(n, 1.0 / n),
                     meta={"level": level, "square_side": side * scale})


def star_tree(arms: int = 3, arm_length: float = 1.0, points_per_arm: int = 20) -> Generated:
    """Geodesic star: a center joined to ``arms`` segments; path-length metric."""
    if arms < 1 or points_per_arm < 1 or not arm_length > 0:
        raise DomainError("star needs arms >= 1, points_per_arm >= 1, arm_length > 0")
    t = arm_length * np.arange(1, points_per_arm + 1) / points_per_arm
    arm = np.concatenate([[0], np.repeat(np.arange(arms), points_per_arm)])
    r = np.concatenate([[0.0], np.tile(t, arms)])
    same = arm[:, None] == arm[None, :]
    D = np.where(same, np.abs(r[:, None] - r[None, :]), r[:, None] + r[None, :])
    D[0, :] = r
    D[:, 0] = r
    space = ExplicitMetric(D, validate=D.shape[0] <= 301)
    n = D.shape[0]
    w = np.full(n, arm_length / points_per_arm)
    w[0] = 0.0
    return Generated(GeneratorSpec("star", (arms, arm_length, points_per_arm)), space, None,
                     arms * arm_length, np.arange(n), w, meta={"arm": arm.tolist()})


def snowflake_segment(alpha: float = 0.5, m: int = 100) -> Generated:
    """Unit segment with ``dist**alpha``; the curve resolves to its m vertices."""
    if m < 2:
        raise DomainError("snowflake segment needs m >= 2")
    base = EuclideanCloud(np.c_[np.linspace(0, 1, m), np.zeros(m)])
    space = PowerTransform(base, alpha)
    curve = Curve(space, np.arange(m))
    return Generated(GeneratorSpec("snowflake", (alpha, m)), space, curve, None,
                     meta={"polyline_length": curve.length})


def generate(spec: GeneratorSpec | str) -> Generated:
    if isinstance(spec, str):
        spec = GeneratorSpec.parse(spec)
    k = spec.kind
    if k == "segment":
        a = _args(spec, ["length", "m"], {"length": 1.0, "m": 200})
        return segment(a["length"], _count(a["m"], "m", 2))
    if k == "circle":
        a = _args(spec, ["radius", "m"], {"radius": 1.0, "m": 360})
        return circle(a["radius"], _count(a["m"], "m", 3))
    if k == "stadium":
        a = _args(spec, ["radius", "straight", "m"], {"radius": 1.0, "straight": 2.0, "m": 400})
        return stadium(a["radius"], a["straight"], _count(a["m"], "m", 4))
    if k == "koch":
        a = _args(spec, ["level", "scale"], {"scale": 1.0})
        return koch_prefix(_count(a["level"], "level", 0), a["scale"])
    if k == "lipschitz":
        a = _args(spec, ["seed", "amplitude", "m"], {"amplitude": 0.1, "m": 400})
        return lipschitz_graph(_count(a["seed"], "seed", 0), a["amplitude"], _count(a["m"], "m", 2))
    if k == "cantor":
        a = _args(spec, ["level", "scale"], {"scale": 1.0})
        return four_corner_cantor(_count(a["level"], "level", 0), a["scale"])
    if k == "star":
        a = _args(spec, ["arms", "arm_length", "ppa"], {"arm_length": 1.0, "ppa": 20})
        return star_tree(_count(a["arms"], "arms", 1), a["arm_length"], _count(a["ppa"], "points per arm", 1))
    if k == "snowflake":
        a = _args(spec, ["alpha", "m"], {"m": 100})
        return snowflake_segment(a["alpha"], _count(a["m"], "m", 2))
    raise DomainError(f"unknown generator {k!r}")  # pragma: no cover
