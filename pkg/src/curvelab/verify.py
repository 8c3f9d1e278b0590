"""Both sides of the curvature inequalities, measured on sampled inputs.

Every functional returns a :class:`FunctionalReport` carrying the value, the
reference quantity it is compared against (a length or a radius), their
ratio and the estimator metadata needed to reproduce it. Nothing here decides
whether a ratio is "small enough"; the constants in the inequalities are not
explicit, so callers record ratios and check trends.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beta import beta2_ball
from .curves import Arc, Curve, Sample, lambda_components
from .errors import DomainError
from .kernels import (DEFAULT_CAP, comparable_menger_sq, excess_over_diam3, triple_sum)
from .nets import MultiresolutionFamily, build_family

MC_DRAWS = 1_000_000


@dataclass
class FunctionalReport:
    functional: str
    value: float
    reference: float
    meta: dict = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.value / self.reference if self.reference else float("nan")

    def as_dict(self) -> dict:
        return {"functional": self.functional, "value": self.value, "reference": self.reference,
                "ratio": self.ratio, "meta": self.meta, "rows": self.rows}


def _estimator(D, w, f, *, mode, draws, seed, cap, key=(), workers=1):
    if mode == "det":
        return triple_sum(D, w, f, mode="exact", workers=workers)
    if mode == "mc":
        return triple_sum(D, w, f, mode="mc", draws=draws or MC_DRAWS, seed=seed, key=key,
                          workers=workers)
    if mode == "auto":
        return triple_sum(D, w, f, mode="det", cap=cap, seed=seed, key=key, workers=workers)
    raise DomainError(f"unknown estimator mode {mode!r}; expected det, mc or auto")


def global_curvature_functional(curve: Curve, m: int = 200, mode: str = "det", *, seed: int = 0,
                                draws: int | None = None, cap: int = DEFAULT_CAP,
                                workers: int = 1) -> FunctionalReport:
    """Triple integral of ``excess / diam^3`` over the curve, against its length."""
    if m < 3:
        raise DomainError("global functional needs m >= 3")
    sample = curve.sample(m)
    ts = _estimator(sample.distances(), sample.weights, excess_over_diam3, mode=mode,
                    draws=draws, seed=seed, cap=cap, workers=workers)
    return FunctionalReport("global", ts.value, curve.length,
                            {"m": m, **ts.as_dict(), "length": curve.length})


def multires_from_sample(sample: Sample, family: MultiresolutionFamily, *, mode: str = "det",
                         cap: int = DEFAULT_CAP, seed: int = 0, workers: int = 1,
                         select=None) -> tuple[float, list[dict]]:
    """Sum of per-ball ``beta_2(B)^2 * radius(B)`` over the family.

    ``select(ball) -> bool`` restricts the balls that are summed.
    """
    total = 0.0
    rows = []
    for index, (n, ball) in enumerate(family.balls()):
        if select is not None and not select(ball):
            continue
        rep = beta2_ball(sample, ball, mode=mode, cap=cap, seed=seed, key=(index,), workers=workers)
        total += rep.term
        rows.append({"scale": n, "index": index, **rep.as_row()})
    return total, rows


def multires_curvature_sum(curve: Curve, m: int = 200, *, A: float = 2.0, n_min: int | None = None,
                           n_max: int | None = None, nested: bool = True, order: str = "input",
                           unit: float = 1.0, K=None, mode: str = "det", cap: int = DEFAULT_CAP,
                           seed: int = 0, workers: int = 1,
                           family: MultiresolutionFamily | None = None,
                           sample: Sample | None = None) -> FunctionalReport:
    """Multiresolution sum of radius-normalized triple excesses, against length.

    The family is built over the curve's m-point sample (K defaults to all of
    it) unless one is passed together with the sample it was built on.
    """
    if family is not None and sample is None:
        raise DomainError("a prebuilt family must come with the sample it was built on")
    sample = curve.sample(m) if sample is None else sample
    if family is None:
        K = np.unique(sample.ids) if K is None else K
        family = build_family(sample.space, K, A=A, n_min=n_min, n_max=n_max, nested=nested,
                              order=order, unit=unit)
    total, rows = multires_from_sample(sample, family, mode=mode, cap=cap, seed=seed,
                                       workers=workers)
    max_beta = max((r["beta2"] for r in rows), default=0.0)
    meta = {"m": len(sample), "A": family.A, "n_min": family.n_min, "n_max": family.n_max,
            "nested": family.nested, "unit": family.unit, "balls": len(rows), "mode": mode,
            "cap": cap, "seed": seed, "max_beta2": max_beta, "warnings": list(family.warnings),
            "length": curve.length}
    return FunctionalReport("multires", total, curve.length, meta, rows)


# -- localized variants --------------------------------------------------------------

def _arc_params(curve: Curve, arc: Arc) -> np.ndarray:
    """Arc endpoints plus the curve vertices strictly inside the arc."""
    L = curve.length
    inner = []
    for shift in ((0.0, L) if curve.closed else (0.0,)):
        v = curve.cum[: curve.vertices.size] + shift
        inner.append(v[(v > arc.a) & (v < arc.b)])
    return np.concatenate([[arc.a], np.sort(np.concatenate(inner)), [arc.b]])


@dataclass(frozen=True)
class Gluing:
    components: list[Arc]
    connectors: list[float]
    radius: float
    curve: Curve | None  # glued curve, None when there is a single component

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def added_length(self) -> float:
        return float(sum(self.connectors))

    @property
    def bound(self) -> float:
        return 20.0 * self.count * self.radius

    def as_dict(self) -> dict:
        return {"components": self.count, "connectors": self.connectors,
                "added_length": self.added_length, "bound_20PR": self.bound,
                "glued_length": None if self.curve is None else self.curve.length,
                "arcs": [[a.a, a.b] for a in self.components]}


def glue_components(curve: Curve, loc, R: float) -> Gluing:
    """Chain the components of ``curve ∩ Ball(z, 10R)`` that meet ``Ball(z, R)``.

    The end of each component is joined to the start of the next by a chord
    (a straight segment in R^d, a two-point step elsewhere).
    """
    inner = lambda_components(curve, (loc, R))
    outer = lambda_components(curve, (loc, 10 * R))
    comps = [arc for arc in outer if any(arc.contains(a) for a in inner)]
    if len(comps) <= 1:
        return Gluing(comps, [], R, None)
    pieces = [curve.points_at(_arc_params(curve, arc)) for arc in comps]
    space = curve.space
    connectors = []
    for left, right in zip(pieces[:-1], pieces[1:]):
        if space.euclidean:
            connectors.append(float(np.linalg.norm(left[-1] - right[0])))
        else:
            connectors.append(float(space.dist(int(left[-1]), int(right[0]))))
    if space.euclidean:
        pts = np.vstack(pieces)
        keep = np.r_[True, np.linalg.norm(np.diff(pts, axis=0), axis=1) > 0]
        glued = Curve.from_points(pts[keep])
    else:
        ids = np.concatenate(pieces).astype(np.int64)
        keep = np.r_[True, ids[1:] != ids[:-1]]
        glued = Curve(space, ids[keep])
    return Gluing(comps, connectors, R, glued)


def localized_functional(curve: Curve, z: float, R: float, which: str = "global", m: int = 200, *,
                         A: float = 2.0, nested: bool = True, n_min: int | None = None,
                         n_max: int | None = None, unit: float = 1.0, mode: str = "det",
                         seed: int = 0, draws: int | None = None, cap: int = DEFAULT_CAP,
                         workers: int = 1, glued_m: int | None = None) -> FunctionalReport:
    """The global or multiresolution functional restricted to ``Ball(gamma(z), R)``.

    ``z`` is an arc-length parameter. ``which="global"`` sums over triples in
    the ball; ``which="multires"`` over family balls contained in it (center
    distance plus radius at most R). The reference quantity is R. When the
    curve meets the ball in several pieces of ``Ball(z, 10R)`` the pieces are
    glued into one curve and its global functional is reported alongside.
    """
    if not R > 0:
        raise DomainError(f"localization radius must be positive, got {R}")
    if which not in ("global", "multires"):
        raise DomainError("which must be 'global' or 'multires'")
    loc = curve.point_at(z)
    sample = curve.sample(m)
    to_z = sample.distances_to(loc)
    meta = {"m": m, "z": z, "R": R, "which": which, "mode": mode, "seed": seed}
    rows: list[dict] = []
    if which == "global":
        sub = sample.restrict(to_z <= R)
        ts = _estimator(sub.distances(), sub.weights, excess_over_diam3, mode=mode, draws=draws,
                        seed=seed, cap=cap, workers=workers)
        value = ts.value
        meta.update(ts.as_dict(), members=len(sub))
    else:
        family = build_family(sample.space, np.unique(sample.ids), A=A, n_min=n_min, n_max=n_max,
                              nested=nested, unit=unit)
        center_to_z = dict(zip(sample.ids.tolist(), to_z.tolist()))
        value, rows = multires_from_sample(
            sample, family, mode="det" if mode == "det" else mode, cap=cap, seed=seed,
            workers=workers, select=lambda b: center_to_z[b.center] + b.radius <= R)
        meta.update(A=A, balls=len(rows), n_min=family.n_min, n_max=family.n_max)
    glue = glue_components(curve, loc, R)
    meta["gluing"] = glue.as_dict()
    if glue.curve is not None:
        g = global_curvature_functional(glue.curve, glued_m or m, mode=mode, seed=seed,
                                        draws=draws, workers=workers)
        meta["gluing"]["glued_value"] = g.value
    return FunctionalReport(f"localized_{which}", value, R, meta, rows)


# -- the curvature condition on comparable triples -----------------------------------

def hahlomaa_condition_sum(sample: Sample, A: float, center, R: float, *, mode: str = "det",
                           seed: int = 0, draws: int | None = None, cap: int = DEFAULT_CAP,
                           workers: int = 1) -> FunctionalReport:
    """Sum of ``c^2 * w_i w_j w_k`` over comparable triples in ``Ball(center, R)``.

    A triple is comparable when ``A * min pairwise distance >= diameter``.
    ``center`` is a point id of ``sample.space`` or a coordinate vector.
    """
    if not A >= 1:
        raise DomainError(f"comparability constant A must be >= 1, got {A}")
    if not R > 0:
        raise DomainError("radius must be positive")
    sub = sample.restrict(sample.distances_to(center) <= R)
    ts = _estimator(sub.distances(), sub.weights, comparable_menger_sq(A), mode=mode, draws=draws,
                    seed=seed, cap=cap, workers=workers)
    return FunctionalReport("hahlomaa", ts.value, R,
                            {"A": A, "R": R, "members": len(sub), **ts.as_dict()})


# -- large balls ---------------------------------------------------------------------

def large_ball_diagnostic(sample: Sample, family: MultiresolutionFamily | None,
                          length: float | None = None, fraction: float = 1 / 6,
                          dilation: float = 4.0) -> dict[int, int]:
    """Per scale, how many balls ``B`` have ``mass(4B) >= length/6``."""
    if family is None or len(family) == 0:
        return {}
    length = sample.total_weight if length is None else length
    counts: dict[int, int] = {}
    for n, ball in family.balls():
        mass = sample.weights[sample.distances_to(ball.center) <= dilation * ball.radius].sum()
        counts[n] = counts.get(n, 0) + int(mass >= fraction * length)
    return counts
