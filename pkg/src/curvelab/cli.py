"""Batch command line: ``curvelab <command> [flags]``.

Every command resolves a :class:`RunConfig` (defaults, then an optional JSON
config file, then explicit flags), runs its pipeline stage and prints or
writes a JSON report that embeds the resolved config. Failures print a JSON
error record to stderr and exit with 2 (usage), 3 (invalid data) or
4 (disconnected input).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import io as cio
from .beta import beta2_ball, beta_inf, dyadic_excess_sum
from .curvature import delta, delta1, is_comparable, menger
from .curves import Curve, Sample
from .errors import CurvelabError, UsageError, ValidationError
from .generators import Generated, generate
from .kernels import DEFAULT_CAP
from .metric import MetricSpace, as_ids
from .nets import build_family
from .spanning import audit_tour, parameterize_connected_set
from .svg import render
from .verify import (global_curvature_functional, hahlomaa_condition_sum, large_ball_diagnostic,
                     localized_functional, multires_curvature_sum, multires_from_sample)

COMMANDS = ("generate", "nets", "beta", "curvature", "verify", "tour", "report")
FUNCTIONALS = ("global", "multires", "localized-global", "localized-multires", "hahlomaa",
               "beta-inf", "dyadic", "large-balls")


@dataclass
class RunConfig:
    gen: str | None = None
    input: str | None = None
    curve: str | None = None  # force "open"/"closed" for a point cloud input
    A: float = 2.0
    nmin: int | None = None
    nmax: int | None = None
    nested: bool = False
    order: str = "input"
    unit: float = 1.0
    m: int = 200
    mode: str = "det"
    seed: int | None = None
    cap: int = DEFAULT_CAP
    draws: int | None = None
    workers: int = 1
    functional: list[str] = field(default_factory=lambda: ["global"])
    z: float = 0.0
    R: float = 0.5
    depth: int = 10
    scale: int | None = 4
    epsilon: float | None = None
    triple: list[list[int]] = field(default_factory=list)
    out: str | None = None
    csv: str | None = None
    svg: str | None = None

    def validate(self) -> "RunConfig":
        if (self.gen is None) == (self.input is None):
            raise UsageError("give exactly one input source: --gen or --input")
        if not self.A > 1:
            raise UsageError(f"--A must exceed 1, got {self.A}")
        if self.mode not in ("det", "mc"):
            raise UsageError(f"--mode must be det or mc, got {self.mode!r}")
        if self.mode == "mc" and self.seed is None:
            raise UsageError("--seed is required in mc mode")
        if self.curve not in (None, "open", "closed"):
            raise UsageError("--curve must be open or closed")
        if self.m < 3:
            raise UsageError("--m must be at least 3")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        bad = [f for f in self.functional if f not in FUNCTIONALS]
        if bad:
            raise UsageError(f"unknown functional(s) {bad}; known: {', '.join(FUNCTIONALS)}")
        return self

    @property
    def rng_seed(self) -> int:
        return 0 if self.seed is None else int(self.seed)


FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def resolve_config(flags: dict, config_path: str | None) -> RunConfig:
    values: dict = {}
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {config_path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(loaded) - FIELDS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    values.update({k: v for k, v in flags.items() if k in FIELDS})
    if isinstance(values.get("functional"), str):
        values["functional"] = [values["functional"]]
    try:
        return RunConfig(**values).validate()
    except TypeError as exc:
        raise UsageError(str(exc)) from None


# -- input resolution ----------------------------------------------------------------

@dataclass
class Loaded:
    label: str
    space: MetricSpace
    curve: Curve | None
    domain: np.ndarray
    weights: np.ndarray | None
    length: float | None
    meta: dict = field(default_factory=dict)

    def sample(self, m: int) -> Sample:
        if self.curve is not None:
            return self.curve.sample(m)
        w = self.weights if self.weights is not None else np.full(self.domain.size, 1.0 / self.domain.size)
        return Sample(self.space, self.domain, np.asarray(w, float))

    def need_curve(self, what: str) -> Curve:
        if self.curve is None:
            raise UsageError(f"{what} needs a curve input (use --curve open|closed for a point cloud)")
        return self.curve

    def describe(self) -> dict:
        out = {"source": self.label, "points": int(self.space.n), "euclidean": self.space.euclidean,
               "analytic_length": self.length, **self.meta}
        if self.curve is not None:
            out.update(curve_length=self.curve.length, closed=self.curve.closed)
        return out


def load_input(cfg: RunConfig) -> Loaded:
    if cfg.gen is not None:
        g: Generated = generate(cfg.gen)
        curve = g.curve
        if curve is None and cfg.curve:
            curve = Curve(g.space, g.domain, closed=cfg.curve == "closed")
        dom = g.domain if g.domain is not None else np.arange(g.space.n)
        return Loaded(str(g.spec), g.space, curve, dom, g.weights, g.length, dict(g.meta))
    path = Path(cfg.input)
    if not path.exists():
        raise UsageError(f"input file {path} does not exist")
    force = None if cfg.curve is None else cfg.curve == "closed"
    if path.suffix.lower() == ".json":
        space = cio.load_metric_json(path)
        curve = None if force is None else Curve(space, np.arange(space.n), force)
        return Loaded(str(path), space, curve, np.arange(space.n), None, None)
    text = path.read_text()
    if cio.curve_flag(text) is not None or force is not None:
        curve = cio.load_curve_csv(path, force)
        return Loaded(str(path), curve.space, curve, np.arange(curve.space.n), None, None)
    space = cio.load_cloud_csv(path)
    return Loaded(str(path), space, None, np.arange(space.n), None, None)


# -- commands ------------------------------------------------------------------------

def _family(cfg: RunConfig, space: MetricSpace, K):
    return build_family(space, K, A=cfg.A, n_min=cfg.nmin, n_max=cfg.nmax, nested=cfg.nested,
                        order=cfg.order, unit=cfg.unit)


def _planar(space: MetricSpace) -> bool:
    return space.euclidean and space.points.shape[1] == 2


def _ball_coords(space: MetricSpace, family) -> list:
    return [(space.points[b.center], b.radius, n) for n, b in family.balls()]


def cmd_generate(cfg: RunConfig, data: Loaded, art: dict) -> dict:
    """build a generator input; --out writes CSV (Euclidean) or metric JSON (otherwise)."""
    if cfg.out:
        target = Path(cfg.out)
        if data.curve is not None and data.curve.euclidean:
            cio.write_curve_csv(data.curve, target)
        elif data.space.euclidean:
            cio.write_cloud_csv(data.space.points[data.domain], target)
        else:
            cio.write_json(cio.metric_to_json(data.space), target)
        art["data_file"] = str(target)
    if cfg.svg and _planar(data.space):
        pts = data.space.points[data.domain]
        curve = data.curve.coords if data.curve is not None and data.curve.euclidean else None
        art["svg_text"] = render(pts, curve=curve, closed=bool(data.curve and data.curve.closed),
                                 title=data.label)
    return {"input": data.describe()}


def cmd_nets(cfg: RunConfig, data: Loaded, art: dict) -> dict:
    """epsilon-nets and the multiresolution ball family, with invariant checks."""
    fam = _family(cfg, data.space, data.domain)
    for sc in fam.scales:
        sc.net.check(data.space)
    if cfg.svg and _planar(data.space):
        art["svg_text"] = render(data.space.points[data.domain], balls=_ball_coords(data.space, fam),
                                 curve=data.curve.coords if data.curve is not None else None,
                                 closed=bool(data.curve and data.curve.closed), title=data.label)
    return {"input": data.describe(), "family": fam.as_dict(),
            "balls_per_scale": {str(sc.n): len(sc.net) for sc in fam.scales}}


def cmd_beta(cfg: RunConfig, data: Loaded, art: dict) -> dict:
    """per-ball beta_2 and beta_inf over the family, plus dyadic sums for closed curves."""
    sample = data.sample(cfg.m)
    fam = _family(cfg, sample.space, np.unique(sample.ids))
    rows = []
    total2 = total_inf = 0.0
    for index, (n, ball) in enumerate(fam.balls()):
        rep = beta2_ball(sample, ball, mode=cfg.mode, cap=cfg.cap, seed=cfg.rng_seed, key=(index,),
                         workers=cfg.workers)
        row = {"scale": n, "index": index, **rep.as_row()}
        total2 += rep.term
        if sample.space.euclidean:
            b = beta_inf(sample.space, ball, sample.ids)
            row.update(beta_inf=b, beta_inf_term=b * b * 2 * ball.radius)
            total_inf += row["beta_inf_term"]
        rows.append(row)
    art["rows"] = rows
    out = {"input": data.describe(), "balls": len(rows), "beta2_sum": total2,
           "max_beta2": max((r["beta2"] for r in rows), default=0.0)}
    if sample.space.euclidean:
        out["beta_inf_sum"] = total_inf
    if data.curve is not None and data.curve.closed:
        d = dyadic_excess_sum(data.curve, cfg.depth)
        out["dyadic"] = {"depth": cfg.depth, "total": d.total, "per_level": d.per_level,
                         "length": d.length}
    if cfg.svg and _planar(sample.space):
        art["svg_text"] = render(sample.space.points, balls=_ball_coords(sample.space, fam),
                                 curve=data.curve.coords if data.curve is not None and data.curve.euclidean else None,
                                 closed=bool(data.curve and data.curve.closed), title=data.label)
    return out


def cmd_curvature(cfg: RunConfig, data: Loaded, art: dict) -> dict:
    """excess, Menger curvature and comparability for --triple i,j,k."""
    if not cfg.triple:
        raise UsageError("curvature needs at least one --triple i,j,k")
    out = []
    for t in cfg.triple:
        if len(t) != 3:
            raise UsageError(f"a triple has three ids, got {t}")
        i, j, k = (int(x) for x in as_ids(t, data.space.n))
        out.append({"triple": [i, j, k], "delta1": delta1(data.space, i, j, k),
                    "delta": delta(data.space, i, j, k), "menger": menger(data.space, i, j, k),
                    "comparable": is_comparable(data.space, i, j, k, cfg.A)})
    return {"input": data.describe(), "triples": out}


def _verify_one(name: str, cfg: RunConfig, data: Loaded) -> dict:
    common = dict(mode=cfg.mode, seed=cfg.rng_seed, workers=cfg.workers)
    if name == "global":
        curve = data.need_curve(name)
        return global_curvature_functional(curve, cfg.m, draws=cfg.draws, cap=cfg.cap, **common).as_dict()
    if name == "multires":
        if data.curve is not None:
            rep = multires_curvature_sum(data.curve, cfg.m, A=cfg.A, n_min=cfg.nmin, n_max=cfg.nmax,
                                         nested=cfg.nested, order=cfg.order, unit=cfg.unit,
                                         cap=cfg.cap, **common)
            return rep.as_dict()
        sample = data.sample(cfg.m)
        fam = _family(cfg, sample.space, np.unique(sample.ids))
        total, rows = multires_from_sample(sample, fam, cap=cfg.cap, **common)
        return {"functional": "multires", "value": total, "reference": sample.total_weight,
                "ratio": total / sample.total_weight, "meta": {"balls": len(rows)}, "rows": rows}
    if name.startswith("localized-"):
        curve = data.need_curve(name)
        return localized_functional(curve, cfg.z, cfg.R, name.split("-")[1], cfg.m, A=cfg.A,
                                    nested=cfg.nested, n_min=cfg.nmin, n_max=cfg.nmax, unit=cfg.unit,
                                    draws=cfg.draws, cap=cfg.cap, **common).as_dict()
    if name == "hahlomaa":
        sample = data.sample(cfg.m)
        center = int(sample.ids[0]) if data.curve is None else data.curve.point_at(cfg.z)
        return hahlomaa_condition_sum(sample, cfg.A, center, cfg.R, draws=cfg.draws, cap=cfg.cap,
                                      **common).as_dict()
    if name == "beta-inf":
        from .beta import beta_inf_multires_sum
        sample = data.sample(cfg.m)
        if not sample.space.euclidean:
            raise UsageError("beta-inf needs a Euclidean input")
        fam = _family(cfg, sample.space, np.unique(sample.ids))
        rep = beta_inf_multires_sum(sample.space, sample.ids, fam)
        ref = data.curve.length if data.curve is not None else sample.total_weight
        return {"functional": "beta-inf", "value": rep.total, "reference": ref,
                "ratio": rep.total / ref, "meta": {"balls": len(rep.rows)}, "rows": rep.rows}
    if name == "dyadic":
        curve = data.need_curve(name)
        d = dyadic_excess_sum(curve, cfg.depth)
        return {"functional": "dyadic", "value": d.total, "reference": d.length,
                "ratio": d.total / d.length, "meta": {"depth": cfg.depth,
                                                      "per_level": d.per_level}, "rows": []}
    if name == "large-balls":
        sample = data.sample(cfg.m)
        fam = _family(cfg, sample.space, np.unique(sample.ids))
        counts = large_ball_diagnostic(sample, fam)
        return {"functional": "large-balls", "value": float(sum(counts.values())),
                "reference": float(len(counts)), "ratio": None,
                "meta": {"per_scale": {str(k): v for k, v in counts.items()}}, "rows": []}
    raise UsageError(f"unknown functional {name!r}")  # pragma: no cover


def cmd_verify(cfg: RunConfig, data: Loaded, art: dict) -> dict:
    """the functionals selected with --functional."""
    results = {}
    rows = []
    for name in cfg.functional:
        res = _verify_one(name, cfg, data)
        rows.extend({"functional": name, **r} for r in res.pop("rows", []))
        results[name] = res
    art["rows"] = rows
    return {"input": data.describe(), "functionals": results}


def cmd_tour(cfg: RunConfig, data: Loaded, art: dict) -> dict:
    """net graph, spanning tree and doubled Euler tour at one scale, with audit."""
    ref = data.length if data.length is not None else (data.curve.length if data.curve else None)
    scale = None if cfg.epsilon is not None else (4 if cfg.scale is None else cfg.scale)
    par = parameterize_connected_set(data.space, data.domain, scale, epsilon=cfg.epsilon,
                                     order=cfg.order, reference_length=ref)
    audit = audit_tour(par.graph, par.tour)
    if cfg.svg and _planar(data.space):
        pts = data.space.points
        art["svg_text"] = render(pts[data.domain], tour=pts[list(par.tour.order)],
                                 curve=data.curve.coords if data.curve is not None and data.curve.euclidean else None,
                                 closed=bool(data.curve and data.curve.closed), title=data.label)
    return {"input": data.describe(), "summary": par.summary(), "audit": audit,
            "tour": par.tour.as_dict(par.graph, data.space)}


def cmd_report(cfg: RunConfig, data: Loaded, art: dict) -> dict:
    """generate, nets, functionals and (for connected inputs) the tour, in one report."""
    out = {"input": data.describe()}
    fam = _family(cfg, data.space, data.domain)
    out["nets"] = {"n_min": fam.n_min, "n_max": fam.n_max,
                   "balls_per_scale": {str(sc.n): len(sc.net) for sc in fam.scales}}
    out.update(cmd_verify(cfg, data, art))
    if cfg.scale is not None or cfg.epsilon is not None:
        tour_art: dict = {}
        t = cmd_tour(dataclasses.replace(cfg, svg=None), data, tour_art)
        out["tour"] = {"summary": t["summary"], "audit": t["audit"]}
    if cfg.svg and _planar(data.space):
        art["svg_text"] = render(data.space.points[data.domain], balls=_ball_coords(data.space, fam),
                                 curve=data.curve.coords if data.curve is not None and data.curve.euclidean else None,
                                 closed=bool(data.curve and data.curve.closed), title=data.label)
    return out


HANDLERS = {"generate": cmd_generate, "nets": cmd_nets, "beta": cmd_beta, "curvature": cmd_curvature,
            "verify": cmd_verify, "tour": cmd_tour, "report": cmd_report}


# -- argument parsing ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _triple(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i,j,k, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    common = _Parser(add_help=False, argument_default=S)
    src = common.add_argument_group("input")
    src.add_argument("--gen", help="generator spec, e.g. circle:1:360")
    src.add_argument("--input", help="point cloud or curve CSV, or explicit metric JSON")
    src.add_argument("--curve", choices=["open", "closed"], help="read a point cloud as a polyline")
    fam = common.add_argument_group("family")
    fam.add_argument("--A", type=float)
    fam.add_argument("--nmin", type=int)
    fam.add_argument("--nmax", type=int)
    fam.add_argument("--nested", action="store_true")
    fam.add_argument("--order", choices=["input", "farthest"])
    fam.add_argument("--unit", type=float, help="scale unit: nets at unit*2^-n")
    est = common.add_argument_group("estimators")
    est.add_argument("--m", type=int, help="curve sample count")
    est.add_argument("--mode", choices=["det", "mc"])
    est.add_argument("--seed", type=int)
    est.add_argument("--cap", type=int, help="triple count above which det falls back to sampling")
    est.add_argument("--draws", type=int, help="Monte Carlo draws")
    est.add_argument("--workers", type=int)
    est.add_argument("--functional", action="append", choices=FUNCTIONALS)
    est.add_argument("--z", type=float, help="arc-length parameter of the localization center")
    est.add_argument("--R", type=float, help="localization radius")
    est.add_argument("--depth", type=int, help="dyadic depth")
    est.add_argument("--scale", type=int, help="tour scale n (eps = 2^-n)")
    est.add_argument("--epsilon", type=float, help="tour net spacing, instead of --scale")
    est.add_argument("--triple", action="append", type=_triple, help="point ids i,j,k")
    outg = common.add_argument_group("output")
    outg.add_argument("--out", help="report JSON path (generate: data file)")
    outg.add_argument("--csv", help="per-ball CSV path")
    outg.add_argument("--svg", help="SVG path, 2-D inputs only")
    outg.add_argument("--config", help="JSON config; flags override its keys")

    parser = _Parser(prog="curvelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"curvelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=(HANDLERS[name].__doc__ or "").strip() or None)
    return parser


def run(cfg: RunConfig, command: str) -> tuple[dict, dict]:
    """Execute one command; returns the report and side artifacts (rows, svg)."""
    data = load_input(cfg)
    art: dict = {}
    results = HANDLERS[command](cfg, data, art)
    report = {"command": command, "version": __version__, "config": dataclasses.asdict(cfg),
              "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
              "results": results}
    return report, art


def _emit(cfg: RunConfig, command: str, report: dict, art: dict) -> None:
    if cfg.svg:
        if "svg_text" not in art:
            raise UsageError("SVG output is only available for 2-D Euclidean inputs")
        Path(cfg.svg).write_text(art["svg_text"])
    if cfg.csv:
        cio.write_rows_csv(art.get("rows", []), cfg.csv)
    text = cio.dumps(report)
    if cfg.out and command != "generate":
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = vars(build_parser().parse_args(argv))
        command = args.pop("command")
        config_path = args.pop("config", None)
        cfg = resolve_config(args, config_path)
        report, art = run(cfg, command)
        _emit(cfg, command, report, art)
        return 0
    except CurvelabError as exc:
        sys.stderr.write(json.dumps(exc.record(), sort_keys=True) + "\n")
        return exc.exit_code
    except ValueError as exc:  # geometry preconditions raised by numpy/scipy helpers
        err = ValidationError(str(exc))
        sys.stderr.write(json.dumps(err.record(), sort_keys=True) + "\n")
        return err.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
