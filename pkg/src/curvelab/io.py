"""File formats.

* point cloud CSV: one point per row, one column per coordinate; ``#`` lines
  are comments;
* curve CSV: the same, preceded by a ``# closed`` or ``# open`` line;
* explicit metric JSON: ``{"n": int, "dist": [row-major n*n floats]}``;
* reports: JSON with sorted keys, and CSV for per-ball rows.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from pathlib import Path

import numpy as np

from .curves import Curve
from .errors import ValidationError
from .metric import EuclideanCloud, ExplicitMetric, MetricSpace


def _read_rows(text: str) -> np.ndarray:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # empty input is reported below
            data = np.loadtxt(io.StringIO(text), delimiter=",", comments="#", ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"malformed CSV: {exc}") from None
    if data.size == 0:
        raise ValidationError("CSV contains no points")
    return data


def curve_flag(text: str) -> bool | None:
    """``True``/``False`` for a closed/open header, ``None`` when absent."""
    for line in text.splitlines():
        s = line.strip().lstrip("#").strip().lower()
        if not s:
            continue
        if s in ("closed", "open"):
            return s == "closed"
        if not line.lstrip().startswith("#"):
            return None
    return None


def load_cloud_csv(path) -> EuclideanCloud:
    return EuclideanCloud(_read_rows(Path(path).read_text()))


def load_curve_csv(path, closed: bool | None = None) -> Curve:
    text = Path(path).read_text()
    flag = curve_flag(text)
    if flag is None and closed is None:
        raise ValidationError(f"{path}: curve CSV needs a '# closed' or '# open' header line")
    return Curve.from_points(_read_rows(text), closed=flag if closed is None else closed)


def load_metric_json(path) -> ExplicitMetric:
    try:
        obj = json.loads(Path(path).read_text())
        n, flat = int(obj["n"]), obj["dist"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: expected {{\"n\": int, \"dist\": [...]}} ({exc})") from None
    return ExplicitMetric.from_flat(n, flat)


def write_cloud_csv(points: np.ndarray, path, header: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if header:
            fh.write(f"# {header}\n")
        for row in np.atleast_2d(points):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def write_curve_csv(curve: Curve, path) -> None:
    write_cloud_csv(curve.coords, path, "closed" if curve.closed else "open")


def metric_to_json(space: MetricSpace) -> dict:
    D = space.pairwise()
    return {"n": int(space.n), "dist": D.reshape(-1).tolist()}


def _clean(obj):
    """Make a report JSON-safe: numpy scalars/arrays to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"


def write_json(report: dict, path) -> None:
    Path(path).write_text(dumps(report))


def write_rows_csv(rows: list[dict], path) -> None:
    rows = [_clean(r) for r in rows]
    fields: list[str] = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
