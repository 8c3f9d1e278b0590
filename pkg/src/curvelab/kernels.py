"""Weighted sums of symmetric triple integrands over a finite sample.

All sums run over *ordered* triples of distinct indices, i.e. the discrete
analogue of a triple integral against a product measure with the diagonal
removed. Integrands are symmetric, so the deterministic path enumerates
``i < j < k`` once and multiplies by 6.

Reproducibility rules:

* the deterministic path splits work into row blocks whose boundaries do not
  depend on the number of workers, and partial sums are reduced in block
  order, so serial and threaded runs agree bit for bit;
* the Monte Carlo path draws fixed-size chunks, each from its own
  ``SeedSequence(entropy=seed, spawn_key=(*key, chunk))`` substream.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curvature import comparable_from_sides, excess_from_sides, menger_sq_from_sides

DEFAULT_CAP = 20_000_000
MC_CHUNK = 1 << 16
_ROWS_PER_BLOCK = 16
_SMALL = 48

Integrand = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def excess_integrand(a, b, c):
    return excess_from_sides(a, b, c)


def excess_over_diam3(a, b, c):
    e = excess_from_sides(a, b, c)
    m = np.maximum(np.maximum(a, b), c)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = e / (m * m * m)
    return np.where(e > 0, out, 0.0)


def comparable_menger_sq(A: float) -> Integrand:
    def f(a, b, c):
        return np.where(comparable_from_sides(a, b, c, A), menger_sq_from_sides(a, b, c), 0.0)

    f.__name__ = f"comparable_menger_sq(A={A})"
    return f


@dataclass(frozen=True)
class TripleSum:
    value: float
    mode: str  # "det" or "mc"
    triples: int  # triples evaluated (det: distinct ordered triples; mc: draws)
    stderr: float = 0.0
    seed: int | None = None

    def as_dict(self) -> dict:
        return {"value": self.value, "mode": self.mode, "triples": self.triples,
                "stderr": self.stderr, "seed": self.seed}


def _row_partial(D: np.ndarray, w: np.ndarray, f: Integrand, i: int) -> float:
    # triples (i, j, k) with i < j < k
    a = D[i, i + 1:]
    if a.size < 2:
        return 0.0
    sub = D[i + 1:, i + 1:]
    vals = f(a[:, None], a[None, :], sub)
    ww = w[i + 1:]
    vals = np.triu(vals * ww[:, None] * ww[None, :], k=1)
    return float(w[i] * vals.sum())


def _small_total(D: np.ndarray, w: np.ndarray, f: Integrand) -> float:
    k = D.shape[0]
    vals = f(D[:, :, None], D[:, None, :], D[None, :, :])
    idx = np.arange(k)
    keep = (idx[:, None, None] < idx[None, :, None]) & (idx[None, :, None] < idx[None, None, :])
    wt = w[:, None, None] * w[None, :, None] * w[None, None, :]
    return float(np.where(keep, vals * wt, 0.0).sum())


def triple_sum_det(D: np.ndarray, w: np.ndarray, f: Integrand, workers: int = 1) -> TripleSum:
    """Exact sum over ordered distinct triples."""
    k = D.shape[0]
    n_triples = k * (k - 1) * (k - 2)
    if k < 3:
        return TripleSum(0.0, "det", 0)
    if k <= _SMALL:
        return TripleSum(6.0 * _small_total(D, w, f), "det", n_triples)

    starts = list(range(0, k - 2, _ROWS_PER_BLOCK))

    def block(s: int) -> float:
        total = 0.0
        for i in range(s, min(s + _ROWS_PER_BLOCK, k - 2)):
            total += _row_partial(D, w, f, i)
        return total

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(s) for s in starts]
    total = 0.0
    for p in parts:
        total += p
    return TripleSum(6.0 * total, "det", n_triples)


def triple_sum_mc(D: np.ndarray, w: np.ndarray, f: Integrand, draws: int, seed: int,
                  key: tuple[int, ...] = (), workers: int = 1) -> TripleSum:
    """Unbiased Monte Carlo estimate over uniformly drawn ordered index triples.

    Draws with repeated indices score 0, matching the deterministic sum which
    excludes the diagonal.
    """
    k = D.shape[0]
    if k < 3 or draws <= 0:
        return TripleSum(0.0, "mc", max(draws, 0), 0.0, seed)
    n_chunks = -(-draws // MC_CHUNK)

    def chunk(c: int) -> tuple[float, float, int]:
        size = min(MC_CHUNK, draws - c * MC_CHUNK)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(*key, c)))
        t = rng.integers(0, k, size=(size, 3))
        i, j, l = t[:, 0], t[:, 1], t[:, 2]
        vals = f(D[i, j], D[j, l], D[i, l]) * w[i] * w[j] * w[l]
        distinct = (i != j) & (j != l) & (i != l)
        vals = np.where(distinct, vals, 0.0)
        return float(vals.sum()), float((vals * vals).sum()), size

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, range(n_chunks)))
    else:
        parts = [chunk(c) for c in range(n_chunks)]
    s1 = s2 = 0.0
    for a, b, _ in parts:
        s1 += a
        s2 += b
    mean = s1 / draws
    var = max(s2 / draws - mean * mean, 0.0) * draws / max(draws - 1, 1)
    scale = float(k) ** 3
    return TripleSum(scale * mean, "mc", draws, scale * np.sqrt(var / draws), seed)


def triple_sum(D: np.ndarray, w: np.ndarray, f: Integrand, *, mode: str = "det",
               cap: int = DEFAULT_CAP, draws: int | None = None, seed: int = 0,
               key: tuple[int, ...] = (), workers: int = 1) -> TripleSum:
    """Dispatch between exact and Monte Carlo summation.

    ``mode="det"`` sums exactly when the ordered triple count is at most
    ``cap`` and falls back to Monte Carlo (``cap`` draws) above it;
    ``mode="exact"`` always sums exactly; ``mode="mc"`` always samples.
    """
    k = D.shape[0]
    if mode == "exact" or (mode == "det" and k * (k - 1) * (k - 2) <= cap):
        return triple_sum_det(D, w, f, workers=workers)
    if mode not in ("det", "mc"):
        raise ValueError(f"unknown estimator mode {mode!r}")
    return triple_sum_mc(D, w, f, draws or cap, seed, key=key, workers=workers)
