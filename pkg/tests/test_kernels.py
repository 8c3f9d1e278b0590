import itertools

import numpy as np
import pytest

from curvelab.kernels import (comparable_menger_sq, excess_integrand, excess_over_diam3, triple_sum,
                              triple_sum_det, triple_sum_mc)


def brute(D, w, f):
    m = len(w)
    tot = 0.0
    for i, j, k in itertools.permutations(range(m), 3):
        tot += float(f(D[i, j], D[j, k], D[i, k])) * w[i] * w[j] * w[k]
    return tot


@pytest.fixture
def small():
    rng = np.random.default_rng(1)
    P = rng.normal(size=(23, 2))
    D = np.sqrt(((P[:, None] - P[None]) ** 2).sum(-1))
    return D, rng.uniform(0.5, 1.5, size=23)


@pytest.mark.parametrize("f", [excess_integrand, excess_over_diam3, comparable_menger_sq(3.0)])
def test_exact_matches_permutation_loop(small, f):
    D, w = small
    assert triple_sum_det(D, w, f).value == pytest.approx(brute(D, w, f), rel=1e-12)


def test_parallel_bit_identical(small):
    D, w = small
    D = np.tile(D, (4, 4))[:80, :80] + np.eye(80) * 0  # larger: several row blocks
    np.fill_diagonal(D, 0)
    w = np.ones(80)
    a = triple_sum_det(D, w, excess_integrand, workers=1).value
    b = triple_sum_det(D, w, excess_integrand, workers=4).value
    assert a == b


def test_mc_reproducible_and_unbiased(small):
    D, w = small
    exact = triple_sum_det(D, w, excess_integrand).value
    a = triple_sum_mc(D, w, excess_integrand, 200_000, seed=7)
    b = triple_sum_mc(D, w, excess_integrand, 200_000, seed=7, workers=3)
    assert a.value == b.value and a.stderr == b.stderr
    assert abs(a.value - exact) < 4 * a.stderr


def test_cap_fallback(small):
    D, w = small
    ts = triple_sum(D, w, excess_integrand, mode="det", cap=100, seed=3)
    assert ts.mode == "mc" and ts.triples == 100
    assert triple_sum(D, w, excess_integrand, mode="det").mode == "det"
