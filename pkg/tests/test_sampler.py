import math

import numpy as np
import pytest
from scipy import stats

from kextremal import (
    SampleBatch,
    conditional_cdf,
    conditional_quantile,
    copula_cdf,
    psi,
    sample_batch,
    sample_one,
    support_check,
)
from kextremal.sampler import BLOCK_SIZE, substream


def dkw_band(n, points, alpha=0.01):
    # two-sided DKW radius with a union bound over the evaluation points
    return math.sqrt(math.log(2 * points / alpha) / (2 * n))


@pytest.fixture(scope="module")
def batch4():
    return sample_batch(4, 100_000, seed=7)


def test_batch_shape_and_range(batch4):
    assert isinstance(batch4, SampleBatch)
    assert batch4.rows.shape == (100_000, 4)
    assert np.all((batch4.rows > 0) & (batch4.rows < 1))
    assert batch4.seed == 7


@pytest.mark.parametrize("col", range(4))
def test_uniform_margins_ks(batch4, col):
    assert stats.kstest(batch4.rows[:, col], "uniform").pvalue > 0.01


def test_chain_is_decreasing_and_consistent(batch4):
    chain = batch4.chain_rows
    assert np.all(np.diff(batch4.log_chain, axis=1) < 0)
    assert np.allclose(chain[:, 0], batch4.rows[:, 0])
    sub = batch4.rows[:500]
    for m in range(2, 5):
        assert np.allclose(psi(m, sub[:, m - 1]).v, chain[:500, m - 1], rtol=1e-10)


def test_rows_in_support(batch4):
    for row in batch4.rows[:200]:
        assert support_check(row).in_support


def test_empirical_cdf_within_dkw_band(batch4):
    rng = np.random.default_rng(99)
    pts = rng.uniform(0.05, 1.0, (20, 4))
    emp = np.array([np.mean(np.all(batch4.rows <= p, axis=1)) for p in pts])
    exact = copula_cdf(pts)
    assert np.max(np.abs(emp - exact)) < dkw_band(batch4.n, 20)


def test_conditional_uniformity(batch4):
    # conditional CDF of U_m given the past is uniform on the sample,
    # also within bins of the conditioning variable
    rows = batch4.rows[:20_000]
    for m in range(2, 5):
        w = conditional_cdf(m, rows[:, m - 1], rows[:, m - 2])
        assert stats.kstest(w, "uniform").pvalue > 0.001
        bins = np.quantile(rows[:, m - 2], [0, 0.25, 0.5, 0.75, 1])
        which = np.clip(np.searchsorted(bins, rows[:, m - 2], side="right") - 1, 0, 3)
        table = np.array([np.histogram(w[which == b], bins=10, range=(0, 1))[0] for b in range(4)])
        chi2 = stats.chisquare(table.ravel(), np.repeat(table.sum(axis=1) / 10.0, 10))
        assert chi2.pvalue > 0.001


def test_determinism_and_workers():
    a = sample_batch(3, 2 * BLOCK_SIZE + 17, seed=5)
    b = sample_batch(3, 2 * BLOCK_SIZE + 17, seed=5, workers=4)
    assert np.array_equal(a.rows, b.rows)
    c = sample_batch(3, 2 * BLOCK_SIZE + 17, seed=6)
    assert not np.array_equal(a.rows, c.rows)


def test_prefix_stability():
    # rows depend only on their block, so a shorter batch is a prefix
    long = sample_batch(2, 3 * BLOCK_SIZE, seed=1)
    short = sample_batch(2, BLOCK_SIZE + 10, seed=1)
    assert np.array_equal(long.rows[:BLOCK_SIZE], short.rows[:BLOCK_SIZE])


def test_sample_one_matches_first_row():
    row, chain = sample_one(3, substream(4, 0))
    batch = sample_batch(3, 5, seed=4)
    assert np.allclose(row, batch.rows[0], rtol=0, atol=0)
    assert np.allclose(chain, batch.chain_rows[0])


def test_conditional_quantile_round_trip():
    v_prev = psi(1, 0.8).v
    u2, v2 = conditional_quantile(2, 0.3, v_prev)
    assert v2 == pytest.approx(0.24)
    assert psi(2, u2).v == pytest.approx(0.24, rel=1e-13)
    assert conditional_cdf(2, u2, 0.8) == pytest.approx(0.3, rel=1e-12)


def test_conditional_errors():
    with pytest.raises(ValueError):
        conditional_cdf(2, 0.99, 0.01)
    with pytest.raises(ValueError):
        conditional_cdf(1, 0.5, 0.5)
    with pytest.raises(ValueError):
        conditional_quantile(2, 0.0, 0.5)


def test_matches_order_statistics_of_iid():
    # the top 3 of n uniforms, each pushed through its exact Beta CDF,
    # follow the limit copula up to O(1/n)
    rng = np.random.default_rng(0)
    n, N = 2000, 4000
    x = rng.random((N, n))
    top = -np.sort(-np.partition(x, n - 3, axis=1)[:, n - 3:], axis=1)
    # marginal CDF of the k-th largest of n uniforms is a Beta CDF
    u = np.column_stack([stats.beta.cdf(top[:, k], n - k, k + 1) for k in range(3)])
    ref = sample_batch(3, N, seed=3).rows
    for k in range(3):
        assert stats.ks_2samp(u[:, k], ref[:, k]).pvalue > 0.001
    pts = np.array([[0.5, 0.5, 0.5], [0.8, 0.4, 0.3], [0.9, 0.9, 0.2]])
    for p in pts:
        e1 = np.mean(np.all(u <= p, axis=1))
        assert abs(e1 - copula_cdf(p)) < 2 * dkw_band(N, 3) + 0.005


def test_large_k_does_not_underflow():
    b = sample_batch(400, 1000, seed=2)
    assert np.all(np.isfinite(b.log_chain))
    assert np.all((b.rows > 0) & (b.rows < 1))
    assert stats.kstest(b.rows[:, -1], "uniform").pvalue > 0.001


def test_validation():
    with pytest.raises(ValueError):
        sample_batch(1, 10)
    with pytest.raises(ValueError):
        sample_batch(2, 0)
