import math

import numpy as np
import pytest

from kextremal import (
    ConvergenceRow,
    ParentSpec,
    convergence_report,
    copula_cdf,
    empirical_cdf_at,
    empirical_copula_build,
    order_stats_replicates,
)
from kextremal.convergence import FAMILIES, mc_floor, random_grid


def dkw_band(n, points, alpha=0.01):
    return math.sqrt(math.log(2 * points / alpha) / (2 * n))


def two_sample_copula(u, v):
    """Copula of (max, min) of two iid continuous draws.

    The max has CDF x^2 and the min 1 - (1 - x)^2; mapping back to the raw
    scale gives a = sqrt(u), b = 1 - sqrt(1 - v) and C = 2ab - b^2 for
    b <= a, else u.
    """
    a = math.sqrt(u)
    b = 1 - math.sqrt(1 - v)
    return 2 * a * b - b * b if b <= a else u


@pytest.mark.parametrize("family", FAMILIES)
def test_replicates_shape_and_order(family):
    x = order_stats_replicates(family, 50, 3, 400, seed=1)
    assert x.shape == (400, 3)
    assert np.all(np.diff(x, axis=1) <= 0)
    assert np.array_equal(x, order_stats_replicates(family, 50, 3, 400, seed=1))


def test_top_one_is_the_maximum():
    x = order_stats_replicates("uniform", 100, 1, 2000, seed=4)
    # max of 100 uniforms has CDF x^100
    assert np.mean(x[:, 0] ** 100) == pytest.approx(0.5, abs=0.03)


def test_parent_validation():
    with pytest.raises(ValueError):
        ParentSpec("cauchy")
    with pytest.raises(ValueError):
        order_stats_replicates("uniform", 2, 3, 10)


def test_pseudo_observations():
    x = order_stats_replicates("exponential", 20, 2, 999, seed=2)
    ec = empirical_copula_build(x)
    assert ec.N == 999
    for col in range(2):
        assert np.array_equal(np.sort(ec.pseudo_obs[:, col]), np.arange(1, 1000) / 1000.0)
    with pytest.raises(ValueError):
        empirical_copula_build(x[:5])


def test_rank_invariance_under_monotone_maps():
    x = order_stats_replicates("uniform", 30, 3, 500, seed=3)
    a = empirical_copula_build(x)
    b = empirical_copula_build(-np.log1p(-x))
    assert np.array_equal(a.pseudo_obs, b.pseudo_obs)


def test_empirical_cdf_point_and_grid_agree(rng):
    ec = empirical_copula_build(order_stats_replicates("gumbel", 40, 3, 1000, seed=5))
    grid = rng.random((30, 3))
    vec = empirical_cdf_at(ec, grid)
    assert vec.shape == (30,)
    for g, v in zip(grid, vec):
        assert empirical_cdf_at(ec, g) == v
    assert empirical_cdf_at(ec, [1.0, 1.0, 1.0]) == 1.0


def test_mc_floor():
    assert mc_floor(5000, 200) == pytest.approx(math.sqrt(math.log(400) / 10000))


def test_two_draws_raw_joint_cdf():
    # joint CDF of (max, min) of two uniforms: 2uv - v^2 for v <= u
    x = order_stats_replicates("uniform", 2, 2, 20_000, seed=8)
    pts = [(0.9, 0.3), (0.6, 0.5), (0.5, 0.1), (0.8, 0.8), (0.3, 0.2)]
    band = dkw_band(20_000, len(pts))
    for u, v in pts:
        emp = np.mean((x[:, 0] <= u) & (x[:, 1] <= v))
        assert abs(emp - (2 * u * v - v * v)) < band


def test_two_draws_copula():
    ec = empirical_copula_build(order_stats_replicates("pareto_like", 2, 2, 20_000, seed=9))
    pts = [(0.9, 0.3), (0.6, 0.5), (0.5, 0.1), (0.8, 0.8), (0.3, 0.7)]
    # ranks add at most 1/N on top of the DKW radius
    band = dkw_band(20_000, len(pts)) + 2e-4
    for u, v in pts:
        assert abs(empirical_cdf_at(ec, [u, v]) - two_sample_copula(u, v)) < band


def test_two_draws_copula_differs_from_limit():
    # sanity: the n = 2 copula is visibly different from the limit
    assert abs(two_sample_copula(0.6, 0.5) - copula_cdf([0.6, 0.5])) > 0.02


def test_report_structure():
    rows = convergence_report("uniform", [20, 200], 2, 1000, grid_size=50, seed=1)
    assert [r.n for r in rows] == [20, 200]
    assert all(isinstance(r, ConvergenceRow) for r in rows)
    assert rows[0].floor == pytest.approx(mc_floor(1000, 50))
    again = convergence_report("uniform", [20, 200], 2, 1000, grid_size=50, seed=1)
    assert rows == again


def test_report_shows_convergence_with_power():
    # at n = 2 the bias (~0.045) dwarfs the Monte Carlo noise, so the
    # distance must drop by the time n = 500
    rows = convergence_report("exponential", [2, 500], 2, 5000, seed=3)
    assert rows[0].distance > 3 * rows[1].distance
    assert rows[1].distance < 2 * rows[1].floor


def test_report_validation():
    with pytest.raises(ValueError):
        convergence_report("uniform", [50, 50], 2, 1000)
    with pytest.raises(ValueError):
        convergence_report("uniform", [50], 2, 999)


def test_random_grid_is_shared():
    assert np.array_equal(random_grid(3, 10, 4), random_grid(3, 10, 4))
