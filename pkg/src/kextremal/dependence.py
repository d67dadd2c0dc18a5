"""Spearman's rho and Kendall's tau between the first and K-th coordinates.

Only rho has a closed form here.  With ``U_1`` and ``U_K`` the first and last
coordinates of the K-extremal copula,

    E[U_1 U_K] = sum_{j >= K-1} C(2j+1, K-1) / 2^(2j+2)

and ``rho_K = 12 E[U_1 U_K] - 3``.  Kendall's tau is estimated by Monte
Carlo.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import stats

from .sampler import sample_batch

__all__ = [
    "DependenceResult",
    "spearman_series",
    "spearman_exact",
    "spearman_mc",
    "kendall_mc",
    "rank_corr_from_batch",
]

_MEASURES = ("spearman", "kendall")


@dataclass(frozen=True)
class DependenceResult:
    measure: str
    K: int
    value: float
    method: str
    std_error: float = 0.0
    n_samples: int = 0
    seed: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.measure not in _MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}")
        if self.method not in ("exact_series", "monte_carlo"):
            raise ValueError(f"unknown method {self.method!r}")
        if not -1.0 <= self.value <= 1.0:
            raise ValueError(f"dependence value {self.value} outside [-1, 1]")
        if self.method == "exact_series" and self.std_error != 0.0:
            raise ValueError("exact results carry no standard error")


def _log_binom(n, k):
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def spearman_series(K):
    """Sum ``S_K = sum_{j>=K-1} C(2j+1, K-1) / 4^(j+1)``.

    Returns ``(S_K, tail_bound)``.  Summation stops once a term is below
    ``1e-16`` of the partial sum and the term ratio has dropped under 0.9;
    the remaining tail is bounded by a geometric series with that ratio.
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    r = K - 1
    j = K - 1
    if K <= 30:
        term = math.comb(2 * j + 1, r) / 4.0 ** (j + 1)
    else:
        term = math.exp(_log_binom(2 * j + 1, r) - (j + 1) * math.log(4.0))
    terms = [term]

    def ratio(j):
        # C(2j+3, r) / C(2j+1, r) / 4, decreasing to 1/4
        return (2 * j + 3) * (2 * j + 2) / (4.0 * (2 * j + 3 - r) * (2 * j + 2 - r))

    while True:
        rho = ratio(j)
        partial = math.fsum(terms)
        if term < 1e-16 * partial and rho < 0.9:
            tail = term * rho / (1.0 - rho)
            break
        term *= rho
        terms.append(term)
        j += 1
    if tail >= 1e-13:
        raise ArithmeticError(f"series tail bound {tail:.3g} too large")
    return partial, tail


def spearman_exact(K):
    """Exact Spearman's rho between the first and K-th coordinates."""
    s, _ = spearman_series(K)
    return DependenceResult("spearman", int(K), 12.0 * s - 3.0, "exact_series")


def spearman_mc(K, n, seed=0, workers=None):
    """Monte Carlo ``12 E[U_1 U_K] - 3`` from ``n`` copula draws."""
    if n < 100:
        raise ValueError("spearman_mc needs n >= 100")
    batch = sample_batch(K, n, seed, workers=workers)
    prod = batch.rows[:, 0] * batch.rows[:, -1]
    value = 12.0 * prod.mean() - 3.0
    se = 12.0 * prod.std(ddof=1) / math.sqrt(n)
    return DependenceResult("spearman", int(K), float(value), "monte_carlo",
                            float(se), int(n), int(seed))


def kendall_mc(K, n_pairs, seed=0, workers=None):
    """Monte Carlo Kendall's tau from ``n_pairs`` disjoint pairs of draws.

    Pairs are rows ``(2i, 2i+1)`` of one batch; ties count as discordant.
    Each pair is concordant with probability ``p = (1 + tau) / 2``, so the
    estimate is ``2 p_hat - 1`` with binomial standard error.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be positive")
    batch = sample_batch(K, 2 * n_pairs, seed, workers=workers)
    a = batch.rows[0::2]
    b = batch.rows[1::2]
    concordant = (a[:, 0] - b[:, 0]) * (a[:, -1] - b[:, -1]) > 0.0
    p = concordant.mean()
    value = 2.0 * p - 1.0
    se = 2.0 * math.sqrt(p * (1.0 - p) / n_pairs)
    return DependenceResult("kendall", int(K), float(value), "monte_carlo",
                            float(se), int(n_pairs), int(seed))


def _rank_stat(x, y, measure):
    if measure == "spearman":
        return stats.spearmanr(x, y)[0]
    return stats.kendalltau(x, y)[0]


def rank_corr_from_batch(batch, i, j, measure, n_groups=20):
    """Rank correlation between coordinates ``i`` and ``j`` (1-based).

    Spearman uses average ranks; Kendall's tau-b is scipy's O(n log n)
    merge-count.  The standard error is a delete-one-group jackknife over
    ``n_groups`` contiguous blocks of rows.
    """
    if measure not in _MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    rows = batch.rows if hasattr(batch, "rows") else np.asarray(batch)
    if i == j:
        raise ValueError("need two distinct coordinates")
    n = rows.shape[0]
    if n < 2:
        raise ValueError("need at least two rows")
    x = rows[:, i - 1]
    y = rows[:, j - 1]
    value = float(_rank_stat(x, y, measure))
    se = 0.0
    g = min(n_groups, n // 2)
    if g >= 2:
        edges = np.linspace(0, n, g + 1).astype(int)
        keep = np.ones(n, dtype=bool)
        loo = []
        for a, b in zip(edges[:-1], edges[1:]):
            keep[a:b] = False
            loo.append(_rank_stat(x[keep], y[keep], measure))
            keep[a:b] = True
        loo = np.asarray(loo)
        se = float(math.sqrt((g - 1) / g * np.sum((loo - loo.mean()) ** 2)))
    K = getattr(batch, "K", rows.shape[1])
    seed = getattr(batch, "seed", 0)
    return DependenceResult(measure, int(K), max(-1.0, min(1.0, value)), "monte_carlo",
                            se, int(n), int(seed), extra={"pair": (i, j)})
