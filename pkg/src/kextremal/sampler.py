"""Exact sampling from the K-extremal copula by sequential conditioning.

Given the first ``m - 1`` coordinates, ``U_m`` has conditional CDF
``psi_m(u_m) / psi_{m-1}(u_{m-1})``.  Inverting it with a uniform ``q``
gives ``psi_m(u_m) = q * psi_{m-1}(u_{m-1})``, so the chain
``v_m = psi_m(u_m)`` is just a running product of uniforms and each
coordinate follows from the explicit inverse ``u_m = psi_m^{-1}(v_m)``.
No root finding is involved.  The chain is carried as ``log v`` so that
large ``K`` does not underflow.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .psi import partial_exp_sum, t_of_u

__all__ = [
    "BLOCK_SIZE",
    "SampleBatch",
    "substream",
    "conditional_cdf",
    "conditional_quantile",
    "sample_one",
    "sample_batch",
]

BLOCK_SIZE = 16384
_SUPPORT_TOL = 1e-12


def substream(seed, block_index):
    """Independent generator for one block of rows.

    Streams are derived with ``numpy.random.SeedSequence`` using the block
    index as spawn key, so the rows of a batch do not depend on how blocks
    are distributed over workers.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(block_index),))
    return np.random.Generator(np.random.PCG64(ss))


def _open_uniforms(rng, size):
    """Uniform draws on the open interval; exact zeros are redrawn."""
    x = rng.random(size)
    bad = x == 0.0
    while np.any(bad):
        x[bad] = rng.random(int(bad.sum()))
        bad = x == 0.0
    return x


def conditional_cdf(m, u_m, u_prev):
    """``P(U_m <= u_m | U_1..U_{m-1})`` = ``psi_m(u_m) / psi_{m-1}(u_prev)``.

    Raises
    ------
    ValueError
        If ``m < 2``, an argument is outside (0, 1) or the pair is off the
        support side (ratio above 1 by more than 1e-12).
    """
    if m < 2:
        raise ValueError("conditional laws start at m = 2")
    t_m = np.asarray(t_of_u(m, u_m))
    t_prev = np.asarray(t_of_u(m - 1, u_prev))
    log_ratio = t_prev - t_m
    if np.any(log_ratio > np.log1p(_SUPPORT_TOL)):
        raise ValueError("psi_m(u_m) exceeds psi_{m-1}(u_prev): point is off the support")
    out = np.minimum(np.exp(log_ratio), 1.0)
    return float(out) if np.ndim(u_m) == 0 and np.ndim(u_prev) == 0 else out


def conditional_quantile(m, q, v_prev):
    """Draw coordinate ``m`` from its conditional law.

    Parameters
    ----------
    m : int
        Coordinate index, ``m >= 2``.
    q : float
        Uniform variate in (0, 1).
    v_prev : float
        Chain value ``psi_{m-1}(u_{m-1})`` in (0, 1).

    Returns
    -------
    (u_m, v_m) : tuple of float
        ``v_m = q * v_prev`` and ``u_m = psi_m^{-1}(v_m)``.
    """
    if m < 2:
        raise ValueError("conditional laws start at m = 2")
    if not (0.0 < q < 1.0 and 0.0 < v_prev < 1.0):
        raise ValueError("q and v_prev must lie in (0, 1)")
    log_v = np.log(q) + np.log(v_prev)
    return float(partial_exp_sum(m, -log_v)), float(np.exp(log_v))


def _rows_from_uniforms(x):
    """Map a matrix of open uniforms (u_1, q_2, ..., q_K) to copula rows."""
    log_v = np.cumsum(np.log(x), axis=1)
    rows = np.empty_like(x)
    rows[:, 0] = x[:, 0]
    for k in range(1, x.shape[1]):
        rows[:, k] = partial_exp_sum(k + 1, -log_v[:, k])
    return rows, log_v


def sample_one(K, rng):
    """Draw a single row and its psi chain using ``rng``.

    Consumes exactly the same draws as one row of :func:`sample_batch`.
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    x = _open_uniforms(rng, (1, K))
    rows, log_v = _rows_from_uniforms(x)
    return rows[0], np.exp(log_v[0])


@dataclass(frozen=True)
class SampleBatch:
    """``n`` rows from the K-extremal copula plus the seed that made them.

    ``chain_rows[i, m] = psi_{m+1}(rows[i, m])``; ``log_chain`` holds the
    same values in log space and stays finite when the chain underflows.
    """

    K: int
    n: int
    seed: int
    rows: np.ndarray
    chain_rows: np.ndarray
    log_chain: np.ndarray


def _block(K, seed, index, size):
    x = _open_uniforms(substream(seed, index), (size, K))
    return _rows_from_uniforms(x)


def sample_batch(K, n, seed=0, workers=None):
    """Draw ``n`` rows from the K-extremal copula.

    Rows are produced in blocks of :data:`BLOCK_SIZE`, each from its own
    substream, so the output is identical for any ``workers``.
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    if n < 1:
        raise ValueError("n must be positive")
    sizes = [min(BLOCK_SIZE, n - start) for start in range(0, n, BLOCK_SIZE)]
    jobs = [(K, seed, i, size) for i, size in enumerate(sizes)]
    if workers and workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _block(*a), jobs))
    else:
        parts = [_block(*a) for a in jobs]
    rows = np.concatenate([p[0] for p in parts])
    log_v = np.concatenate([p[1] for p in parts])
    return SampleBatch(K=K, n=n, seed=int(seed), rows=rows,
                       chain_rows=np.exp(log_v), log_chain=log_v)
