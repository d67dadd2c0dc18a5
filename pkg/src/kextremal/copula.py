"""Joint law of the K largest limiting maxima and its copula.

The copula is parameter free: every (mu, sigma, xi) gives the same
K-extremal copula.  All copula evaluations run through the chain
``t_k = -log psi_k(u_k)``; the support is where this chain is strictly
increasing, i.e. ``u_1 > psi_2(u_2) > ... > psi_K(u_K)``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .gev import _log_lambda, omega_support
from .jpoly import j_eval
from .psi import partial_exp_sum, t_of_u

__all__ = [
    "SupportFlag",
    "mgev_pdf",
    "mgev_cdf",
    "copula_density",
    "copula_cdf",
    "support_check",
    "bivariate_margin_cdf",
    "r_chain",
]


def mgev_pdf(params, zvec):
    """Joint density of the K largest limiting maxima at ``zvec``.

    Zero off the ordered support; otherwise
    ``exp(-L(z_K)) * prod_j |L'(z_j)|``.
    """
    z = np.asarray(zvec, dtype=float)
    if not omega_support(params, z):
        return 0.0
    ll = _log_lambda(params, z)
    xi = 0.0 if params.is_gumbel else params.xi
    log_abs_deriv = (1.0 + xi) * ll - math.log(params.sigma)
    return float(math.exp(-math.exp(ll[-1]) + math.fsum(log_abs_deriv)))


def mgev_cdf(params, zvec):
    """Joint distribution function of the K largest limiting maxima.

    Uses the running minima of ``zvec``; coordinates above a finite upper
    endpoint contribute ``L = 0`` and a running minimum at or below a finite
    lower endpoint makes the probability zero.
    """
    z = np.asarray(zvec, dtype=float)
    if z.ndim != 1 or z.size < 1:
        raise ValueError("zvec must be a non-empty vector")
    mins = np.minimum.accumulate(z)
    ll = _log_lambda(params, mins)
    outside = np.isnan(ll)
    if np.any(outside):
        if params.xi > 0:
            return 0.0
        ll = np.where(outside, -np.inf, ll)
    lam = np.exp(ll)
    if np.isinf(lam[-1]):
        return 0.0
    return float(math.exp(-lam[-1]) * j_eval(lam))


def _as_points(uvec):
    u = np.asarray(uvec, dtype=float)
    if u.ndim == 0:
        raise ValueError("expected a point or an array of points")
    return u


def _t_columns(u, interior):
    """Chain ``t_k = -log psi_k(u_k)`` for each coordinate, columnwise."""
    t = np.empty_like(u)
    for k in range(u.shape[-1]):
        col = u[..., k]
        if interior:
            t[..., k] = t_of_u(k + 1, col)
        else:
            tk = np.zeros_like(col)
            open_ = (col > 0.0) & (col < 1.0)
            if np.any(open_):
                tk[open_] = t_of_u(k + 1, col[open_])
            tk[col == 0.0] = np.inf
            t[..., k] = tk
    return t


def _check_interior(u):
    if not np.all((u > 0.0) & (u < 1.0)):
        raise ValueError("density and support checks need interior points of (0, 1)^K")


@dataclass(frozen=True)
class SupportFlag:
    """Whether a point lies in the copula support, with its psi chain."""

    in_support: bool
    psi_chain: tuple
    t_chain: tuple


def support_check(uvec):
    """Evaluate the psi chain of an interior point and test strict decrease."""
    u = _as_points(uvec)
    if u.ndim != 1:
        raise ValueError("support_check takes a single point")
    _check_interior(u)
    t = _t_columns(u, interior=True)
    chain = np.exp(-t)
    chain[0] = u[0]
    ok = bool(np.all(np.diff(t) > 0.0))
    return SupportFlag(ok, tuple(chain.tolist()), tuple(t.tolist()))


def copula_density(uvec):
    """Density of the K-extremal copula.

    Parameters
    ----------
    uvec : array_like, shape (K,) or (n, K)
        Interior points of the unit cube.

    Returns
    -------
    float or ndarray
        ``c_K(u)``; zero where ``u_1 > psi_2(u_2) > ... > psi_K(u_K)`` fails.

    Notes
    -----
    With ``t_j = -log psi_j(u_j)``,

        log c_K = sum_{j<K} [t_j - (j-1) log t_j + log (j-1)!]
                  + log (K-1)! - (K-1) log t_K.
    """
    u = _as_points(uvec)
    _check_interior(u)
    K = u.shape[-1]
    t = _t_columns(u, interior=True)
    logt = np.log(t)
    logc = np.full(u.shape[:-1], math.lgamma(K)) - (K - 1) * logt[..., K - 1]
    for j in range(1, K):
        logc = logc + t[..., j - 1] - (j - 1) * logt[..., j - 1] + math.lgamma(j)
    if K > 1:
        inside = np.all(np.diff(t, axis=-1) > 0.0, axis=-1)
    else:
        inside = np.ones(u.shape[:-1], dtype=bool)
    out = np.where(inside, np.exp(logc), 0.0)
    return float(out) if u.ndim == 1 else out


def _cdf_from_t(t):
    if np.isinf(t).any():
        return 0.0
    x = np.maximum.accumulate(t)
    return float(math.exp(-x[-1]) * j_eval(x))


def copula_cdf(uvec):
    """Distribution function ``C_K(u)`` on the closed unit cube.

    The running minimum of the psi chain is formed in t-space (running
    maximum of ``t``), then ``C_K = exp(-x_K) J_K(x_1, ..., x_K)``.  A zero
    coordinate gives 0; a coordinate equal to 1 has ``t = 0`` and so leaves
    the running extreme unchanged, which is exactly margin reduction.
    """
    u = _as_points(uvec)
    if not np.all((u >= 0.0) & (u <= 1.0)):
        raise ValueError("copula arguments must lie in [0, 1]")
    t = _t_columns(u, interior=False)
    if u.ndim == 1:
        return _cdf_from_t(t)
    flat = t.reshape(-1, u.shape[-1])
    return np.array([_cdf_from_t(row) for row in flat]).reshape(u.shape[:-1])


def r_chain(uvec):
    """Collapse a point onto the ordered part of the cube.

    Returns ``u'`` with ``u'_k = psi_k^{-1}(min_{l<=k} psi_l(u_l))``.  The
    copula CDF is unchanged by this map.
    """
    u = _as_points(uvec)
    t = _t_columns(u, interior=False)
    x = np.maximum.accumulate(t, axis=-1)
    out = np.empty_like(u)
    for k in range(u.shape[-1]):
        out[..., k] = partial_exp_sum(k + 1, x[..., k])
    return out


def bivariate_margin_cdf(l, m, u, v, K=None):
    """CDF of the pair ``(U_l, U_m)``, ``l < m``, of the K-extremal copula.

    Slots after ``m`` do not affect the result, so ``K`` defaults to ``m``.
    """
    if not 1 <= l < m:
        raise ValueError(f"need 1 <= l < m, got l={l}, m={m}")
    K = m if K is None else K
    if K < m:
        raise ValueError("K must be at least m")
    point = np.ones(K)
    point[l - 1] = u
    point[m - 1] = v
    return copula_cdf(point)
