"""The parameter-free transforms psi_m on (0, 1).

For every integer ``m >= 1`` the map ``psi_m`` is the increasing function
defined implicitly by

    u = v * sum_{j<m} (-1)^j (log v)^j / j!,      v = psi_m(u).

Writing ``t = -log v`` turns the right hand side into the partial exponential
sum ``Q(m, t) = exp(-t) * sum_{j<m} t^j / j!``, i.e. the Poisson probability
``P(N_t < m)`` or, equivalently, the regularized upper incomplete gamma
function at integer shape.  Everything here works in terms of ``t``; ``v`` is
only materialized at the surface.

All functions accept scalars or numpy arrays for the probability argument;
the margin index ``m`` is always a scalar.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import gammaln, ndtri

from .errors import NumericFailure

__all__ = [
    "PsiValue",
    "partial_exp_sum",
    "partial_exp_tail",
    "poisson_point_mass",
    "t_of_u",
    "psi",
    "psi_inv",
    "psi_inv_from_t",
    "psi_deriv",
]

_LOG_SPACE_T = 700.0
# below this t the partial sum is formed as one minus its tail
_NEAR_ONE_T = 0.25
_MAX_ITER = 200
_RESIDUAL_TOL = 1e-12


def _check_m(m):
    if int(m) != m or m < 1:
        raise ValueError(f"margin index must be an integer >= 1, got {m!r}")
    return int(m)


def _check_open_unit(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError(f"{name} must lie in the open interval (0, 1)")
    return arr


def _wrap(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def partial_exp_sum(m, t):
    """Return ``exp(-t) * sum_{j<m} t^j / j!`` for ``t >= 0``.

    Terms are accumulated from ``exp(-t)`` upward by the ratio ``t / j`` so
    nothing overflows for ``t <= 700``; beyond that the sum is evaluated in
    log space.  Near ``t = 0`` the value is ``1 - tail`` with the small tail
    summed directly, which keeps the result monotone as it approaches 1.
    """
    m = _check_m(m)
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    flat_t = t.ravel()
    flat = out.ravel()

    near_one = flat_t < _NEAR_ONE_T if m > 1 else np.zeros(flat_t.shape, dtype=bool)
    if np.any(near_one):
        flat[near_one] = 1.0 - partial_exp_tail(m, flat_t[near_one])
    small = (flat_t <= _LOG_SPACE_T) & ~near_one
    if np.any(small):
        ts = flat_t[small]
        term = np.exp(-ts)
        acc = term.copy()
        for j in range(1, m):
            term = term * ts / j
            acc += term
        flat[small] = acc
    big = (flat_t > _LOG_SPACE_T)
    if np.any(big):
        tb = flat_t[big]
        j = np.arange(m, dtype=float)
        logt = np.where(np.isinf(tb), np.inf, np.log(tb))
        with np.errstate(invalid="ignore"):
            logs = -tb[:, None] + j[None, :] * logt[:, None] - gammaln(j + 1.0)[None, :]
        top = np.max(logs, axis=1)
        with np.errstate(invalid="ignore"):
            val = top + np.log(np.sum(np.exp(logs - top[:, None]), axis=1))
        flat[big] = np.where(np.isfinite(tb), np.exp(val), 0.0)
    return _wrap(out.reshape(t.shape), t)


def partial_exp_tail(m, t):
    """Return ``1 - partial_exp_sum(m, t)`` without cancellation.

    Summed directly as ``exp(-t) * sum_{j>=m} t^j / j!`` while ``t < m``,
    where the tail is small and the complement would cancel.  For larger
    ``t`` the tail is at least about one half and the complement is accurate.
    """
    m = _check_m(m)
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    flat_t = t.ravel()
    flat = out.ravel()

    direct = flat_t < m
    if np.any(direct):
        ts = flat_t[direct]
        with np.errstate(divide="ignore"):
            term = np.exp(-ts + m * np.log(ts) - math.lgamma(m + 1.0))
        acc = term.copy()
        j = m
        while True:
            j += 1
            term = term * ts / j
            acc += term
            if np.all(term <= 1e-17 * acc) or j > 100_000:
                break
        flat[direct] = acc
    far = ~direct
    if np.any(far):
        flat[far] = 1.0 - partial_exp_sum(m, flat_t[far])
    return _wrap(out.reshape(t.shape), t)


def poisson_point_mass(m, t):
    """``exp(-t) t^(m-1) / (m-1)!``, minus the derivative of the partial sum."""
    m = _check_m(m)
    t = np.asarray(t, dtype=float)
    if m == 1:
        return _wrap(np.exp(-t), t)
    with np.errstate(divide="ignore"):
        logv = -t + (m - 1) * np.log(t) - math.lgamma(m)
    return _wrap(np.exp(logv), t)


def _initial_guess(m, u):
    # Wilson-Hilferty approximation to the (1-u) quantile of Gamma(m, 1).
    z = ndtri(1.0 - u)
    c = 1.0 / (9.0 * m)
    base = 1.0 - c + z * math.sqrt(c)
    return m * np.maximum(base, 1e-3) ** 3


def t_of_u(m, u):
    """Solve ``partial_exp_sum(m, t) = u`` for ``t >= 0``.

    Safeguarded Newton iteration on a monotone bracket.  In the upper half of
    the unit interval the complementary equation
    ``partial_exp_tail(m, t) = 1 - u`` is solved instead so that ``t`` keeps
    full relative accuracy as ``u -> 1``.

    Parameters
    ----------
    m : int
        Margin index, ``m >= 1``.
    u : float or array_like
        Probabilities in the open unit interval.

    Returns
    -------
    float or ndarray
        ``t = -log psi_m(u)``, same shape as ``u``.

    Raises
    ------
    ValueError
        If any ``u`` is outside ``(0, 1)``.
    NumericFailure
        If the iteration cap is reached without meeting the residual bound.
    """
    m = _check_m(m)
    u_arr = _check_open_unit(u, "u")
    if m == 1:
        return _wrap(-np.log(u_arr), u)
    if u_arr.ndim == 0:
        return _t_of_u_scalar(m, float(u_arr))

    flat_u = u_arr.ravel().copy()
    upper = flat_u > 0.5
    target = np.where(upper, 1.0 - flat_u, flat_u)

    lo = np.zeros_like(flat_u)
    hi = np.full_like(flat_u, m + 10.0 * math.sqrt(m) + 50.0)
    for _ in range(64):
        v_hi = _branch_value(m, hi, upper)
        grow = np.where(upper, v_hi < target, v_hi > target)
        if not np.any(grow):
            break
        lo[grow] = hi[grow]
        hi[grow] *= 2.0

    t = np.clip(_initial_guess(m, flat_u), lo, hi)
    t = np.where((t <= lo) | (t >= hi), 0.5 * (lo + hi), t)
    log_target = np.log(target)
    active = np.ones(flat_u.shape, dtype=bool)
    for _ in range(_MAX_ITER):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        ti = t[idx]
        up = upper[idx]
        val = _branch_value(m, ti, up)
        # Newton on the log of each branch: both are log-concave in t.
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.log(val) - log_target[idx]
            g = np.where(up, -g, g)
            step = g * val / poisson_point_mass(m, ti)
        pos = g > 0.0
        lo[idx] = np.where(pos, ti, lo[idx])
        hi[idx] = np.where(pos, hi[idx], ti)
        t_new = ti + step
        bad = ~np.isfinite(t_new) | (t_new < lo[idx]) | (t_new > hi[idx])
        t_new = np.where(bad, 0.5 * (lo[idx] + hi[idx]), t_new)
        t_new = np.where(g == 0.0, ti, t_new)
        t[idx] = t_new
        done = (
            (g == 0.0)
            | (~bad & (np.abs(step) <= 1e-14 * np.maximum(ti, 1e-300)))
            | (hi[idx] - lo[idx] <= 4e-14 * np.maximum(1.0, ti))
        )
        active[idx[done]] = False
    else:
        idx = np.nonzero(active)[0]
        if idx.size:
            raise NumericFailure(
                f"psi_{m}: root finder hit the iteration cap",
                bracket=(lo[idx].copy(), hi[idx].copy()),
            )

    res = np.abs(partial_exp_sum(m, t) - flat_u)
    if np.any(res > _RESIDUAL_TOL):
        k = int(np.argmax(res))
        raise NumericFailure(
            f"psi_{m}: residual {res[k]:.3g} at u={flat_u[k]!r} exceeds tolerance",
            bracket=(lo[k], hi[k]),
        )
    return _wrap(t.reshape(u_arr.shape), u)


def _q_scalar(m, t):
    if t < _NEAR_ONE_T:
        return 1.0 - _p_scalar(m, t)
    if t > _LOG_SPACE_T:
        return float(partial_exp_sum(m, t))
    term = math.exp(-t)
    acc = term
    for j in range(1, m):
        term *= t / j
        acc += term
    return acc


def _p_scalar(m, t):
    if t >= m:
        return 1.0 - _q_scalar(m, t)
    if t == 0.0:
        return 0.0
    term = math.exp(-t + m * math.log(t) - math.lgamma(m + 1.0))
    acc = term
    j = m
    while term > 1e-17 * acc:
        j += 1
        term *= t / j
        acc += term
    return acc


def _t_of_u_scalar(m, u):
    """Scalar twin of the vectorized solver in plain floats."""
    upper = u > 0.5
    target = 1.0 - u if upper else u
    value = (lambda t: _p_scalar(m, t)) if upper else (lambda t: _q_scalar(m, t))
    lo, hi = 0.0, m + 10.0 * math.sqrt(m) + 50.0
    for _ in range(64):
        v_hi = value(hi)
        if (v_hi < target) if upper else (v_hi > target):
            lo, hi = hi, 2.0 * hi
        else:
            break
    t = float(_initial_guess(m, u))
    if not lo < t < hi:
        t = 0.5 * (lo + hi)
    log_target = math.log(target)
    for _ in range(_MAX_ITER):
        val = value(t)
        g = math.log(val) - log_target if val > 0.0 else -math.inf
        if upper:
            g = -g
        if g == 0.0:
            break
        mass = float(poisson_point_mass(m, t))
        step = g * val / mass if mass > 0.0 else math.nan
        if g > 0.0:
            lo = t
        else:
            hi = t
        t_new = t + step
        bad = not (lo <= t_new <= hi)
        if bad:
            t_new = 0.5 * (lo + hi)
        converged = (not bad and abs(step) <= 1e-14 * max(t, 1e-300)) or (
            hi - lo <= 4e-14 * max(1.0, t)
        )
        t = t_new
        if converged:
            break
    else:
        raise NumericFailure(f"psi_{m}: root finder hit the iteration cap", bracket=(lo, hi))
    res = abs(_q_scalar(m, t) - u)
    if res > _RESIDUAL_TOL:
        raise NumericFailure(
            f"psi_{m}: residual {res:.3g} at u={u!r} exceeds tolerance", bracket=(lo, hi)
        )
    return t


def _branch_value(m, t, upper):
    out = np.empty_like(t)
    if np.any(upper):
        out[upper] = partial_exp_tail(m, t[upper])
    if np.any(~upper):
        out[~upper] = partial_exp_sum(m, t[~upper])
    return out


@dataclass(frozen=True)
class PsiValue:
    """Result of evaluating ``psi_m`` at ``u``: ``v = psi_m(u)`` and ``t = -log v``."""

    m: int
    u: object
    v: object
    t: object


def psi(m, u):
    """Evaluate ``psi_m(u)``.

    >>> round(psi(2, 2 * math.exp(-1)).t, 12)
    1.0
    """
    t = t_of_u(m, u)
    v = np.exp(-np.asarray(t))
    if m == 1:
        v = np.asarray(u, dtype=float)
    return PsiValue(m=int(m), u=u, v=_wrap(v, u), t=t)


def psi_inv_from_t(m, t):
    """``psi_m^{-1}(exp(-t))`` for ``t >= 0``; the partial exponential sum."""
    return partial_exp_sum(m, t)


def psi_inv(m, v):
    """Explicit inverse ``u = v * sum_{j<m} (-log v)^j / j!``."""
    m = _check_m(m)
    v_arr = _check_open_unit(v, "v")
    if m == 1:
        return _wrap(v_arr.copy(), v)
    return _wrap(np.asarray(partial_exp_sum(m, -np.log(v_arr))), v)


def psi_deriv(m, u):
    """Derivative ``d psi_m / du = (m-1)! / t^(m-1)`` with ``t = -log psi_m(u)``."""
    m = _check_m(m)
    t = np.asarray(t_of_u(m, u))
    if m == 1:
        return _wrap(np.ones_like(t), u)
    return _wrap(np.exp(math.lgamma(m) - (m - 1) * np.log(t)), u)
