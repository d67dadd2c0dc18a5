"""GEV marginals of the K largest order statistics.

The m-th largest limiting order statistic has distribution function

    G_m(z) = exp(-L(z)) * sum_{j<m} L(z)^j / j!

where ``L`` is the decreasing auxiliary function

    L(z) = [1 + xi (z - mu) / sigma]^(-1/xi)     (xi != 0)
    L(z) = exp(-(z - mu) / sigma)                 (xi == 0)

on the support ``xi (z - mu) / sigma > -1``.  ``G_m(z)`` is therefore
``partial_exp_sum(m, L(z))`` and its quantile is ``L^{-1}(t_of_u(m, u))``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .psi import _check_m, partial_exp_sum, t_of_u

__all__ = [
    "GevParams",
    "lambda_fn",
    "lambda_deriv",
    "lambda_inv",
    "gev_cdf",
    "gev_pdf",
    "gev_quantile",
    "omega_support",
]

# below this |xi| the Gumbel branch is used
XI_ZERO = 1e-12


@dataclass(frozen=True)
class GevParams:
    """Location ``mu``, scale ``sigma > 0`` and shape ``xi`` of a GEV law."""

    mu: float = 0.0
    sigma: float = 1.0
    xi: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")

    @property
    def is_gumbel(self):
        return abs(self.xi) <= XI_ZERO

    @property
    def kind(self):
        """``"I"`` (xi = 0), ``"II"`` (xi > 0) or ``"III"`` (xi < 0)."""
        if self.is_gumbel:
            return "I"
        return "II" if self.xi > 0 else "III"

    @property
    def endpoint(self):
        """Finite support endpoint ``mu - sigma / xi``, or ``None`` for Gumbel."""
        if self.is_gumbel:
            return None
        return self.mu - self.sigma / self.xi


def _log_lambda(params, z):
    """log L(z), NaN outside the open support."""
    s = (np.asarray(z, dtype=float) - params.mu) / params.sigma
    if params.is_gumbel:
        return -s
    xs = params.xi * s
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -np.log1p(xs) / params.xi
    return np.where(xs > -1.0, out, np.nan)


def _scalar_or_array(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def lambda_fn(params, z):
    """Evaluate the auxiliary function ``L(z)``.

    Raises
    ------
    DomainError
        If any ``z`` is outside the open support, including the endpoint
        ``mu - sigma / xi`` itself.
    """
    loglam = _log_lambda(params, z)
    if np.any(np.isnan(loglam)):
        raise DomainError(
            f"z outside the support of the {params.kind} family "
            f"(endpoint {params.endpoint!r})"
        )
    return _scalar_or_array(np.exp(loglam), z)


def lambda_deriv(params, z):
    """``dL/dz = -L(z)^(1 + xi) / sigma``; strictly negative on the support."""
    loglam = _log_lambda(params, z)
    if np.any(np.isnan(loglam)):
        raise DomainError("z outside the support")
    xi = 0.0 if params.is_gumbel else params.xi
    return _scalar_or_array(-np.exp((1.0 + xi) * loglam) / params.sigma, z)


def lambda_inv(params, t):
    """Closed-form inverse of ``L`` for ``t > 0``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        logt = np.log(t)
    if params.is_gumbel:
        z = params.mu - params.sigma * logt
    else:
        z = params.mu + params.sigma * np.expm1(-params.xi * logt) / params.xi
    return _scalar_or_array(z, t)


def _outside_value(params):
    """CDF value on the complement of the support: 0 below, 1 above."""
    return 0.0 if params.xi > 0 else 1.0


def gev_cdf(params, m, z):
    """Distribution function ``G_m(z)`` of the m-th largest limit variable."""
    m = _check_m(m)
    z = np.asarray(z, dtype=float)
    loglam = _log_lambda(params, z)
    inside = ~np.isnan(loglam)
    out = np.full(z.shape, _outside_value(params))
    if np.any(inside):
        lam = np.exp(loglam[inside])
        out[inside] = partial_exp_sum(m, lam)
    return _scalar_or_array(out, z)


def gev_pdf(params, m, z):
    """Density ``g_m(z) = exp(-L) |L'| L^(m-1) / (m-1)!``, zero off the support.

    The modulus on ``L'`` keeps the density nonnegative.
    """
    m = _check_m(m)
    z = np.asarray(z, dtype=float)
    loglam = _log_lambda(params, z)
    inside = ~np.isnan(loglam)
    out = np.zeros(z.shape)
    if np.any(inside):
        ll = loglam[inside]
        xi = 0.0 if params.is_gumbel else params.xi
        with np.errstate(over="ignore", invalid="ignore"):
            logpdf = -np.exp(ll) + (m + xi) * ll - math.lgamma(m) - math.log(params.sigma)
        out[inside] = np.where(np.isnan(logpdf), 0.0, np.exp(logpdf))
    return _scalar_or_array(out, z)


def gev_quantile(params, m, u):
    """Quantile ``G_m^{-1}(u)`` for ``u`` in the open unit interval.

    Raises
    ------
    ValueError
        If ``u`` is not strictly between 0 and 1.
    """
    t = t_of_u(m, u)
    return lambda_inv(params, t)


def omega_support(params, zvec):
    """True iff ``zvec`` is strictly decreasing and inside the open support."""
    z = np.asarray(zvec, dtype=float)
    if z.ndim != 1 or z.size < 1:
        raise ValueError("zvec must be a non-empty vector")
    if np.any(np.diff(z) >= 0):
        return False
    ep = params.endpoint
    if ep is None:
        return bool(np.all(np.isfinite(z)))
    if params.xi > 0:
        return bool(z[-1] > ep)
    return bool(z[0] < ep)
