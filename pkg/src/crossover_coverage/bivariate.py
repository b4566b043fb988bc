"""Bivariate standard-normal probabilities via Owen's T function.

The lower cdf is assembled from the classical reduction to Owen's
one-dimensional integral T(h, a):

    P(X <= h, Y <= k) = (Phi(h) + Phi(k)) / 2 - T(h, a_h) - T(k, a_k) - delta

with a_h = (k - rho*h) / (h * sqrt(1 - rho**2)) (a_k symmetric) and
delta = 1/2 when the quadrant correction applies. T itself comes from
scipy.special.owens_t, accurate to near machine precision, so rectangle
probabilities built here are trustworthy to ~1e-14 and serve as the
independent cross-check for the quadrature route in the coverage module.
"""

from __future__ import annotations

import math

from scipy.special import owens_t

from .errors import DomainError
from .normal import _cdf


def _validate_corr(rho: float) -> None:
    if not (math.isfinite(rho) and -1.0 <= rho <= 1.0):
        raise DomainError("rho must lie in [-1, 1]")


def bvn_cdf(h: float, k: float, rho: float) -> float:
    """P(X <= h, Y <= k) for standard bivariate normal with correlation rho.

    Accepts infinite bounds; rejects NaN. Degenerate correlations +/-1 are
    handled exactly.
    """
    _validate_corr(rho)
    if math.isnan(h) or math.isnan(k):
        raise DomainError("bounds must not be NaN")
    if h == -math.inf or k == -math.inf:
        return 0.0
    if h == math.inf:
        return _cdf(k)
    if k == math.inf:
        return _cdf(h)
    if rho == 1.0:
        return _cdf(min(h, k))
    if rho == -1.0:
        return max(0.0, _cdf(h) - _cdf(-k))
    if h == 0.0 and k == 0.0:
        return 0.25 + math.asin(rho) / (2.0 * math.pi)

    denom = math.sqrt(1.0 - rho * rho)
    # T(0, +/-inf) = +/-1/4, the h -> 0+ limit of the general term.
    if h == 0.0:
        t_h = 0.25 if k > 0.0 else -0.25
    else:
        t_h = float(owens_t(h, (k - rho * h) / (h * denom)))
    if k == 0.0:
        t_k = 0.25 if h > 0.0 else -0.25
    else:
        t_k = float(owens_t(k, (h - rho * k) / (k * denom)))
    delta = 0.5 if (h * k < 0.0 or (h * k == 0.0 and h + k < 0.0)) else 0.0
    value = 0.5 * (_cdf(h) + _cdf(k)) - t_h - t_k - delta
    return min(1.0, max(0.0, value))


def bvn_rectangle(x_lo: float, x_hi: float, y_lo: float, y_hi: float,
                  rho: float) -> float:
    """P(x_lo <= X <= x_hi, y_lo <= Y <= y_hi) for the same distribution."""
    if not (x_lo <= x_hi and y_lo <= y_hi):
        raise DomainError("rectangle bounds must be ordered")
    value = (bvn_cdf(x_hi, y_hi, rho) - bvn_cdf(x_lo, y_hi, rho)
             - bvn_cdf(x_hi, y_lo, rho) + bvn_cdf(x_lo, y_lo, rho))
    return min(1.0, max(0.0, value))
