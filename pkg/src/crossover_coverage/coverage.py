"""Exact coverage analytics for the two-stage crossover confidence interval.

Everything here lives on the scale of three standardized statistics:

* the pretest statistic, distributed N(gamma, 1) where gamma is the
  scaled differential carryover;
* the pooled-branch pivot, distributed N(-3*gamma/sqrt(2), 1) and
  independent of the pretest statistic;
* the robust-branch pivot, standard normal, with correlation
  3/sqrt(11) against the pretest statistic.

The coverage probability of the two-stage interval is then

    P(accept) * P(pooled pivot inside)  +  P(robust pivot inside, reject)

and depends on the trial only through gamma. The joint reject-branch term
is evaluated two independent ways on every call: a bivariate-normal
rectangle assembled from Owen's T (verification route) and an adaptive
Gauss-Kronrod quadrature of the conditional form (authoritative route).
Disagreement beyond tolerance raises instead of returning a bad number.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.integrate import quad

from .bivariate import bvn_rectangle
from .errors import DomainError, QuadratureError, RouteDisagreementError
from .normal import _cdf, _pdf, std_normal_quantile

#: Correlation between the robust-branch pivot and the pretest statistic.
PIVOT_PRETEST_CORR = 3.0 / math.sqrt(11.0)

#: Conditional variance of the pretest statistic given the robust pivot.
_COND_VAR = 2.0 / 11.0
_COND_SLOPE = 3.0 / math.sqrt(11.0)
_INV_COND_SD = math.sqrt(11.0 / 2.0)

#: Mean shift of the pooled-branch pivot per unit of gamma.
_POOLED_SHIFT = 3.0 / math.sqrt(2.0)

#: Absolute tolerance demanded of the quadrature route.
QUAD_ABS_TOL = 1e-10
_QUAD_REQUEST = 1e-12

#: Maximum tolerated gap between the two evaluation routes.
ROUTE_AGREEMENT_TOL = 5e-9

_EPS = float(np.finfo(float).eps)


def _validate_level(name: str, a: float) -> None:
    if not (isinstance(a, (int, float)) and math.isfinite(a) and 0.0 < a < 1.0):
        raise DomainError(f"{name} must lie strictly inside (0, 1), got {a!r}")


def _validate_gamma(gamma: float) -> None:
    if not (isinstance(gamma, (int, float)) and math.isfinite(gamma)):
        raise DomainError(f"gamma must be finite, got {gamma!r}")


@dataclass(frozen=True)
class CoverageQuery:
    """Point at which to evaluate the coverage probability."""

    gamma: float
    alpha1: float
    alpha: float

    def __post_init__(self):
        _validate_gamma(self.gamma)
        _validate_level("alpha1", self.alpha1)
        _validate_level("alpha", self.alpha)


class Method(enum.Enum):
    """How a coverage value was obtained."""

    BIVARIATE_CDF = "bivariate_cdf"
    CONDITIONAL_QUADRATURE = "conditional_quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class CoverageResult:
    """A coverage probability with its provenance and error bound.

    ``err_bound`` is a heuristic (quadrature error estimate plus ulp-level
    slack per distribution-function call), not a rigorous enclosure.
    """

    value: float
    method: Method
    err_bound: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DomainError("coverage value must lie in [0, 1]")
        if self.err_bound < 0.0:
            raise DomainError("err_bound must be nonnegative")


@dataclass(frozen=True)
class MinCoverageReport:
    """Location and value of the coverage minimum over nonnegative gamma."""

    gamma_star: float
    min_coverage: float
    alpha1: float
    alpha: float


@dataclass(frozen=True)
class PivotJoint:
    """Joint law of (robust-branch pivot, pretest statistic).

    The pivot is standard normal, the pretest statistic is N(gamma, 1),
    and their correlation is 3/sqrt(11) regardless of the trial design.
    """

    gamma: float

    mean_pivot: float = 0.0
    var_pivot: float = 1.0
    var_pretest: float = 1.0
    corr: float = PIVOT_PRETEST_CORR

    @property
    def mean_pretest(self) -> float:
        return self.gamma


class CurvePoint(NamedTuple):
    gamma: float
    coverage: float


class EfficiencyComparison(NamedTuple):
    """Variances of the two candidate estimators and the verdict."""

    var_robust: float
    var_randomized: float
    crossover_preferred: bool


def _clip_prob(value: float) -> float:
    return min(1.0, max(0.0, value))


def _accept_prob(gamma: float, c1: float) -> float:
    return _cdf(c1 - gamma) - _cdf(-c1 - gamma)


def _pooled_inside_prob(gamma: float, c: float) -> float:
    shift = _POOLED_SHIFT * gamma
    return _cdf(c + shift) - _cdf(-c + shift)


def pretest_accept_prob(gamma: float, alpha1: float) -> float:
    """Probability the carryover pretest accepts, as a function of gamma."""
    _validate_gamma(gamma)
    _validate_level("alpha1", alpha1)
    return _clip_prob(_accept_prob(gamma, std_normal_quantile(alpha1)))


def pooled_cover_prob(gamma: float, alpha: float) -> float:
    """Probability the pooled-branch interval covers the true difference.

    The pooled estimator is biased by the carryover, so its pivot sits at
    mean -3*gamma/sqrt(2); this probability collapses quickly in |gamma|.
    """
    _validate_gamma(gamma)
    _validate_level("alpha", alpha)
    return _clip_prob(_pooled_inside_prob(gamma, std_normal_quantile(alpha)))


def _reject_cover_routes(gamma: float, alpha: float, c1: float,
                         c: float) -> tuple[float, float, float]:
    """Evaluate P(robust pivot inside, pretest rejects) both ways.

    Returns (bivariate route, quadrature route, err bound of the latter)
    and raises if the routes disagree beyond ROUTE_AGREEMENT_TOL.
    """
    # Route (a): two rectangle strips of the joint normal law.
    upper = bvn_rectangle(-c, c, c1 - gamma, math.inf, PIVOT_PRETEST_CORR)
    lower = bvn_rectangle(-c, c, -math.inf, -c1 - gamma, PIVOT_PRETEST_CORR)
    via_bvn = _clip_prob(upper + lower)

    # Route (b): complement of the accept-side integral, conditioning the
    # pretest statistic on the pivot: mean gamma + 3 g / sqrt(11),
    # variance 2/11.
    def integrand(g: float) -> float:
        mu = gamma + _COND_SLOPE * g
        inside = (_cdf((c1 - mu) * _INV_COND_SD)
                  - _cdf((-c1 - mu) * _INV_COND_SD))
        return inside * _pdf(g)

    integral, abserr, info = quad(
        integrand, -c, c,
        epsabs=_QUAD_REQUEST, epsrel=_QUAD_REQUEST, limit=200, full_output=1,
    )[:3]
    if abserr > QUAD_ABS_TOL:
        raise QuadratureError(
            f"quadrature achieved abs error {abserr:.3e} > {QUAD_ABS_TOL:.1e}",
            estimate=(1.0 - alpha) - integral, err_bound=abserr)
    via_quad = _clip_prob((1.0 - alpha) - integral)
    err_bound = abserr + 4.0 * _EPS * 2.0 * info["neval"]

    gap = abs(via_bvn - via_quad)
    if gap > ROUTE_AGREEMENT_TOL:
        raise RouteDisagreementError(
            f"bivariate and quadrature routes differ by {gap:.3e} "
            f"at gamma={gamma}, alpha1 quantile={c1}, alpha={alpha}",
            estimate=via_quad, err_bound=gap)
    return via_bvn, via_quad, err_bound


def reject_cover_prob(gamma: float, alpha1: float, alpha: float) -> float:
    """P(robust interval covers AND pretest rejects).

    Computed by adaptive quadrature of the conditional form, with a
    bivariate-normal rectangle evaluation cross-checking every call.
    """
    return reject_cover_routes(gamma, alpha1, alpha)[1]


def reject_cover_routes(gamma: float, alpha1: float,
                        alpha: float) -> tuple[float, float, float]:
    """Diagnostic form of reject_cover_prob exposing both routes.

    Returns (bivariate-cdf value, quadrature value, quadrature err bound).
    """
    _validate_gamma(gamma)
    _validate_level("alpha1", alpha1)
    _validate_level("alpha", alpha)
    c1 = std_normal_quantile(alpha1)
    c = std_normal_quantile(alpha)
    return _reject_cover_routes(gamma, alpha, c1, c)


def _coverage_value(gamma: float, alpha: float, c1: float,
                    c: float) -> tuple[float, float]:
    accept = _accept_prob(gamma, c1)
    pooled = _pooled_inside_prob(gamma, c)
    _, joint, joint_err = _reject_cover_routes(gamma, alpha, c1, c)
    value = _clip_prob(accept * pooled + joint)
    err_bound = joint_err + 4.0 * _EPS * 4.0
    return value, err_bound


def coverage_probability(query: CoverageQuery) -> CoverageResult:
    """Coverage probability of the two-stage interval at the given query.

    This is the accept-branch product plus the reject-branch joint term;
    it is symmetric in gamma and tends to 1 - alpha as |gamma| grows.
    """
    c1 = std_normal_quantile(query.alpha1)
    c = std_normal_quantile(query.alpha)
    value, err_bound = _coverage_value(query.gamma, query.alpha, c1, c)
    return CoverageResult(value=value, method=Method.CONDITIONAL_QUADRATURE,
                          err_bound=err_bound)


def coverage_curve(alpha1: float, alpha: float, gamma_min: float,
                   gamma_max: float, steps: int) -> list[CurvePoint]:
    """Coverage evaluated on an evenly spaced gamma grid (endpoints included)."""
    _validate_level("alpha1", alpha1)
    _validate_level("alpha", alpha)
    if not (math.isfinite(gamma_min) and math.isfinite(gamma_max)
            and gamma_min < gamma_max):
        raise DomainError("need gamma_min < gamma_max, both finite")
    if steps < 2:
        raise DomainError("steps must be at least 2")
    c1 = std_normal_quantile(alpha1)
    c = std_normal_quantile(alpha)
    grid = np.linspace(gamma_min, gamma_max, steps)
    return [CurvePoint(float(g), _coverage_value(float(g), alpha, c1, c)[0])
            for g in grid]


def _golden_section(f: Callable[[float], float], lo: float, hi: float,
                    tol: float) -> tuple[float, float]:
    """Minimize a locally unimodal f on [lo, hi]; returns best point seen."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_f = (c, fc) if fc <= fd else (d, fd)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
    mid = 0.5 * (a + b)
    fmid = f(mid)
    if fmid < best_f:
        best_x, best_f = mid, fmid
    return best_x, best_f


def min_coverage(alpha1: float, alpha: float, *, gamma_max: float = 20.0,
                 grid_step: float = 0.01, refine_tol: float = 1e-6) -> MinCoverageReport:
    """Minimum coverage probability over gamma, with its location.

    Coverage is symmetric in gamma, so only the nonnegative half-line is
    searched: a coarse grid (to guard against multiple local minima)
    followed by golden-section refinement inside the bracketing cell.
    Beyond gamma_max = 20 both gamma-dependent terms are indistinguishable
    from their limits, so nothing can hide out there.
    """
    _validate_level("alpha1", alpha1)
    _validate_level("alpha", alpha)
    if not (grid_step > 0.0 and gamma_max > grid_step):
        raise DomainError("need 0 < grid_step < gamma_max")
    c1 = std_normal_quantile(alpha1)
    c = std_normal_quantile(alpha)

    def f(g: float) -> float:
        return _coverage_value(g, alpha, c1, c)[0]

    grid = np.arange(0.0, gamma_max + 0.5 * grid_step, grid_step)
    values = [f(float(g)) for g in grid]
    i = int(np.argmin(values))
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, len(grid) - 1)])
    gamma_star, minimum = _golden_section(f, lo, hi, refine_tol)
    if values[i] < minimum:
        gamma_star, minimum = float(grid[i]), values[i]
    return MinCoverageReport(gamma_star=gamma_star, min_coverage=minimum,
                             alpha1=alpha1, alpha=alpha)


def min_coverage_table(alpha1_list: Sequence[float],
                       alpha_list: Sequence[float]) -> list[MinCoverageReport]:
    """Cartesian product of min_coverage over the two level lists."""
    if not alpha1_list or not alpha_list:
        raise DomainError("level lists must be nonempty")
    return [min_coverage(a1, a)
            for a1 in alpha1_list for a in alpha_list]


def efficiency_comparison(sigma_s2: float, sigma_e2: float,
                          n: int) -> EfficiencyComparison:
    """Compare the robust estimator against a completely randomized trial.

    Both arms of the crossover trial are taken to have n subjects; the
    comparator is the difference of group means from a completely
    randomized design with the same total number of response
    measurements. The crossover estimator wins exactly when the
    between-subject variance is at least 4.5 times the error variance.
    """
    if not (isinstance(n, (int, np.integer)) and not isinstance(n, bool) and n >= 1):
        raise DomainError("n must be a positive integer")
    if not (math.isfinite(sigma_e2) and sigma_e2 > 0.0):
        raise DomainError("sigma_e2 must be positive and finite")
    if not (math.isfinite(sigma_s2) and sigma_s2 >= 0.0):
        raise DomainError("sigma_s2 must be nonnegative and finite")
    var_robust = 11.0 * sigma_e2 / (4.0 * n)
    var_randomized = (sigma_e2 + sigma_s2) / (2.0 * n)
    return EfficiencyComparison(
        var_robust=var_robust,
        var_randomized=var_randomized,
        crossover_preferred=var_robust <= var_randomized,
    )
