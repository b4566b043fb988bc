"""Four-period two-treatment crossover trial model (ABAB/BABA allocation).

Group 1 receives treatments in the order A, B, A, B and group 2 in the
order B, A, B, A. Carryover is first-order only: a treatment's residual
effect reaches into the following period and no further, so period 1
carries none. The treatment allocation is hard-coded because the
estimator coefficients below are specific to it.

The analysis pipeline is: reduce the subject responses to the four
between-group period differences, form the three linear estimators, then
run the two-stage procedure (pretest for differential carryover, pick the
confidence interval accordingly).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .normal import std_normal_quantile


@dataclass(frozen=True)
class TrialDesign:
    """Group sizes of the two allocation arms."""

    n1: int
    n2: int

    def __post_init__(self):
        for name, n in (("n1", self.n1), ("n2", self.n2)):
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
                raise DomainError(f"{name} must be a positive integer, got {n!r}")

    @property
    def m(self) -> float:
        """1/n1 + 1/n2, the scale carried by every group-difference variance."""
        return 1.0 / self.n1 + 1.0 / self.n2


@dataclass(frozen=True)
class ModelParams:
    """Fixed effects and variance components of the response model.

    A response is grand_mean + subject effect + period effect + treatment
    effect + carryover from the previous period's treatment + noise.
    Subject effects are N(0, between_subject_var), noise terms are
    N(0, error_var), all independent.

    ``between_subject_var == 0`` is admitted (useful for deterministic
    tests) even though a real trial would have it positive.
    """

    grand_mean: float = 0.0
    period_effects: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    treatment_a: float = 0.0
    treatment_b: float = 0.0
    carryover_a: float = 0.0
    carryover_b: float = 0.0
    between_subject_var: float = 1.0
    error_var: float = 1.0

    def __post_init__(self):
        if len(self.period_effects) != 4:
            raise DomainError("period_effects must have exactly 4 entries")
        values = (self.grand_mean, *self.period_effects, self.treatment_a,
                  self.treatment_b, self.carryover_a, self.carryover_b,
                  self.between_subject_var, self.error_var)
        if not all(math.isfinite(v) for v in values):
            raise DomainError("model parameters must be finite")
        if self.error_var <= 0.0:
            raise DomainError("error_var must be positive")
        if self.between_subject_var < 0.0:
            raise DomainError("between_subject_var must be nonnegative")

    @property
    def treatment_difference(self) -> float:
        """The estimand: effect of treatment A minus effect of treatment B."""
        return self.treatment_a - self.treatment_b

    @property
    def differential_carryover(self) -> float:
        """3/4 of the difference in residual effects of the two treatments."""
        return 0.75 * (self.carryover_a - self.carryover_b)

    @classmethod
    def from_effects(cls, treatment_difference, differential_carryover, *,
                     between_subject_var=1.0, error_var=1.0, grand_mean=0.0,
                     period_effects=(0.0, 0.0, 0.0, 0.0)) -> "ModelParams":
        """Build params hitting the given estimands (up to one rounding)."""
        return cls(
            grand_mean=grand_mean,
            period_effects=tuple(period_effects),
            treatment_a=treatment_difference,
            treatment_b=0.0,
            carryover_a=differential_carryover / 0.75,
            carryover_b=0.0,
            between_subject_var=between_subject_var,
            error_var=error_var,
        )


@dataclass(frozen=True)
class SubjectResponses:
    """Raw per-subject responses, one row per subject, one column per period."""

    group1: np.ndarray
    group2: np.ndarray

    def __post_init__(self):
        for name, y in (("group1", self.group1), ("group2", self.group2)):
            arr = np.asarray(y, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 4:
                raise DomainError(f"{name} must have shape (n, 4), got {arr.shape}")
            if not np.isfinite(arr).all():
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class PeriodDifferences:
    """Between-group difference of period means, one value per period."""

    d1: float
    d2: float
    d3: float
    d4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d1, self.d2, self.d3, self.d4])


class Branch(enum.Enum):
    """Which estimator the two-stage procedure settled on."""

    POOLED = "pooled"
    ROBUST = "robust"


@dataclass(frozen=True)
class TwoStageConfig:
    """Levels and known error scale for the two-stage procedure."""

    alpha1: float
    alpha: float
    sigma_e: float

    def __post_init__(self):
        if not 0.0 < self.alpha1 < 1.0:
            raise DomainError("alpha1 must lie strictly inside (0, 1)")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must lie strictly inside (0, 1)")
        if not (math.isfinite(self.sigma_e) and self.sigma_e > 0.0):
            raise DomainError("sigma_e must be positive and finite")


@dataclass(frozen=True)
class TwoStageOutcome:
    """Result of one run of the two-stage procedure."""

    pretest_stat: float
    h0_accepted: bool
    interval_lo: float
    interval_hi: float
    branch: Branch


class EffectEstimates(NamedTuple):
    """The three linear estimators computed from the period differences."""

    pooled_effect: float      # efficient for the treatment difference when carryover is zero
    robust_effect: float      # unbiased for the treatment difference regardless of carryover
    carryover_effect: float   # unbiased for the differential carryover


def reduce_responses(design: TrialDesign, responses: SubjectResponses) -> PeriodDifferences:
    """Reduce raw responses to the four between-group period differences.

    The differencing removes the grand mean and all period effects exactly
    (in real arithmetic), which is the whole point of the reduction.
    """
    if responses.group1.shape[0] != design.n1 or responses.group2.shape[0] != design.n2:
        raise DomainError(
            f"responses have groups of size {responses.group1.shape[0]} and "
            f"{responses.group2.shape[0]}; design says {design.n1} and {design.n2}")
    d = responses.group1.sum(axis=0) / design.n1 - responses.group2.sum(axis=0) / design.n2
    return PeriodDifferences(float(d[0]), float(d[1]), float(d[2]), float(d[3]))


def pooled_effect_estimate(d1, d2, d3, d4):
    """Average of the per-period treatment contrasts; assumes no carryover."""
    return 0.25 * (d1 - d2 + d3 - d4)


def robust_effect_estimate(d1, d2, d3, d4):
    """Carryover-free contrast; also annihilates the between-subject offset."""
    return d1 - 0.25 * d2 - 0.5 * d3 - 0.25 * d4


def carryover_effect_estimate(d1, d2, d3, d4):
    """Contrast of periods 1 and 3, which isolates the differential carryover."""
    return 0.75 * (d1 - d3)


def estimate_effects(reduced: PeriodDifferences) -> EffectEstimates:
    """Compute the three estimators from the period differences."""
    d1, d2, d3, d4 = reduced.d1, reduced.d2, reduced.d3, reduced.d4
    return EffectEstimates(
        pooled_effect=pooled_effect_estimate(d1, d2, d3, d4),
        robust_effect=robust_effect_estimate(d1, d2, d3, d4),
        carryover_effect=carryover_effect_estimate(d1, d2, d3, d4),
    )


def carryover_scale(m: float) -> float:
    """sqrt(8 / (9 m)): standardizes the carryover estimator to unit variance."""
    return math.sqrt(8.0 / (9.0 * m))


def scaled_carryover(psi: float, design: TrialDesign, sigma_e: float) -> float:
    """Scaled differential carryover: sqrt(8/(9 m)) * psi / sigma_e.

    This single dimensionless parameter is all the coverage probability of
    the two-stage interval depends on.
    """
    if not (math.isfinite(sigma_e) and sigma_e > 0.0):
        raise DomainError("sigma_e must be positive and finite")
    if not math.isfinite(psi):
        raise DomainError("psi must be finite")
    return carryover_scale(design.m) * psi / sigma_e


def pooled_half_width(m: float, alpha: float, sigma_e: float) -> float:
    """Half-width of the pooled-estimator interval at level 1 - alpha."""
    return std_normal_quantile(alpha) * math.sqrt(m / 4.0) * sigma_e


def robust_half_width(m: float, alpha: float, sigma_e: float) -> float:
    """Half-width of the robust-estimator interval at level 1 - alpha."""
    return std_normal_quantile(alpha) * math.sqrt(11.0 * m / 8.0) * sigma_e


def two_stage(reduced: PeriodDifferences, design: TrialDesign,
              config: TwoStageConfig) -> TwoStageOutcome:
    """Run the pretest-then-estimate procedure on reduced data.

    The pretest standardizes the carryover estimator and accepts "no
    differential carryover" on strict inequality against the two-sided
    critical value; a tie counts as rejection. Acceptance selects the
    narrow interval around the pooled estimator, rejection the wide one
    around the robust estimator.
    """
    est = estimate_effects(reduced)
    stat = carryover_scale(design.m) * est.carryover_effect / config.sigma_e
    accepted = abs(stat) < std_normal_quantile(config.alpha1)
    if accepted:
        center = est.pooled_effect
        half_width = pooled_half_width(design.m, config.alpha, config.sigma_e)
        branch = Branch.POOLED
    else:
        center = est.robust_effect
        half_width = robust_half_width(design.m, config.alpha, config.sigma_e)
        branch = Branch.ROBUST
    return TwoStageOutcome(
        pretest_stat=stat,
        h0_accepted=accepted,
        interval_lo=center - half_width,
        interval_hi=center + half_width,
        branch=branch,
    )
