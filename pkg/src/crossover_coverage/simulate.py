"""Subject-level Monte Carlo simulator for the crossover model.

This is the empirical oracle for the analytic coverage engine: it draws
whole trials at the subject level, pushes them through the same reduction
and two-stage procedure as real data, and tallies coverage.

Reproducibility contract
------------------------
Replication ``r`` of a run with seed ``s`` consumes a fixed-width slice of
the counter space of a Philox stream keyed by ``s``. Results are therefore
bit-identical regardless of chunking or evaluation order, and any single
replication can be regenerated in isolation with ``replication_stream``.

Normal variates come from the inverse-cdf transform of open-interval
uniforms built from the raw 64-bit words, reusing this package's quantile
implementation, so the simulator introduces no second normal
approximation. Each replication consumes exactly ``5 * (n1 + n2)`` raw
words (one per subject effect, one per subject-period error), padded to a
multiple of 4 words because Philox advances in 4-word blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coverage import CoverageResult, Method, PIVOT_PRETEST_CORR
from .errors import DomainError
from .normal import std_normal_inverse_cdf, std_normal_quantile
from .trial import (
    ModelParams,
    SubjectResponses,
    TrialDesign,
    TwoStageConfig,
    carryover_effect_estimate,
    carryover_scale,
    pooled_effect_estimate,
    pooled_half_width,
    robust_effect_estimate,
    robust_half_width,
)

_MAX_SEED = 2**64


def _validate_seed(seed) -> None:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise DomainError("seed must be an integer")
    if not 0 <= int(seed) < _MAX_SEED:
        raise DomainError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class SimConfig:
    """Everything one simulation run needs, including its seed."""

    design: TrialDesign
    params: ModelParams
    two_stage: TwoStageConfig
    replications: int
    seed: int

    def __post_init__(self):
        if not isinstance(self.replications, (int, np.integer)) or self.replications < 1:
            raise DomainError("replications must be a positive integer")
        _validate_seed(self.seed)
        # The procedure uses the known true error scale.
        if not math.isclose(self.two_stage.sigma_e,
                            math.sqrt(self.params.error_var),
                            rel_tol=1e-12, abs_tol=0.0):
            raise DomainError(
                "two_stage.sigma_e must equal sqrt(params.error_var)")

    @classmethod
    def create(cls, design: TrialDesign, params: ModelParams, alpha1: float,
               alpha: float, replications: int, seed: int) -> "SimConfig":
        """Build a config whose procedure uses the params' own error scale."""
        two_stage = TwoStageConfig(alpha1=alpha1, alpha=alpha,
                                   sigma_e=math.sqrt(params.error_var))
        return cls(design=design, params=params, two_stage=two_stage,
                   replications=replications, seed=seed)


@dataclass(frozen=True)
class EmpiricalCoverage:
    """Coverage tally over a simulation run."""

    hits: int
    total: int
    estimate: float
    std_err: float
    accept_rate: float

    def z_against(self, expected: float) -> float:
        """Discrepancy from an expected coverage, in binomial std errors."""
        if self.std_err == 0.0:
            return 0.0 if self.estimate == expected else math.inf
        return (self.estimate - expected) / self.std_err

    def to_coverage_result(self) -> CoverageResult:
        return CoverageResult(value=self.estimate, method=Method.MONTE_CARLO,
                              err_bound=self.std_err)


@dataclass(frozen=True)
class EstimatorMoments:
    """Sample moments of the three estimators across replications."""

    replications: int
    mean_pooled: float
    mean_robust: float
    mean_carryover: float
    var_pooled: float
    var_robust: float
    var_carryover: float
    cov_pooled_carryover: float
    cov_robust_carryover: float
    corr_robust_carryover: float


@dataclass(frozen=True)
class TheoreticalMoments:
    """Closed-form counterparts of EstimatorMoments."""

    mean_pooled: float
    mean_robust: float
    mean_carryover: float
    var_pooled: float
    var_robust: float
    var_carryover: float
    cov_pooled_carryover: float
    cov_robust_carryover: float
    corr_robust_carryover: float


def theoretical_moments(design: TrialDesign, params: ModelParams) -> TheoreticalMoments:
    """Exact means, variances and covariances of the three estimators.

    None of them involve the between-subject variance: the estimator
    coefficient vectors annihilate the common subject-average offset.
    """
    m = design.m
    theta = params.treatment_difference
    psi = params.differential_carryover
    noise = m * params.error_var
    return TheoreticalMoments(
        mean_pooled=theta - psi,
        mean_robust=theta,
        mean_carryover=psi,
        var_pooled=noise / 4.0,
        var_robust=11.0 * noise / 8.0,
        var_carryover=9.0 * noise / 8.0,
        cov_pooled_carryover=0.0,
        cov_robust_carryover=9.0 * noise / 8.0,
        corr_robust_carryover=PIVOT_PRETEST_CORR,
    )


def _draws_per_rep(design: TrialDesign) -> int:
    return 5 * (design.n1 + design.n2)


def _padded_draws_per_rep(design: TrialDesign) -> int:
    # Philox advances its counter in blocks of 4 output words.
    b = _draws_per_rep(design)
    return -(-b // 4) * 4


def replication_stream(seed: int, rep_index: int,
                       design: TrialDesign) -> np.random.Generator:
    """Generator positioned at replication rep_index's private counter slice."""
    _validate_seed(seed)
    if not isinstance(rep_index, (int, np.integer)) or rep_index < 0:
        raise DomainError("rep_index must be a nonnegative integer")
    bit_gen = np.random.Philox(key=int(seed))
    bit_gen.advance(int(rep_index) * _padded_draws_per_rep(design) // 4)
    return np.random.Generator(bit_gen)


def _open_uniforms(raw: np.ndarray) -> np.ndarray:
    # (k + 1/2) / 2**52 over the top 52 bits: exact, symmetric, never 0 or 1.
    return ((raw >> 12).astype(np.float64) + 0.5) * 2.0**-52


def _standard_normals(raw: np.ndarray) -> np.ndarray:
    return std_normal_inverse_cdf(_open_uniforms(raw))


def _fixed_effects(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    mu = params.grand_mean
    p1, p2, p3, p4 = params.period_effects
    ta, tb = params.treatment_a, params.treatment_b
    ca, cb = params.carryover_a, params.carryover_b
    # Period 1 carries no residual effect; afterwards each period carries
    # the residual of the treatment given in the period before it.
    group1 = np.array([mu + p1 + ta,
                       mu + p2 + tb + ca,
                       mu + p3 + ta + cb,
                       mu + p4 + tb + ca])
    group2 = np.array([mu + p1 + tb,
                       mu + p2 + ta + cb,
                       mu + p3 + tb + ca,
                       mu + p4 + ta + cb])
    return group1, group2


def simulate_trial(design: TrialDesign, params: ModelParams,
                   rng: np.random.Generator) -> SubjectResponses:
    """Draw one complete trial at the subject level.

    Consumes exactly ``5 * (n1 + n2)`` raw words from ``rng``'s bit
    generator, in a fixed order: subject effects for group 1, then group
    2, then the per-subject-period errors of group 1, then group 2.
    """
    n1, n2 = design.n1, design.n2
    total = n1 + n2
    raw = rng.bit_generator.random_raw(5 * total)
    z = _standard_normals(raw)
    sigma_s = math.sqrt(params.between_subject_var)
    sigma_e = math.sqrt(params.error_var)
    xi1 = sigma_s * z[:n1]
    xi2 = sigma_s * z[n1:total]
    eps1 = sigma_e * z[total:total + 4 * n1].reshape(n1, 4)
    eps2 = sigma_e * z[total + 4 * n1:].reshape(n2, 4)
    fixed1, fixed2 = _fixed_effects(params)
    return SubjectResponses(group1=fixed1 + xi1[:, None] + eps1,
                            group2=fixed2 + xi2[:, None] + eps2)


def _auto_chunk(design: TrialDesign, replications: int) -> int:
    budget = int(4_000_000 // _padded_draws_per_rep(design))
    return max(1, min(replications, budget))


def _chunk_bounds(total: int, size: int):
    start = 0
    while start < total:
        yield start, min(size, total - start)
        start += size


def _batch_estimates(config: SimConfig, start: int, count: int):
    """Estimator triple for replications [start, start + count), vectorized.

    Element-for-element identical to running simulate_trial,
    reduce_responses and estimate_effects one replication at a time.
    """
    design, params = config.design, config.params
    n1, n2 = design.n1, design.n2
    total = n1 + n2
    b = _draws_per_rep(design)
    b_pad = _padded_draws_per_rep(design)
    bit_gen = np.random.Philox(key=int(config.seed))
    bit_gen.advance(start * b_pad // 4)
    raw = bit_gen.random_raw(count * b_pad).reshape(count, b_pad)[:, :b]
    z = _standard_normals(raw)
    sigma_s = math.sqrt(params.between_subject_var)
    sigma_e = math.sqrt(params.error_var)
    xi1 = sigma_s * z[:, :n1]
    xi2 = sigma_s * z[:, n1:total]
    eps1 = sigma_e * z[:, total:total + 4 * n1].reshape(count, n1, 4)
    eps2 = sigma_e * z[:, total + 4 * n1:].reshape(count, n2, 4)
    fixed1, fixed2 = _fixed_effects(params)
    y1 = fixed1 + xi1[:, :, None] + eps1
    y2 = fixed2 + xi2[:, :, None] + eps2
    d = y1.sum(axis=1) / n1 - y2.sum(axis=1) / n2
    d1, d2, d3, d4 = d[:, 0], d[:, 1], d[:, 2], d[:, 3]
    return (pooled_effect_estimate(d1, d2, d3, d4),
            robust_effect_estimate(d1, d2, d3, d4),
            carryover_effect_estimate(d1, d2, d3, d4))


def empirical_coverage(config: SimConfig, *, chunk_size: int | None = None) -> EmpiricalCoverage:
    """Simulate the full pipeline and tally coverage of the two-stage interval.

    Each replication is simulated, reduced, and run through the two-stage
    procedure; a hit means the interval contains the true treatment
    difference. Deterministic given the config (including its seed) and
    independent of chunk_size, which only bounds working memory.
    """
    design, params, ts = config.design, config.params, config.two_stage
    theta = params.treatment_difference
    scale = carryover_scale(design.m)
    crit1 = std_normal_quantile(ts.alpha1)
    hw_pooled = pooled_half_width(design.m, ts.alpha, ts.sigma_e)
    hw_robust = robust_half_width(design.m, ts.alpha, ts.sigma_e)
    size = chunk_size or _auto_chunk(design, config.replications)
    if size < 1:
        raise DomainError("chunk_size must be positive")
    hits = 0
    accepts = 0
    for start, count in _chunk_bounds(config.replications, size):
        pooled, robust, carry = _batch_estimates(config, start, count)
        stat = scale * carry / ts.sigma_e
        accepted = np.abs(stat) < crit1
        center = np.where(accepted, pooled, robust)
        half_width = np.where(accepted, hw_pooled, hw_robust)
        lo = center - half_width
        hi = center + half_width
        hits += int(np.count_nonzero((lo <= theta) & (theta <= hi)))
        accepts += int(np.count_nonzero(accepted))
    total = config.replications
    estimate = hits / total
    std_err = math.sqrt(estimate * (1.0 - estimate) / total)
    return EmpiricalCoverage(hits=hits, total=total, estimate=estimate,
                             std_err=std_err, accept_rate=accepts / total)


def estimator_moments(config: SimConfig, *, chunk_size: int | None = None) -> EstimatorMoments:
    """Sample moments of the three estimators over a simulation run.

    Moments are computed once over the assembled per-replication values,
    so they too are independent of chunk_size.
    """
    size = chunk_size or _auto_chunk(config.design, config.replications)
    if size < 1:
        raise DomainError("chunk_size must be positive")
    parts = [_batch_estimates(config, start, count)
             for start, count in _chunk_bounds(config.replications, size)]
    pooled = np.concatenate([p[0] for p in parts])
    robust = np.concatenate([p[1] for p in parts])
    carry = np.concatenate([p[2] for p in parts])
    ddof = 1 if config.replications > 1 else 0
    cov_rc = float(np.cov(robust, carry, ddof=ddof)[0, 1]) if config.replications > 1 else 0.0
    cov_pc = float(np.cov(pooled, carry, ddof=ddof)[0, 1]) if config.replications > 1 else 0.0
    var_r = float(np.var(robust, ddof=ddof))
    var_c = float(np.var(carry, ddof=ddof))
    corr = cov_rc / math.sqrt(var_r * var_c) if var_r > 0.0 and var_c > 0.0 else math.nan
    return EstimatorMoments(
        replications=config.replications,
        mean_pooled=float(np.mean(pooled)),
        mean_robust=float(np.mean(robust)),
        mean_carryover=float(np.mean(carry)),
        var_pooled=float(np.var(pooled, ddof=ddof)),
        var_robust=var_r,
        var_carryover=var_c,
        cov_pooled_carryover=cov_pc,
        cov_robust_carryover=cov_rc,
        corr_robust_carryover=corr,
    )
