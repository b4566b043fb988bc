"""Coverage analysis of two-stage ABAB/BABA crossover confidence intervals.

The two-stage procedure pretests for differential carryover and then
builds a confidence interval with the pooled estimator (pretest accepts)
or the carryover-robust estimator (pretest rejects). This package
evaluates the resulting interval's true coverage probability exactly, by
two independent numerical routes, validates it against a subject-level
Monte Carlo simulator, and locates the coverage minimum, which falls far
below the nominal level.
"""

from .bivariate import bvn_cdf, bvn_rectangle
from .coverage import (
    PIVOT_PRETEST_CORR,
    CoverageQuery,
    CoverageResult,
    CurvePoint,
    EfficiencyComparison,
    Method,
    MinCoverageReport,
    PivotJoint,
    coverage_curve,
    coverage_probability,
    efficiency_comparison,
    min_coverage,
    min_coverage_table,
    pooled_cover_prob,
    pretest_accept_prob,
    reject_cover_prob,
    reject_cover_routes,
)
from .errors import (
    CrossoverError,
    DomainError,
    NumericalError,
    QuadratureError,
    RouteDisagreementError,
)
from .normal import (
    std_normal_cdf,
    std_normal_inverse_cdf,
    std_normal_pdf,
    std_normal_quantile,
)
from .simulate import (
    EmpiricalCoverage,
    EstimatorMoments,
    SimConfig,
    TheoreticalMoments,
    empirical_coverage,
    estimator_moments,
    replication_stream,
    simulate_trial,
    theoretical_moments,
)
from .trial import (
    Branch,
    EffectEstimates,
    ModelParams,
    PeriodDifferences,
    SubjectResponses,
    TrialDesign,
    TwoStageConfig,
    TwoStageOutcome,
    estimate_effects,
    reduce_responses,
    scaled_carryover,
    two_stage,
)

__version__ = "0.1.0"

__all__ = [
    "PIVOT_PRETEST_CORR",
    "Branch",
    "CoverageQuery",
    "CoverageResult",
    "CrossoverError",
    "CurvePoint",
    "DomainError",
    "EffectEstimates",
    "EfficiencyComparison",
    "EmpiricalCoverage",
    "EstimatorMoments",
    "Method",
    "MinCoverageReport",
    "ModelParams",
    "NumericalError",
    "PeriodDifferences",
    "PivotJoint",
    "QuadratureError",
    "RouteDisagreementError",
    "SimConfig",
    "SubjectResponses",
    "TheoreticalMoments",
    "TrialDesign",
    "TwoStageConfig",
    "TwoStageOutcome",
    "bvn_cdf",
    "bvn_rectangle",
    "coverage_curve",
    "coverage_probability",
    "efficiency_comparison",
    "empirical_coverage",
    "estimate_effects",
    "estimator_moments",
    "min_coverage",
    "min_coverage_table",
    "pooled_cover_prob",
    "pretest_accept_prob",
    "reduce_responses",
    "reject_cover_prob",
    "reject_cover_routes",
    "replication_stream",
    "scaled_carryover",
    "simulate_trial",
    "std_normal_cdf",
    "std_normal_inverse_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "theoretical_moments",
    "two_stage",
    "__version__",
]
