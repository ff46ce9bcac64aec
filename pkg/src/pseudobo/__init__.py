"""Modular black-box optimization via evaluation-worthiness maximization.

Surrogate predictors, uncertainty quantifiers and acquisition rules compose
into a worthiness score whose argmax picks the next query point.  Any
combination where the surrogate is locally consistent, the uncertainty
vanishes exactly on evaluated points while staying positive elsewhere, and
the acquisition rewards residual uncertainty, yields a convergent search.
"""

from .acquisition import (
    ExpectedImprovement,
    HybridAcquisition,
    ProbabilityOfImprovement,
    PureExploration,
    UpperConfidenceBound,
    expected_improvement,
    probability_of_improvement,
    upper_confidence_bound,
)
from .benchmarks import Benchmark, get_benchmark, random_search
from .calibration import (
    CalibrationResult,
    CalibrationSplit,
    calibrate_lambda,
    ccr_report,
    coverage,
    winsorize,
)
from .candidates import (
    PerturbConfig,
    SobolPerturbProposer,
    SobolStream,
    TrustRegionProposer,
    TrustRegionState,
    perturbation_probability,
    propose_candidates,
    tr_update,
)
from .core import EvaluationWorthiness, run
from .domain import Box, Dataset
from .exceptions import (
    CalibrationError,
    ConfigError,
    DomainError,
    ExternalObjectiveError,
    NumericalError,
    PseudoBOError,
)
from .gp import GaussianProcessSurrogate, GaussianProcessUncertainty
from .presets import ExperimentConfig, MethodParams, build_components, preset
from .randomized_prior import PriorField, RandomizedPriorEnsemble, sample_prior_field
from .runner import run_calibration, run_experiment
from .surrogates import (
    BandwidthSchedule,
    CompositeSurrogate,
    HybridSurrogate,
    KernelRegressionSurrogate,
    NearestNeighborSurrogate,
)
from .trace import RunTrace, read_trace_csv, regret_metrics, write_trace_csv
from .uncertainty import (
    CompositeMaxUncertainty,
    ConvexCombinationUncertainty,
    HybridUncertainty,
    MinDistanceUncertainty,
    alpha_mix,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthSchedule",
    "Benchmark",
    "Box",
    "CalibrationError",
    "CalibrationResult",
    "CalibrationSplit",
    "CompositeMaxUncertainty",
    "CompositeSurrogate",
    "ConfigError",
    "ConvexCombinationUncertainty",
    "Dataset",
    "DomainError",
    "EvaluationWorthiness",
    "ExpectedImprovement",
    "ExperimentConfig",
    "ExternalObjectiveError",
    "GaussianProcessSurrogate",
    "GaussianProcessUncertainty",
    "HybridAcquisition",
    "HybridSurrogate",
    "HybridUncertainty",
    "KernelRegressionSurrogate",
    "MethodParams",
    "MinDistanceUncertainty",
    "NearestNeighborSurrogate",
    "NumericalError",
    "PerturbConfig",
    "PriorField",
    "ProbabilityOfImprovement",
    "PseudoBOError",
    "PureExploration",
    "RandomizedPriorEnsemble",
    "RunTrace",
    "SobolPerturbProposer",
    "SobolStream",
    "TrustRegionProposer",
    "TrustRegionState",
    "UpperConfidenceBound",
    "alpha_mix",
    "build_components",
    "calibrate_lambda",
    "ccr_report",
    "coverage",
    "expected_improvement",
    "get_benchmark",
    "perturbation_probability",
    "preset",
    "probability_of_improvement",
    "propose_candidates",
    "random_search",
    "read_trace_csv",
    "regret_metrics",
    "run",
    "run_calibration",
    "run_experiment",
    "sample_prior_field",
    "tr_update",
    "upper_confidence_bound",
    "winsorize",
    "write_trace_csv",
]
