"""Named method presets and the experiment configuration record.

Three preconfigured variants are exposed:

* ``PseudoBO-RP``: randomized-prior ensemble mean/spread with EI.
* ``PseudoBO-KR-Hyb``: kernel-regression surrogate with the
  distance-gated hybrid uncertainty, EI.
* ``PseudoBO-KR-Hyb-TR``: the same inside a trust region.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .acquisition import (
    ExpectedImprovement,
    ProbabilityOfImprovement,
    UpperConfidenceBound,
)
from .candidates import (
    SobolPerturbProposer,
    TrustRegionProposer,
    default_n_candidates,
    perturbation_probability,
)
from .core import EvaluationWorthiness
from .exceptions import ConfigError
from .gp import GaussianProcessSurrogate, GaussianProcessUncertainty
from .randomized_prior import RandomizedPriorEnsemble
from .rng import PRIOR, check_seed, substream
from .surrogates import KernelRegressionSurrogate
from .uncertainty import HybridUncertainty

METHOD_RP = "PseudoBO-RP"
METHOD_KR_HYB = "PseudoBO-KR-Hyb"
METHOD_KR_HYB_TR = "PseudoBO-KR-Hyb-TR"
METHODS = (METHOD_RP, METHOD_KR_HYB, METHOD_KR_HYB_TR)

CALIBRATION_METHODS = ("GP", "RP", "KR+Hybrid")


def canonical_method(name: str) -> str:
    for known in METHODS:
        if name.lower() == known.lower():
            return known
    raise ConfigError(f"unknown method {name!r}; available: {', '.join(METHODS)}")


@dataclass
class MethodParams:
    """Hyperparameters of a preset; bandwidth bases are unit-cube fractions."""

    h0_low: float = 0.05
    h0_high: float = 0.2
    h0_prior: float = 0.005
    n_members: int = 20
    hidden_width: int = 32
    output_scale: float = 1.0
    acquisition: str = "ei"
    tau: float = 0.0
    beta0: float = 2.0
    p_perturb: float | None = None
    n_candidates: int | None = None
    trust_region: bool = False
    tr_length_init: float = 0.8
    tr_length_min: float = 0.5**7
    tr_length_max: float = 1.6
    tr_success_threshold: int = 3


_FIELD_NAMES = {f.name for f in dataclasses.fields(MethodParams)}


def _params_from_dict(raw: dict) -> MethodParams:
    unknown = set(raw) - _FIELD_NAMES
    if unknown:
        raise ConfigError(f"unknown method parameter(s): {sorted(unknown)}")
    return MethodParams(**raw)


@dataclass
class ExperimentConfig:
    """Fully specified experiment; validated before any evaluation."""

    method: str
    benchmark: str | None = None
    objective_cmd: str | None = None
    bounds: tuple | None = None
    direction: str = "min"
    budget: int = 100
    n_init: int = 10
    batch: int = 1
    seeds: tuple = (0,)
    out: str | None = None
    f_star: float | None = None
    record_timing: bool = False
    params: MethodParams = field(default_factory=MethodParams)

    def __post_init__(self):
        self.method = canonical_method(self.method)
        self.seeds = tuple(int(s) for s in self.seeds)
        if self.bounds is not None:
            self.bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)

    def validate(self) -> "ExperimentConfig":
        if (self.benchmark is None) == (self.objective_cmd is None):
            raise ConfigError(
                "exactly one of benchmark or objective_cmd must be set"
            )
        if self.objective_cmd is not None and self.bounds is None:
            raise ConfigError("external objectives require explicit bounds")
        if self.direction not in ("min", "max"):
            raise ConfigError(f"direction must be 'min' or 'max', got {self.direction!r}")
        for name in ("budget", "n_init", "batch"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if self.budget < self.n_init:
            raise ConfigError("budget must be at least n_init")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        for s in self.seeds:
            check_seed(s)
        return self

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["seeds"] = list(self.seeds)
        d["bounds"] = None if self.bounds is None else [list(b) for b in self.bounds]
        return d

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        raw = dict(raw)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {sorted(unknown)}")
        params = raw.pop("params", None)
        cfg = cls(**raw)
        if params is not None:
            cfg.params = (
                params if isinstance(params, MethodParams) else _params_from_dict(params)
            )
        return cfg


def preset(method: str, dim: int, **overrides) -> ExperimentConfig:
    """Experiment skeleton for a named method at a given dimension.

    Bandwidth bases and the dimension-dependent perturbation probability
    and candidate count are resolved here; run fields (benchmark, budget,
    seeds, ...) come from ``overrides`` or the caller.
    """
    method = canonical_method(method)
    if method == METHOD_RP:
        # Interpolating members disagree only mildly between points, so the
        # prior amplitude is raised to keep the exploration signal above
        # the acquisition's underflow region.
        params = MethodParams(h0_prior=0.075, output_scale=10.0)
    else:
        params = MethodParams(
            h0_low=0.05,
            h0_high=0.2,
            h0_prior=0.005,
            trust_region=(method == METHOD_KR_HYB_TR),
        )
    params.p_perturb = perturbation_probability(dim)
    params.n_candidates = default_n_candidates(dim)
    raw_params = overrides.pop("params", None)
    cfg = ExperimentConfig(method=method, params=params, **overrides)
    if raw_params is not None:
        cfg.params = (
            raw_params
            if isinstance(raw_params, MethodParams)
            else _params_from_dict(raw_params)
        )
    return cfg


def _make_acquisition(params: MethodParams):
    name = params.acquisition.lower()
    if name == "ei":
        return ExpectedImprovement(tau=params.tau)
    if name == "pi":
        # PI needs a strictly positive tolerance to stop scoring sure losses.
        return ProbabilityOfImprovement(tau=params.tau if params.tau > 0 else 0.01)
    if name == "ucb":
        return UpperConfidenceBound(beta0=params.beta0, tau=params.tau)
    raise ConfigError(f"unknown acquisition {params.acquisition!r}")


def build_components(
    method: str, params: MethodParams, dim: int, seed: int, batch: int = 1
):
    """Instantiate (worthiness function, candidate proposer) for one run."""
    method = canonical_method(method)
    prior_rng = substream(seed, PRIOR)
    if method == METHOD_RP:
        ensemble = RandomizedPriorEnsemble(
            n_members=params.n_members,
            h0_prior=params.h0_prior,
            hidden_width=params.hidden_width,
            output_scale=params.output_scale,
            bootstrap=False,
            random_state=prior_rng,
        )
        surrogate = EnsembleMeanView(ensemble)
        uncertainty = EnsembleSpreadView(ensemble)
    else:
        surrogate = KernelRegressionSurrogate(params.h0_low, params.h0_high)
        uncertainty = HybridUncertainty(
            h0_prior=params.h0_prior,
            n_members=params.n_members,
            hidden_width=params.hidden_width,
            output_scale=params.output_scale,
            bootstrap=True,
            random_state=prior_rng,
        )
    ew = EvaluationWorthiness(surrogate, uncertainty, _make_acquisition(params))
    if method == METHOD_KR_HYB_TR or params.trust_region:
        proposer = TrustRegionProposer(
            dim,
            seed,
            p_perturb=params.p_perturb,
            n_candidates=params.n_candidates,
            batch=batch,
            length_init=params.tr_length_init,
            length_min=params.tr_length_min,
            length_max=params.tr_length_max,
            success_threshold=params.tr_success_threshold,
        )
    else:
        proposer = SobolPerturbProposer(
            dim, seed, p_perturb=params.p_perturb, n_candidates=params.n_candidates
        )
    return ew, proposer


class EnsembleMeanView:
    """Surrogate face of a shared randomized-prior ensemble.

    Pair it with :class:`EnsembleSpreadView`, which owns refitting; this
    view only fits the ensemble when it has never been fitted at all.
    """

    def __init__(self, ensemble: RandomizedPriorEnsemble):
        self.ensemble = ensemble

    def fit(self, X, y):
        if not hasattr(self.ensemble, "priors_"):
            self.ensemble.fit(X, y)
        return self

    def predict(self, X):
        return self.ensemble.predict(X)

    @property
    def label_scale_(self):
        return self.ensemble.label_scale_


class EnsembleSpreadView:
    """Uncertainty face of a shared ensemble; owns the (single) fit."""

    def __init__(self, ensemble: RandomizedPriorEnsemble):
        self.ensemble = ensemble

    def fit(self, X, y):
        self.ensemble.fit(X, y)
        return self

    def predict(self, X):
        members = self.ensemble.member_predictions_standardized(X)
        return self.ensemble.label_scale_ * members.std(axis=0, ddof=1)

    @property
    def label_scale_(self):
        return self.ensemble.label_scale_


def build_calibration_pair(method: str, seed: int = 0):
    """Surrogate/uncertainty pair for the coverage study (unfitted)."""
    prior_rng = substream(seed, PRIOR)
    if method == "GP":
        return GaussianProcessSurrogate(), GaussianProcessUncertainty()
    if method == "RP":
        ensemble = RandomizedPriorEnsemble(
            h0_prior=0.075, bootstrap=False, random_state=prior_rng
        )
        return EnsembleMeanView(ensemble), EnsembleSpreadView(ensemble)
    if method == "KR+Hybrid":
        # Calibration profile: a near-interpolating lower bandwidth keeps
        # residuals decaying with distance (bounding the multiplier), and a
        # wider, larger ensemble makes the spread track local roughness.
        return (
            KernelRegressionSurrogate(0.01, 0.2),
            HybridUncertainty(
                h0_prior=0.075, n_members=40, bootstrap=True, random_state=prior_rng
            ),
        )
    raise ConfigError(
        f"unknown calibration method {method!r}; "
        f"available: {', '.join(CALIBRATION_METHODS)}"
    )
