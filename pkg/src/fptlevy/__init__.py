"""First-passage times of spectrally negative Lévy processes.

Densities come from Fourier inversion of the characteristic function, with
large-time asymptotes in the stable, Gaussian and exponentially tilted
regimes, unit-recovery-claim pricing, and a Monte Carlo cross-check.
"""

from .cumulant import CumulantStrip, psi, psi_derivatives, psi_inverse
from .errors import (
    AdmissibilityError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    FptError,
    HypothesisError,
    InputError,
    InsufficientSamplesError,
    MartingaleInfeasibleError,
    ModelSpecError,
    NoDensityError,
    NonIntegrabilityError,
    NumericalError,
    RegimeError,
    UnsupportedConfigurationError,
)
from .esscher import EsscherSolution, find_lambda_star, tilt_density_relation
from .fpt import (
    AsymptoteReport,
    FptModel,
    asymptote,
    asymptote_eval,
    fpt_cdf,
    fpt_cdf_curve,
    fpt_density,
    scaling_g,
    stable_constant,
    stable_limit_integral,
    tail_expectation_asymptote,
)
from .inversion import DensityCurve, QuadratureSpec, choose_truncation, density_curve, transition_density
from .levy_model import (
    ExponentialJumps,
    JumpMeasure,
    LevyTriplet,
    ModelDiagnostics,
    NoJumps,
    StableTail,
    TabulatedTail,
    TemperedStableTail,
    diagnose,
    tail_mass,
    truncated_second_moment,
)
from .mc import FptSampleSet, SimConfig, ks_distance, simulate_fpt, simulate_increments
from .modelspec import dump_model, load_model, parse_model
from .pricing import (
    MarketSpec,
    discounted_fpt_integral,
    laplace_fpt,
    risk_neutral_drift,
    risk_neutral_triplet,
    urc_gap_asymptote,
    urc_value,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "AsymptoteReport",
    "ConfigurationError",
    "ConvergenceError",
    "CumulantStrip",
    "DensityCurve",
    "DomainError",
    "EsscherSolution",
    "ExponentialJumps",
    "FptError",
    "FptModel",
    "FptSampleSet",
    "HypothesisError",
    "InputError",
    "InsufficientSamplesError",
    "JumpMeasure",
    "LevyTriplet",
    "MarketSpec",
    "MartingaleInfeasibleError",
    "ModelDiagnostics",
    "ModelSpecError",
    "NoDensityError",
    "NoJumps",
    "NonIntegrabilityError",
    "NumericalError",
    "QuadratureSpec",
    "RegimeError",
    "SimConfig",
    "StableTail",
    "TabulatedTail",
    "TemperedStableTail",
    "UnsupportedConfigurationError",
    "asymptote",
    "asymptote_eval",
    "choose_truncation",
    "density_curve",
    "diagnose",
    "discounted_fpt_integral",
    "dump_model",
    "find_lambda_star",
    "fpt_cdf",
    "fpt_cdf_curve",
    "fpt_density",
    "ks_distance",
    "laplace_fpt",
    "load_model",
    "parse_model",
    "psi",
    "psi_derivatives",
    "psi_inverse",
    "risk_neutral_drift",
    "risk_neutral_triplet",
    "scaling_g",
    "simulate_fpt",
    "simulate_increments",
    "stable_constant",
    "stable_limit_integral",
    "tail_expectation_asymptote",
    "tail_mass",
    "tilt_density_relation",
    "transition_density",
    "truncated_second_moment",
    "urc_gap_asymptote",
    "urc_value",
    "__version__",
]
