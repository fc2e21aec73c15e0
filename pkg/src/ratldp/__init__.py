"""Symbol-occurrence statistics and large deviations for primitive rational stochastic models."""
from .errors import ConvergenceError, DomainError, ModelError, NotPrimitiveError, RatLDPError
from .exactdist import (
    MomentSummary,
    SymbolCountDistribution,
    brute_force_distribution,
    empirical_rate,
    exact_distribution,
    moment_generating,
    moments,
    tail,
)
from .model import (
    LinearRepresentation,
    ValidationReport,
    is_primitive,
    load_model,
    parse_model,
    tilt,
    total_weight,
    validate,
    weight_of_word,
)
from .ratefn import RateDomain, RatePoint, binomial_endpoints, binomial_rate, domain, rate, rate_curve, solve_tau
from .sampler import SampleSummary, sample_counts, sample_word
from .spectral import (
    PerronData,
    SpectralCurvePoint,
    curve_point,
    limits_UV,
    perron,
    quasi_power_factor,
    spectral_radius,
)

__version__ = "0.1.0"
