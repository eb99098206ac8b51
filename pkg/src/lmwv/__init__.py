"""Wavelet variance of long-memory processes.

Closed-form expansion constants, quadrature checks of the expansion,
circulant-embedding synthesis, undecimated wavelet variance and
log-regression estimation of the memory parameter ``d``.
"""
from .asymptotics import (
    ExpansionCoefficients,
    KExponentReport,
    RemainderProfile,
    adjudicate_K_exponent,
    compute_a2,
    compute_K_tilde,
    compute_M12,
    gamma_bandpass_quadrature,
    gamma_expansion,
    integral_I1,
    integral_I2,
    integral_I3,
    integral_I4,
    remainder_profile,
    theorem1_variance,
)
from .errors import (
    DomainError,
    EmbeddingFailure,
    InputFormatError,
    InsufficientDataError,
    LMWVError,
    NumericalFailure,
    OutOfRegimeError,
)
from .estimator import EstimateResult, Weighting, bias_corrected_fit, fit_log_regression
from .quadrature import QuadratureOptions
from .spectra import (
    HolderClassParams,
    LongMemoryModel,
    Quadratic,
    Tabulated,
    Unit,
    eval_short_memory,
    eval_spectrum,
    holder_class_check,
    sin_power_expansion,
)
from .synthesis import TimeSeries, autocovariance_from_spectrum, synthesize
from .wavelets import (
    DEFAULT_CONVENTION,
    WaveletFilter,
    WaveletVarianceProfile,
    ideal_gain,
    transform,
    wavelet_variance,
)

__version__ = "0.1.0"

__all__ = [
    "ExpansionCoefficients",
    "KExponentReport",
    "RemainderProfile",
    "adjudicate_K_exponent",
    "compute_a2",
    "compute_K_tilde",
    "compute_M12",
    "gamma_bandpass_quadrature",
    "gamma_expansion",
    "integral_I1",
    "integral_I2",
    "integral_I3",
    "integral_I4",
    "remainder_profile",
    "theorem1_variance",
    "DomainError",
    "EmbeddingFailure",
    "InputFormatError",
    "InsufficientDataError",
    "LMWVError",
    "NumericalFailure",
    "OutOfRegimeError",
    "EstimateResult",
    "Weighting",
    "bias_corrected_fit",
    "fit_log_regression",
    "QuadratureOptions",
    "HolderClassParams",
    "LongMemoryModel",
    "Quadratic",
    "Tabulated",
    "Unit",
    "eval_short_memory",
    "eval_spectrum",
    "holder_class_check",
    "sin_power_expansion",
    "TimeSeries",
    "autocovariance_from_spectrum",
    "synthesize",
    "DEFAULT_CONVENTION",
    "WaveletFilter",
    "WaveletVarianceProfile",
    "ideal_gain",
    "transform",
    "wavelet_variance",
]
