"""Gaussian sample paths of a long-memory model by circulant embedding.

Autocovariances follow the inversion convention

    acov(k) = (1 / 2 pi) * integral over [-pi, pi] of S(f) cos(k f) df.

The spectrum is split as ``S = S*(0) S_fd + (S* - S*(0)) S_fd`` with
``S_fd(f) = (2 sin(f/2))^(-2d)``. The first term carries the whole
singularity at ``f = 0`` and has the exact fractionally-differenced
autocovariance; the second is bounded and is integrated with a cosine-weighted
adaptive rule on geometric sub-intervals toward the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .csvio import key_value_text, rows_to_csv
from .errors import DomainError, EmbeddingFailure, NumericalFailure
from .quadrature import DEFAULT_OPTIONS, QuadratureOptions, integrate
from .spectra import LongMemoryModel, Unit

N_CAP = 2 ** 22
EIGEN_CLIP = 1e-8
GENERATOR = "numpy.random.PCG64"
METHOD = "circulant-embedding"
# break points pi/2^m, m = 1..GEOMETRIC_LEVELS, for the cusp of S* - S*(0) at 0
GEOMETRIC_LEVELS = 6


@dataclass(frozen=True)
class TimeSeries:
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise DomainError("a time series needs at least two samples")
        if not np.all(np.isfinite(values)):
            raise DomainError("time series values must be finite")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def to_csv(self) -> str:
        return rows_to_csv(["x"], ((v,) for v in self.values.tolist()))

    def meta_text(self) -> str:
        return key_value_text(self.meta.items())


@dataclass(frozen=True)
class AutocovarianceSequence:
    values: np.ndarray

    @property
    def K_max(self) -> int:
        return self.values.size - 1


def fd_autocovariance(d: float, K_max: int) -> np.ndarray:
    """Exact autocovariance of ``S_fd(f) = (2 sin(f/2))^(-2d)``, lags ``0..K_max``.

    ``acov(0) = Gamma(1-2d) / Gamma(1-d)^2`` and
    ``acov(k) = acov(k-1) (k-1+d) / (k-d)``.
    """
    k = np.arange(1, K_max + 1, dtype=float)
    acov0 = math.exp(gammaln(1 - 2 * d) - 2 * gammaln(1 - d))
    ratios = (k - 1 + d) / (k - d)
    return acov0 * np.concatenate(([1.0], np.cumprod(ratios)))


def _remainder_lag(model: LongMemoryModel, k: int, opts: QuadratureOptions, s0: float) -> float:
    """``(1/pi) * integral over (0, pi] of S_fd(f) (S*(f) - S*(0)) cos(k f) df``."""
    d = model.d
    sm = model.short_memory

    def integrand(f):
        if f == 0.0:
            return 0.0
        return (2.0 * math.sin(0.5 * f)) ** (-2 * d) * (sm(f) - s0)

    edges = [math.pi / 2.0 ** m for m in range(GEOMETRIC_LEVELS, -1, -1)]
    total = 0.0
    kwargs = dict(weight="cos", wvar=k) if k else {}
    pieces = [(0.0, edges[0])] + list(zip(edges[:-1], edges[1:]))
    for a, b in pieces:
        value, _ = integrate(integrand, a, b, opts, what=f"autocovariance at lag {k}", **kwargs)
        total += value
    return total / math.pi


@lru_cache(maxsize=16)
def _cached_autocovariance(model: LongMemoryModel, K_max: int, opts: QuadratureOptions) -> np.ndarray:
    s0 = float(model.short_memory(0.0))
    acov = s0 * fd_autocovariance(model.d, K_max)
    if not isinstance(model.short_memory, Unit):
        for k in range(K_max + 1):
            try:
                acov[k] += _remainder_lag(model, k, opts, s0)
            except NumericalFailure as exc:
                raise NumericalFailure(f"lag {k}: {exc}", exc.error_estimate) from exc
    acov.setflags(write=False)
    return acov


def autocovariance_from_spectrum(model: LongMemoryModel, K_max: int,
                                 opts: QuadratureOptions = DEFAULT_OPTIONS) -> AutocovarianceSequence:
    """Autocovariances at lags ``0..K_max`` of the model's spectral density."""
    if int(K_max) != K_max or K_max < 0:
        raise DomainError(f"K_max must be a non-negative integer, got {K_max}")
    return AutocovarianceSequence(_cached_autocovariance(model, int(K_max), opts))


def embedding_size(N: int) -> int:
    """Smallest power of two ``M >= 2N``."""
    return 1 << (2 * N - 1).bit_length()


def circulant_row(acov: np.ndarray, M: int) -> np.ndarray:
    """First row of the ``M x M`` circulant whose leading block is the Toeplitz covariance."""
    half = M // 2
    return np.concatenate((acov[: half + 1], acov[half - 1: 0: -1]))


def circulant_eigenvalues(acov: np.ndarray, M: int) -> np.ndarray:
    return np.fft.fft(circulant_row(acov, M)).real


def synthesize(model: LongMemoryModel, N: int, seed: int,
               opts: QuadratureOptions = DEFAULT_OPTIONS) -> TimeSeries:
    """Draw an exact Gaussian path of length ``N`` with the model's autocovariance.

    The covariance is embedded in a circulant of size ``M`` (next power of two
    at least ``2N``). Eigenvalues below ``-1e-8 * max`` abort with
    :class:`EmbeddingFailure`; smaller negative ones are clipped to zero.
    The same ``(model, N, seed)`` always gives the same path.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N}")
    if N > N_CAP:
        raise DomainError(f"N is capped at 2^22, got {N}")
    if int(seed) != seed or seed < 0:
        raise DomainError(f"seed must be a non-negative integer, got {seed}")
    N = int(N)
    M = embedding_size(N)
    acov = autocovariance_from_spectrum(model, M // 2, opts).values
    lam = circulant_eigenvalues(acov, M)
    lam_max = lam.max()
    if lam.min() < -EIGEN_CLIP * lam_max:
        raise EmbeddingFailure(
            f"circulant embedding of size {M} has eigenvalue {lam.min():.3g} "
            f"(max {lam_max:.3g}); a larger embedding is needed"
        )
    lam = np.clip(lam, 0.0, None)
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    z = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    path = np.fft.fft(np.sqrt(lam / M) * z).real[:N]
    meta = {
        "d": model.d,
        "short_memory": model.short_memory.describe(),
        "N": N,
        "seed": int(seed),
        "method": METHOD,
        "generator": GENERATOR,
        "embedding_size": M,
    }
    return TimeSeries(path, meta)


def log_periodogram_slope(x, fraction: float = 0.1) -> float:
    """Least-squares slope of log periodogram on log frequency over the lowest ``fraction`` of ``(0, pi]``."""
    x = np.asarray(x, dtype=float)
    N = x.size
    X = np.fft.rfft(x - x.mean())
    f = 2 * math.pi * np.arange(X.size) / N
    keep = (f > 0) & (f <= fraction * math.pi)
    if keep.sum() < 2:
        raise DomainError("too few Fourier frequencies in the requested range")
    power = np.abs(X[keep]) ** 2 / (2 * math.pi * N)
    slope, _ = np.polyfit(np.log(f[keep]), np.log(power), 1)
    return float(slope)
