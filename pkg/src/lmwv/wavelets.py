"""Undecimated wavelet coefficients and per-scale wavelet variance.

Two filters are available. ``ideal`` masks the DFT with the square root of
the ideal squared gain (``2^j`` on the octave ``(2 pi/2^(j+1), 2 pi/2^j]``),
so its coefficients have exactly the variance the band-pass integral
predicts. ``d4`` is the maximal-overlap transform with the Daubechies 4-tap
filter, rescaled by ``2^(j/2)`` so that its squared gain approximates the same
``2^j`` on the same octave.

All boundaries are circular.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .csvio import parse_columns, read_table, rows_to_csv
from .errors import DomainError, InputFormatError

# Maps the natural coefficient variance onto 2 pi * integral(H_j S); the
# spectral density inverts to autocovariances with a 1/(2 pi) factor.
DEFAULT_CONVENTION = (2.0 * math.pi) ** 2

_SQRT3 = math.sqrt(3.0)
# Daubechies 4-tap scaling filter, sum = sqrt(2)
D4_SCALING = np.array([1 + _SQRT3, 3 + _SQRT3, 3 - _SQRT3, 1 - _SQRT3]) / (4 * math.sqrt(2.0))
D4_WAVELET = np.array([(-1) ** k * D4_SCALING[3 - k] for k in range(4)])


class WaveletFilter(str, enum.Enum):
    IDEAL = "ideal"
    D4 = "d4"


def ideal_gain(j: int, f):
    """Ideal squared gain: ``2^j`` when ``2 pi/2^(j+1) < |f| <= 2 pi/2^j``, else 0.

    The lower edge is open so that the octaves of successive scales tile
    ``(0, pi]`` without overlap.
    """
    if int(j) != j or j < 1:
        raise DomainError(f"scale j must be an integer >= 1, got {j}")
    f_abs = np.abs(np.asarray(f, dtype=float))
    if np.any(f_abs > math.pi):
        raise DomainError(f"f must lie in [-pi, pi], got {f}")
    lo, hi = 2 * math.pi / 2.0 ** (j + 1), 2 * math.pi / 2.0 ** j
    out = np.where((f_abs > lo) & (f_abs <= hi), 2.0 ** j, 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class WaveletCoefficients:
    """Coefficients ``W[j-1, k]`` for scales ``1..J_max``, each of length ``N``."""

    W: np.ndarray
    filter_id: WaveletFilter
    n_boundary: tuple
    boundary_policy: str = "circular"

    @property
    def J_max(self) -> int:
        return self.W.shape[0]

    @property
    def N(self) -> int:
        return self.W.shape[1]

    def scale(self, j: int) -> np.ndarray:
        return self.W[j - 1]


def _as_values(series) -> np.ndarray:
    x = np.asarray(getattr(series, "values", series), dtype=float)
    if x.ndim != 1:
        raise DomainError("series must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise DomainError("series contains non-finite values")
    return x


def max_scale(N: int) -> int:
    """Largest ``J_max`` with ``N >= 2^(J_max+1)``."""
    return int(math.floor(math.log2(N))) - 1


def _ideal_transform(x: np.ndarray, J_max: int) -> np.ndarray:
    N = x.size
    X = np.fft.rfft(x)
    f = 2 * math.pi * np.fft.rfftfreq(N)
    out = np.empty((J_max, N))
    for j in range(1, J_max + 1):
        mask = np.sqrt(ideal_gain(j, f))
        out[j - 1] = np.fft.irfft(X * mask, n=N)
    return out


def _d4_transform(x: np.ndarray, J_max: int) -> np.ndarray:
    h = D4_WAVELET / math.sqrt(2.0)
    g = D4_SCALING / math.sqrt(2.0)
    v = x
    out = np.empty((J_max, x.size))
    for j in range(1, J_max + 1):
        step = 2 ** (j - 1)
        w = np.zeros_like(v)
        v_next = np.zeros_like(v)
        for l in range(4):
            shifted = np.roll(v, step * l)
            w += h[l] * shifted
            v_next += g[l] * shifted
        out[j - 1] = 2.0 ** (j / 2) * w
        v = v_next
    return out


def transform(series, filter_id=WaveletFilter.IDEAL, J_max: int | None = None) -> WaveletCoefficients:
    """Undecimated wavelet transform of ``series`` for scales ``1..J_max``.

    Parameters
    ----------
    series : TimeSeries or array_like
        Input samples ``X(1..N)``.
    filter_id : WaveletFilter or str
        ``"ideal"`` (DFT masking) or ``"d4"`` (Daubechies 4-tap MODWT).
    J_max : int, optional
        Deepest scale; defaults to the largest allowed, ``floor(log2 N) - 1``.

    Returns
    -------
    WaveletCoefficients
        For ``d4`` the first ``(2^j - 1) * 3`` coefficients of scale ``j``
        wrap around the circular boundary and are flagged in ``n_boundary``.
    """
    x = _as_values(series)
    filter_id = WaveletFilter(filter_id)
    N = x.size
    if J_max is None:
        J_max = max_scale(N)
    if int(J_max) != J_max or J_max < 1:
        raise DomainError(f"J_max must be an integer >= 1, got {J_max}")
    J_max = int(J_max)
    if N < 2 ** (J_max + 1):
        raise DomainError(f"series of length {N} is too short for J_max={J_max} "
                          f"(need N >= {2 ** (J_max + 1)})")
    if np.ptp(x) == 0:
        # constants have no energy in any octave; skip the rounding noise
        W = np.zeros((J_max, N))
    elif filter_id is WaveletFilter.IDEAL:
        W = _ideal_transform(x, J_max)
    else:
        W = _d4_transform(x, J_max)
    if filter_id is WaveletFilter.IDEAL:
        n_boundary = (0,) * J_max
    else:
        n_boundary = tuple(min((2 ** j - 1) * (len(D4_WAVELET) - 1), N) for j in range(1, J_max + 1))
    return WaveletCoefficients(W, filter_id, n_boundary)


@dataclass(frozen=True)
class WaveletVarianceProfile:
    j: np.ndarray
    gamma_hat: np.ndarray
    n_eff: np.ndarray
    dropped: tuple = ()

    def __post_init__(self):
        j = np.asarray(self.j, dtype=int)
        gamma_hat = np.asarray(self.gamma_hat, dtype=float)
        n_eff = np.asarray(self.n_eff, dtype=int)
        if not (j.shape == gamma_hat.shape == n_eff.shape) or j.ndim != 1:
            raise DomainError("profile columns must be one-dimensional and of equal length")
        if np.any(np.diff(j) <= 0):
            raise DomainError("profile scales must be strictly increasing")
        if np.any(gamma_hat < 0) or not np.all(np.isfinite(gamma_hat)):
            raise DomainError("gamma_hat must be finite and non-negative")
        if np.any(n_eff < 1):
            raise DomainError("n_eff must be >= 1 for every retained scale")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "gamma_hat", gamma_hat)
        object.__setattr__(self, "n_eff", n_eff)

    def __len__(self):
        return self.j.size

    def to_csv(self) -> str:
        return rows_to_csv(["j", "gamma_hat", "n_eff"],
                           zip(self.j.tolist(), self.gamma_hat.tolist(), self.n_eff.tolist()))

    @classmethod
    def from_csv(cls, path) -> "WaveletVarianceProfile":
        header, rows = read_table(path)
        if header != ["j", "gamma_hat", "n_eff"]:
            raise InputFormatError(f"{path}: expected header 'j,gamma_hat,n_eff'")
        j, g, n = parse_columns(path, header, rows, [int, float, int])
        try:
            return cls(j, g, n)
        except DomainError as exc:
            raise InputFormatError(f"{path}: {exc}") from exc


def wavelet_variance(coeffs: WaveletCoefficients,
                     convention_factor: float = DEFAULT_CONVENTION) -> WaveletVarianceProfile:
    """Per-scale ``convention_factor * mean(W^2)`` over non-boundary coefficients.

    The mean is not subtracted: none of the octaves contains ``f = 0``.
    Scales with no usable coefficient are dropped with a warning and listed
    in ``dropped``.
    """
    js, gammas, counts, dropped = [], [], [], []
    for j in range(1, coeffs.J_max + 1):
        n_eff = coeffs.N - coeffs.n_boundary[j - 1]
        if n_eff <= 0:
            dropped.append(j)
            continue
        w = coeffs.scale(j)[coeffs.n_boundary[j - 1]:]
        js.append(j)
        gammas.append(convention_factor * float(np.sum(w * w)) / n_eff)
        counts.append(n_eff)
    if dropped:
        warnings.warn(f"scales {dropped} have no coefficients clear of the boundary; dropped",
                      RuntimeWarning, stacklevel=2)
    return WaveletVarianceProfile(np.array(js, dtype=int), np.array(gammas), np.array(counts, dtype=int),
                                  tuple(dropped))
