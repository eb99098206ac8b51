"""Memory-parameter estimation by regression of log2 wavelet variance on scale.

Since ``gamma(j) ~ K_tilde 2^(2dj)``, the slope of ``log2 gamma(j)`` against
``j`` is ``2d`` and the intercept estimates ``log2 K_tilde``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .asymptotics import compute_a2
from .csvio import key_value_text, rows_to_csv
from .errors import DomainError, InsufficientDataError
from .wavelets import WaveletVarianceProfile

DEFAULT_J_MIN = 3


class Weighting(str, enum.Enum):
    UNIFORM = "uniform"
    BYCOUNT = "bycount"


@dataclass(frozen=True)
class EstimateResult:
    d_hat: float
    slope: float
    intercept: float
    stderr_d: float
    r_squared: float
    j_min: int
    j_max: int
    weighting: Weighting
    excluded: tuple = ()
    corrected: bool = False
    fallback: bool = False

    _FIELDS = ("d_hat", "slope", "intercept", "stderr_d", "r_squared", "j_min", "j_max", "weighting")

    def _values(self):
        return [getattr(self, k) if k != "weighting" else self.weighting.value for k in self._FIELDS]

    def to_key_value(self) -> str:
        items = list(zip(self._FIELDS, self._values()))
        items.append(("excluded", " ".join(str(j) for j in self.excluded)))
        if self.corrected or self.fallback:
            items += [("corrected", self.corrected), ("fallback", self.fallback)]
        return key_value_text(items)

    def to_csv(self) -> str:
        return rows_to_csv(self._FIELDS, [self._values()])


def _weighted_line(x, y, w):
    """Weighted least squares ``y = a + b x``; returns ``(b, a, se_b, r2)``."""
    sw = w.sum()
    xm = np.dot(w, x) / sw
    ym = np.dot(w, y) / sw
    sxx = np.dot(w, (x - xm) ** 2)
    slope = np.dot(w, (x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    ss_res = float(np.dot(w, resid ** 2))
    ss_tot = float(np.dot(w, (y - ym) ** 2))
    dof = x.size - 2
    se = math.sqrt(ss_res / dof / sxx) if dof > 0 else math.inf
    # a flat profile leaves only rounding noise in ss_tot
    noise = (64 * np.finfo(float).eps * float(np.max(np.abs(y)))) ** 2 * sw
    if ss_tot > noise:
        r2 = min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)
    else:
        r2 = 1.0
    return float(slope), float(intercept), se, r2


def _select(profile: WaveletVarianceProfile, j_min: int, j_max: int | None):
    if j_max is None:
        j_max = int(profile.j.max()) if len(profile) else j_min
    if j_min > j_max:
        raise DomainError(f"need j_min <= j_max, got {j_min}, {j_max}")
    in_range = (profile.j >= j_min) & (profile.j <= j_max)
    usable = in_range & (profile.gamma_hat > 0)
    excluded = tuple(int(j) for j in profile.j[in_range & ~usable])
    if usable.sum() < 2:
        raise InsufficientDataError(
            f"need at least two scales with gamma_hat > 0 in [{j_min}, {j_max}], "
            f"found {int(usable.sum())}"
        )
    return usable, excluded, j_min, j_max


def fit_log_regression(profile: WaveletVarianceProfile, j_min: int = DEFAULT_J_MIN,
                       j_max: int | None = None, weighting=Weighting.UNIFORM) -> EstimateResult:
    """Fit ``log2 gamma_hat(j) = intercept + 2 d j`` over ``j_min..j_max``.

    ``bycount`` weights each scale by its coefficient count ``n_eff``.
    Scales with ``gamma_hat == 0`` are left out and listed in ``excluded``.
    """
    weighting = Weighting(weighting)
    usable, excluded, j_min, j_max = _select(profile, j_min, j_max)
    x = profile.j[usable].astype(float)
    y = np.log2(profile.gamma_hat[usable])
    w = profile.n_eff[usable].astype(float) if weighting is Weighting.BYCOUNT else np.ones_like(x)
    slope, intercept, se_slope, r2 = _weighted_line(x, y, w)
    return EstimateResult(
        d_hat=slope / 2,
        slope=slope,
        intercept=intercept,
        stderr_d=se_slope / 2,
        r_squared=r2,
        j_min=j_min,
        j_max=j_max,
        weighting=weighting,
        excluded=excluded,
    )


def bias_corrected_fit(profile: WaveletVarianceProfile, j_min: int = DEFAULT_J_MIN,
                       j_max: int | None = None, beta_assumed: float = 0.0,
                       weighting=Weighting.UNIFORM, iterations: int = 2) -> EstimateResult:
    """Refit after dividing out the second-order factor ``1 + a2(d_hat, beta) 2^(-2j)``.

    ``a2`` is re-evaluated at the latest ``d_hat`` on each of ``iterations``
    passes. If ``d_hat`` leaves ``(0, 1/2)`` or a correction factor is not
    positive, the uncorrected fit is returned with ``fallback=True``.
    """
    if not math.isfinite(beta_assumed):
        raise DomainError(f"beta_assumed must be finite, got {beta_assumed}")
    base = fit_log_regression(profile, j_min, j_max, weighting)
    result = base
    for _ in range(iterations):
        if not 0 < result.d_hat < 0.5:
            return replace(base, fallback=True)
        factor = 1.0 + compute_a2(result.d_hat, beta_assumed) * 4.0 ** (-profile.j.astype(float))
        used = (profile.j >= base.j_min) & (profile.j <= base.j_max) & (profile.gamma_hat > 0)
        if np.any(factor[used] <= 0):
            return replace(base, fallback=True)
        safe = np.where(factor > 0, factor, 1.0)
        corrected = WaveletVarianceProfile(profile.j, profile.gamma_hat / safe, profile.n_eff)
        result = fit_log_regression(corrected, base.j_min, base.j_max, weighting)
    return replace(result, corrected=True)

