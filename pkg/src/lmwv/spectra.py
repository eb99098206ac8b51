"""Long-memory spectral densities.

A model is the pair ``(d, S*)``: the spectral density is

    S(f) = |1 - exp(-i f)|^(-2d) * S*(f) = (2 sin(|f|/2))^(-2d) * S*(f)

on ``[-pi, pi]`` minus the pole at zero, with ``0 < d < 1/2`` and ``S*`` a
bounded, even, non-negative short-memory factor.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, InputFormatError

_PI = math.pi
# Table must reach pi to within this absolute slack (CSV files carry rounded pi).
_PI_SLACK = 1e-6


class ShortMemorySpec:
    """Base class of the short-memory factor variants."""

    def __call__(self, f):
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Unit(ShortMemorySpec):
    """``S*(f) = 1``."""

    def __call__(self, f):
        return np.ones_like(np.asarray(f, dtype=float)) if np.ndim(f) else 1.0

    def describe(self):
        return "unit"


@dataclass(frozen=True)
class Quadratic(ShortMemorySpec):
    """``S*(f) = 1 + beta f^2``, with no higher-order remainder."""

    beta: float

    def __post_init__(self):
        if not math.isfinite(self.beta):
            raise DomainError(f"beta must be finite, got {self.beta}")

    def __call__(self, f):
        value = 1.0 + self.beta * np.square(f)
        if np.any(value < 0):
            raise DomainError(
                f"1 + beta*f^2 < 0 for beta={self.beta}: model invalid in this band"
            )
        return value if np.ndim(value) else float(value)

    def describe(self):
        return f"quadratic(beta={self.beta!r})"


@dataclass(frozen=True)
class Tabulated(ShortMemorySpec):
    """Piecewise-linear ``S*`` through nodes on ``[0, pi]``, extended evenly."""

    freqs: tuple
    values: tuple
    source: str = field(default="", compare=False)

    def __post_init__(self):
        fs = np.asarray(self.freqs, dtype=float)
        vs = np.asarray(self.values, dtype=float)
        if fs.ndim != 1 or fs.shape != vs.shape or fs.size < 2:
            raise DomainError("tabulated S* needs at least two (f, value) nodes")
        if not (np.all(np.isfinite(fs)) and np.all(np.isfinite(vs))):
            raise DomainError("tabulated nodes must be finite")
        if fs[0] != 0.0:
            raise DomainError(f"first node must be at f=0, got {fs[0]}")
        if np.any(np.diff(fs) <= 0):
            raise DomainError("node frequencies must be strictly increasing")
        if fs[-1] < _PI - _PI_SLACK or fs[-1] > _PI + _PI_SLACK:
            raise DomainError(f"last node must be at f=pi, got {fs[-1]}")
        if np.any(vs < 0):
            raise DomainError("tabulated values must be non-negative")
        object.__setattr__(self, "freqs", tuple(float(x) for x in fs))
        object.__setattr__(self, "values", tuple(float(x) for x in vs))

    @cached_property
    def _arrays(self):
        return np.asarray(self.freqs), np.asarray(self.values)

    def __call__(self, f):
        fs, vs = self._arrays
        out = np.interp(np.abs(f), fs, vs)
        return out if np.ndim(out) else float(out)

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        """Load a table from a CSV file with header ``f,value``."""
        try:
            with open(path, newline="") as fh:
                reader = csv.reader(fh)
                header = [h.strip() for h in next(reader, [])]
                if header != ["f", "value"]:
                    raise InputFormatError(f"{path}: expected header 'f,value', got {header}")
                rows = [r for r in reader if r and any(c.strip() for c in r)]
            freqs = [float(r[0]) for r in rows]
            values = [float(r[1]) for r in rows]
        except (OSError, ValueError, IndexError) as exc:
            raise InputFormatError(f"{path}: cannot read tabulated S* ({exc})") from exc
        try:
            return cls(tuple(freqs), tuple(values), source=str(path))
        except DomainError as exc:
            raise InputFormatError(f"{path}: {exc}") from exc

    def describe(self):
        label = self.source or f"{len(self.freqs)} nodes"
        return f"tabulated({label})"


@dataclass(frozen=True)
class LongMemoryModel:
    d: float
    short_memory: ShortMemorySpec = Unit()

    def __post_init__(self):
        check_memory_parameter(self.d)

    def describe(self) -> str:
        return f"d={self.d!r} short_memory={self.short_memory.describe()}"


@dataclass(frozen=True)
class HolderClassParams:
    """Exponent ``beta_h`` in (0, 2] and constant ``L > 0`` of the class."""

    beta_h: float
    L: float

    def __post_init__(self):
        if not 0 < self.beta_h <= 2:
            raise DomainError(f"beta_h must lie in (0, 2], got {self.beta_h}")
        if not self.L > 0:
            raise DomainError(f"L must be > 0, got {self.L}")


@dataclass(frozen=True)
class HolderReport:
    member: bool
    worst_f: float
    worst_excess: float
    worst_ratio: float


def check_memory_parameter(d) -> None:
    if not 0 < d < 0.5:
        raise DomainError(f"d must lie in the open interval (0, 1/2), got {d}")


def eval_short_memory(spec: ShortMemorySpec, f):
    f_arr = np.asarray(f, dtype=float)
    if np.any(np.abs(f_arr) > _PI):
        raise DomainError(f"f must lie in [-pi, pi], got {f}")
    return spec(f)


def eval_spectrum(model: LongMemoryModel, f):
    """Spectral density ``(2 sin(|f|/2))^(-2d) * S*(f)`` at ``f`` (scalar or array).

    The sine form avoids the cancellation in ``|1 - exp(-if)|`` near the pole.
    """
    f_arr = np.asarray(f, dtype=float)
    if np.any(f_arr == 0):
        raise DomainError("spectral density has a pole at f=0")
    if np.any(np.abs(f_arr) > _PI):
        raise DomainError(f"f must lie in [-pi, pi], got {f}")
    base = (2.0 * np.sin(0.5 * np.abs(f_arr))) ** (-2.0 * model.d)
    out = base * model.short_memory(f_arr)
    return out if np.ndim(out) else float(out)


def sin_power_expansion(f, d):
    """Two-term expansion ``(f/2)^(-2d) + (2d/6) (f/2)^(2(1-d))`` of ``sin(f/2)^(-2d)``.

    Only arithmetic operators are used, so high-precision scalar types (for
    example ``mpmath.mpf``) pass through unchanged.
    """
    if not f > 0:
        raise DomainError(f"f must be > 0, got {f}")
    if f > _PI / 2:
        raise DomainError(f"f must be <= pi/2, got {f}")
    check_memory_parameter(d)
    half = f / 2
    return half ** (-2 * d) + (2 * d / 6) * half ** (2 * (1 - d))


def holder_class_check(spec: ShortMemorySpec, params: HolderClassParams,
                       grid_size: int = 1024) -> HolderReport:
    """Test ``|g(f) - g(0)| <= L g(0) |f|^beta_h`` on a uniform grid of ``(0, pi]``.

    Frequencies are in radians, i.e. the cycles-based class with ``2 pi f``
    rescaled to ``f``. Since ``g`` is even only the positive half is scanned.
    The worst point is where ``lhs - rhs`` is largest; a few ulps of slack
    absorb the rounding in ``g(f) - g(0)``.
    """
    if grid_size < 2:
        raise DomainError(f"grid_size must be >= 2, got {grid_size}")
    g0 = float(spec(0.0))
    if not g0 > 0:
        raise DomainError("Holder-class membership is undefined when g(0) = 0")
    f = _PI * np.arange(1, grid_size + 1) / grid_size
    g = np.asarray(spec(f), dtype=float)
    lhs = np.abs(g - g0)
    rhs = params.L * g0 * f ** params.beta_h
    slack = 4 * np.finfo(float).eps * (np.abs(g) + g0)
    excess = lhs - rhs
    i = int(np.argmax(excess))
    return HolderReport(
        member=bool(np.all(excess <= slack)),
        worst_f=float(f[i]),
        worst_excess=float(excess[i]),
        worst_ratio=float(lhs[i] / rhs[i]),
    )
