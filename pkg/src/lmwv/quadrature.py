"""Adaptive quadrature behind a small options record.

QUADPACK (through :func:`scipy.integrate.quad`) does the subdivision and
Gauss-Kronrod error estimation; this module fixes the tolerance contract and
turns silent non-convergence into :class:`~lmwv.errors.NumericalFailure`.
"""
from __future__ import annotations

from dataclasses import dataclass

from scipy.integrate import quad

from .errors import DomainError, NumericalFailure

# QUADPACK refuses relative tolerances below this when abs_tol is zero.
_MIN_REL_TOL = 50 * 2.220446049250313e-16


@dataclass(frozen=True)
class QuadratureOptions:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise DomainError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError(
                f"max_subdivisions must be a positive integer, got {self.max_subdivisions}"
            )
        if self.abs_tol == 0 and self.rel_tol < _MIN_REL_TOL:
            raise DomainError(f"rel_tol must be >= {_MIN_REL_TOL:.3g} when abs_tol is 0")


DEFAULT_OPTIONS = QuadratureOptions()


def integrate(func, a, b, opts=DEFAULT_OPTIONS, *, points=None, weight=None, wvar=None,
              what="integral"):
    """Integrate ``func`` over ``[a, b]`` to the accuracy requested in ``opts``.

    Returns ``(value, error_estimate)``. Raises :class:`NumericalFailure` when
    QUADPACK reports a problem or its error estimate exceeds
    ``max(rel_tol * |value|, abs_tol)``.
    """
    kwargs = dict(
        epsabs=opts.abs_tol,
        epsrel=opts.rel_tol,
        limit=int(opts.max_subdivisions),
        full_output=1,
    )
    if points is not None:
        kwargs["points"] = points
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
    out = quad(func, a, b, **kwargs)
    value, err = float(out[0]), float(out[1])
    ier = 0 if len(out) == 3 else 1
    tol = max(opts.rel_tol * abs(value), opts.abs_tol)
    if ier or not err <= tol:
        reason = out[3].splitlines()[0] if len(out) > 3 else "error estimate above tolerance"
        raise NumericalFailure(
            f"{what} on [{a:.6g}, {b:.6g}] did not converge "
            f"(estimate {err:.3g}, tolerance {tol:.3g}): {reason}",
            error_estimate=err,
        )
    return value, err
