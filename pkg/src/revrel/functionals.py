"""Reversed-time functionals of right-truncated models.

Three quantities drive everything downstream, all defined on the open
interior of the support and tied together by one differential identity:

* reversed hazard rate   phi(t) = f(t) / F(t)
* inactivity mean        m(t)   = (1/F(t)) * integral_a^t F(x) dx
* reversed intensity     L(t)   = (b - t) * phi(t) / integral_t^b phi(x) dx

The identity phi(t) * m(t) = 1 - m'(t) holds wherever both sides exist,
and exp(-integral_t^b phi) reconstructs F(t) when b is finite.  Both are
exposed as residual helpers so tests can exercise the closed forms and
the quadrature engine against each other.

Public accessors prefer a model's closed-form closures and fall back to
quadrature; the ``numeric_*`` variants never consult closed forms, which
makes them usable as independent cross-checks.

Conventions for the reversed intensity: the support must be bounded
above (otherwise ``UnboundedSupport``), the value at t >= b is fixed to
0.0 (the pointwise limit of (b-t)*phi/-log F as F -> 1 is 1, but at b
itself there is no reversed time left, and downstream tables want a
defined number), and |log F| < 1e-12 is treated as the t -> b limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .distributions import DistributionModel
from .errors import (
    DomainError,
    QuadratureError,
    SupportError,
    UnboundedSupport,
)
from .quadrature import (
    QuadStatus,
    Tolerances,
    cdf_cumulative_integral,
    integrate_finite,
)

__all__ = [
    "FunctionalProfile",
    "cdf_from_rhr",
    "eit",
    "functional_profile",
    "numeric_eit",
    "numeric_rhr",
    "rai",
    "rai_integral_form",
    "rhr",
    "rhr_eit_identity_residual",
]

# Residual and reconstruction helpers integrate to much tighter targets
# than the default engine contract; they feed 1e-4 / 1e-6 level checks.
_TIGHT_TOL = Tolerances(rel_tol=1e-12, abs_tol=1e-15)


def _require_interior(model: DistributionModel, t: float) -> None:
    sup = model.support
    if not sup.lower < t <= sup.upper:
        raise SupportError(
            f"t={t!r} outside support ({sup.lower!r}, {sup.upper!r}]")


def rhr(model: DistributionModel, t: float) -> float:
    """Reversed hazard rate f(t)/F(t) at an interior point."""
    _require_interior(model, t)
    if model.rhr is not None:
        return float(model.rhr(t))
    return numeric_rhr(model, t)


def numeric_rhr(model: DistributionModel, t: float) -> float:
    """f(t)/F(t) straight from the density and cdf closures.

    Ignores any closed-form shortcut the model carries, so a mismatch
    between this and ``rhr`` flags a bad closed form.
    """
    _require_interior(model, t)
    cdf_val = model.cdf(t)
    if not cdf_val > 0.0:
        raise DomainError(f"cdf underflows to zero at t={t!r}")
    return model.pdf(t) / cdf_val


def eit(model: DistributionModel, t: float,
        tol: Optional[Tolerances] = None) -> float:
    """Expected inactivity time m(t) = E[t - X | X <= t]."""
    _require_interior(model, t)
    if model.eit is not None:
        return float(model.eit(t))
    return numeric_eit(model, t, tol)


def numeric_eit(model: DistributionModel, t: float,
                tol: Optional[Tolerances] = None) -> float:
    """m(t) by quadrature of the cdf, never via closed forms."""
    _require_interior(model, t)
    cdf_val = model.cdf(t)
    if not cdf_val > 0.0:
        raise DomainError(f"cdf underflows to zero at t={t!r}")
    acc = cdf_cumulative_integral(model, t, tol or _TIGHT_TOL)
    return acc / cdf_val


def rai(model: DistributionModel, t: float) -> float:
    """Reversed aging intensity (b - t) * rhr(t) / (-log F(t)).

    Identically 1 exactly for the exponential-in-reverse family; above 1
    signals faster-than-exponential reversed aging near b, below 1 slower.
    """
    upper = model.support.upper
    if not math.isfinite(upper):
        raise UnboundedSupport("reversed aging intensity needs a finite upper endpoint")
    if t <= model.support.lower:
        raise SupportError(
            f"t={t!r} outside support ({model.support.lower!r}, {upper!r}]")
    if t >= upper:
        return 0.0
    if model.rai is not None:
        return float(model.rai(t))
    log_cdf_val = model.log_cdf(t)
    if abs(log_cdf_val) < 1e-12:
        return 1.0
    return (t - upper) * rhr(model, t) / log_cdf_val


def rai_integral_form(model: DistributionModel, t: float,
                      tol: Optional[Tolerances] = None) -> float:
    """Reversed aging intensity with the denominator integrated numerically.

    Evaluates (b - t) * rhr(t) / integral_t^b rhr(x) dx by quadrature
    instead of using the -log F identity, an independent consistency
    check on the closed cdf / rhr pair.
    """
    upper = model.support.upper
    if not math.isfinite(upper):
        raise UnboundedSupport("reversed aging intensity needs a finite upper endpoint")
    if t <= model.support.lower:
        raise SupportError(
            f"t={t!r} outside support ({model.support.lower!r}, {upper!r}]")
    if t >= upper:
        return 0.0
    res = integrate_finite(lambda x: rhr(model, x), t, upper, tol or _TIGHT_TOL)
    if res.status is not QuadStatus.Converged:
        raise QuadratureError(
            f"rhr integral over ({t!r}, {upper!r}) ended {res.status.value}")
    if res.value <= 0.0:
        raise DomainError(f"rhr integral vanished on ({t!r}, {upper!r})")
    return (upper - t) * rhr(model, t) / res.value


def rhr_eit_identity_residual(model: DistributionModel, t: float) -> float:
    """Residual of rhr(t)*m(t) - (1 - m'(t)), all parts numeric.

    m is integrated to a 1e-12 relative target and m' taken by central
    difference with h ~ 1e-6 * max(1, |t|); the residual on smooth
    families lands around the square of the step, well under 1e-4.
    """
    h = 1e-6 * max(1.0, abs(t))
    upper = model.support.upper
    if math.isfinite(upper) and t + h >= upper:
        h = 0.5 * (upper - t)
        if h <= 0.0:
            raise SupportError(f"t={t!r} too close to the upper endpoint {upper!r}")
    m_mid = numeric_eit(model, t, _TIGHT_TOL)
    m_hi = numeric_eit(model, t + h, _TIGHT_TOL)
    m_lo = numeric_eit(model, t - h, _TIGHT_TOL)
    m_prime = (m_hi - m_lo) / (2.0 * h)
    return numeric_rhr(model, t) * m_mid - (1.0 - m_prime)


def cdf_from_rhr(model: DistributionModel, t: float,
                 tol: Optional[Tolerances] = None) -> float:
    """Reconstruct F(t) as exp(-integral_t^b rhr) for finite b."""
    upper = model.support.upper
    if not math.isfinite(upper):
        raise UnboundedSupport("cdf reconstruction needs a finite upper endpoint")
    _require_interior(model, t)
    if t >= upper:
        return 1.0
    res = integrate_finite(lambda x: rhr(model, x), t, upper, tol or _TIGHT_TOL)
    if res.status is not QuadStatus.Converged:
        raise QuadratureError(
            f"rhr integral over ({t!r}, {upper!r}) ended {res.status.value}")
    return math.exp(-res.value)


@dataclass(frozen=True)
class FunctionalProfile:
    """One table row: the model evaluated at a single interior point."""

    t: float
    cdf: float
    pdf: float
    rhr: float
    eit: float
    rai: Optional[float]


def functional_profile(model: DistributionModel, t: float) -> FunctionalProfile:
    """Evaluate every functional at t; rai is None for unbounded supports."""
    _require_interior(model, t)
    rai_val: Optional[float] = None
    if math.isfinite(model.support.upper):
        rai_val = rai(model, t)
    return FunctionalProfile(
        t=t,
        cdf=model.cdf(t),
        pdf=model.pdf(t),
        rhr=rhr(model, t),
        eit=eit(model, t),
        rai=rai_val,
    )
