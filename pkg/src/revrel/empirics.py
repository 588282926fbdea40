"""Plug-in estimation of the inactivity mean and family ranking from data.

Everything here is estimation plumbing layered over sorted samples.  The
inactivity mean has a clean empirical counterpart: replace the cdf by
the empirical cdf and the estimate at t becomes the average of (t - x_i)
over the sample points at or below t.  The product-form checks built on
the inactivity mean (and only those; the rate-based checks would need
density estimation, which is out of scope) then get plug-in gap
statistics, and ranking candidates by how close their characterizing
ratio sits to 1 gives a crude but usable identification procedure.

The smallest order statistics make 1/m-hat explode, so gap statistics
evaluate only above a trimmed fraction of the sample (default 0.05) and
never at the minimum itself, where the estimate is exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np

from .characterizations import TheoremId
from .errors import NoMass, ParameterError, TooFewPoints

__all__ = [
    "DEFAULT_CANDIDATES",
    "GapStatistic",
    "RankedCandidate",
    "RankingReport",
    "SampleSet",
    "empirical_eit",
    "gap_statistics",
    "identify",
    "read_samples",
]


@dataclass(frozen=True)
class SampleSet:
    """Sorted finite sample; the constructor sorts whatever order comes in."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ParameterError("sample must be a nonempty 1-d array")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("sample values must all be finite")
        object.__setattr__(self, "values", np.sort(arr))

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class GapStatistic:
    theorem: TheoremId
    lhs_hat: float
    rhs_hat: float
    ratio_hat: float
    trimmed_fraction: float


@dataclass(frozen=True)
class RankedCandidate:
    family: str
    theorem: TheoremId
    ratio_hat: float
    score: float   # |ratio_hat - 1|, smaller is better
    spread: float  # tie-break: |ratio(trim=0.02) - ratio(trim=0.10)|


@dataclass(frozen=True)
class RankingReport:
    n: int
    trim: float
    ranking: Tuple[RankedCandidate, ...] = field(default_factory=tuple)


# label -> characterizing product check on the inactivity mean:
# constant m, m inverse-linked to x, m proportional to x
DEFAULT_CANDIDATES: Tuple[Tuple[str, TheoremId], ...] = (
    ("type3ev", TheoremId.T3_1),
    ("finiterange", TheoremId.T3_2),
    ("power", TheoremId.T3_4),
)

_SUPPORTED = frozenset({TheoremId.T3_1, TheoremId.T3_2, TheoremId.T3_4})


def empirical_eit(sample: SampleSet, t: float) -> float:
    """Average of (t - x_i) over sample points x_i <= t.

    Raises NoMass below the sample minimum, where the empirical cdf
    vanishes and the conditional mean is undefined.
    """
    vals = sample.values
    k = int(np.searchsorted(vals, t, side="right"))
    if k == 0:
        raise NoMass(f"no sample mass at or below t={t!r}")
    return float(t - vals[:k].sum() / k)


def _eit_at_order_statistics(vals: np.ndarray) -> np.ndarray:
    # m-hat at x_(i) via prefix sums: x_(i) - mean(x_(1..i)), 0-based here
    prefix = np.cumsum(vals)
    idx = np.arange(1, vals.size + 1, dtype=float)
    return vals - prefix / idx


def gap_statistics(sample: SampleSet, trim: float = 0.05) -> Tuple[GapStatistic, ...]:
    """Plug-in product ratios for the inactivity-mean product checks.

    Evaluates m-hat at every order statistic above the trimmed head of
    the sample (never at the minimum, where m-hat is exactly 0), then
    averages each check's two weight transforms and reports the product
    of the averages as ratio_hat.  Order statistics exactly at zero are
    skipped in the x-weighted transforms.
    """
    if not 0.0 <= trim < 1.0:
        raise ParameterError(f"trim must lie in [0, 1), got {trim!r}")
    n = sample.n
    if n < 50:
        raise TooFewPoints(f"need at least 50 points, got {n}")
    vals = sample.values
    m_hat = _eit_at_order_statistics(vals)
    start = max(math.ceil(trim * n) + 1, 2)  # 1-based order statistic index
    m_used = m_hat[start - 1:]
    x_used = vals[start - 1:]

    out = []
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # constant inactivity mean: mean(1/m) * mean(m)
        lhs = float(np.mean(1.0 / m_used))
        inv_rhs = float(np.mean(m_used))
        out.append(GapStatistic(TheoremId.T3_1, lhs,
                                _safe_recip(inv_rhs), lhs * inv_rhs, trim))

        nz = x_used != 0.0
        xm = x_used[nz] * m_used[nz]
        lhs = float(np.mean(1.0 / xm))
        inv_rhs = float(np.mean(xm))
        out.append(GapStatistic(TheoremId.T3_2, lhs,
                                _safe_recip(inv_rhs), lhs * inv_rhs, trim))

        ratio_mx = m_used[nz] / x_used[nz]
        lhs = float(np.mean(ratio_mx))
        inv_rhs = float(np.mean(1.0 / ratio_mx))
        out.append(GapStatistic(TheoremId.T3_4, lhs,
                                _safe_recip(inv_rhs), lhs * inv_rhs, trim))
    return tuple(out)


def _safe_recip(v: float) -> float:
    return 1.0 / v if v != 0.0 else math.inf


def _ratio_by_theorem(stats: Sequence[GapStatistic]) -> dict:
    return {s.theorem: s.ratio_hat for s in stats}


def identify(sample: SampleSet,
             candidates: Sequence[Tuple[str, TheoremId]] = DEFAULT_CANDIDATES,
             trim: float = 0.05) -> RankingReport:
    """Rank candidate families by closeness of their plug-in ratio to 1.

    Ties in |ratio_hat - 1| break toward the candidate whose ratio moves
    least when the trim fraction is re-run at 0.02 and 0.10; remaining
    ties keep input order (stable sort).
    """
    for label, theorem in candidates:
        if theorem not in _SUPPORTED:
            raise ParameterError(
                f"candidate {label!r} keyed by {theorem.value}: only "
                "inactivity-mean product checks can be estimated from data")
    main = _ratio_by_theorem(gap_statistics(sample, trim))
    lo = _ratio_by_theorem(gap_statistics(sample, 0.02))
    hi = _ratio_by_theorem(gap_statistics(sample, 0.10))

    ranked = []
    for label, theorem in candidates:
        ratio = main[theorem]
        score = abs(ratio - 1.0)
        if math.isnan(score):
            score = math.inf
        spread = abs(lo[theorem] - hi[theorem])
        if math.isnan(spread):
            spread = math.inf
        ranked.append(RankedCandidate(label, theorem, ratio, score, spread))
    ranked.sort(key=lambda rc: (rc.score, rc.spread))
    return RankingReport(n=sample.n, trim=trim, ranking=tuple(ranked))


def read_samples(path: Union[str, Path]) -> SampleSet:
    """One decimal value per line; '#' comment lines and blanks skipped."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ParameterError(
                    f"{path}: line {lineno}: not a decimal value: {line!r}")
    if not values:
        raise ParameterError(f"{path}: no sample values found")
    return SampleSet(values=np.asarray(values))
