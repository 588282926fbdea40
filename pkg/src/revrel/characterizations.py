"""Inequality checks linking weighted means of the reversed-time functionals.

Twenty checks, each a verifiable statement about a right-truncated model.
They come in three shapes:

* reciprocal products  E[1/(w(X)*g(X))] * E[w(X)*g(X)] >= 1, where g is
  the reversed hazard rate or the inactivity mean and w is an x-weight
  (1, x, x^k, exp(x), a^x, or 1/(alpha+beta*x));
* moment bounds        E[w(X)*rhr(X)] >= closed expression in the raw
  moments and the upper endpoint b;
* mixed-ratio products E[w(X)*g1(X)/g2(X)] * E[w(X)*g2(X)/g1(X)] >= rhs,
  pairing the rate with the inactivity mean or the reversed intensity.

Classification is ratio-based: a converged check reports ratio = lhs/rhs
and the verdict compares the ratio against 1.  On negative supports both
sides of a moment bound can be negative and the literal lhs >= rhs
ordering inverts, while the underlying mean-product inequality keeps the
single orientation ratio >= 1; the ratio form is therefore what gets
classified and what the direction invariant quantifies over.

Each check also knows its claimed equality family.  Four of the twenty
(T3_2, T3_3, T3_6, T3_7) carry a ``suspect`` flag: recomputing the
inactivity mean from their stated equality cdf does not reproduce the
proportionality the equality argument needs, and for three of them the
product integrals demonstrably diverge on that very family.  Suspect
checks still run and report measured behavior, but no equality is ever
asserted for them.

The ``Violation`` verdict (converged ratio below 1 beyond tolerance)
exists so the impossible case is visible rather than silently folded
into the nearest legal verdict; no reachable input should produce it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .distributions import (
    DistributionModel,
    FamilySpec,
    format_family,
    make_distribution,
    model_from_text,
    raw_moment,
)
from .errors import DivergentMoment, ParameterError
from .functionals import numeric_eit, numeric_rhr
from .quadrature import (
    DEFAULT_TOL,
    ExpectationSpec,
    QuadResult,
    QuadStatus,
    Tolerances,
    expectation,
)

__all__ = [
    "CheckReport",
    "CheckSpec",
    "SupportRequirement",
    "TheoremId",
    "Verdict",
    "claimed_equality_pair",
    "default_models",
    "equality_family",
    "expected_equality_pair",
    "make_check",
    "report_records",
    "reports_to_csv",
    "reports_to_json",
    "run_check",
    "run_matrix",
    "theorem_catalog",
]


class TheoremId(Enum):
    T2_1 = "T2_1"
    T2_2 = "T2_2"
    T2_4 = "T2_4"
    T2_5 = "T2_5"
    T2_6 = "T2_6"
    T2_7 = "T2_7"
    T2_8 = "T2_8"
    T2_9 = "T2_9"
    T2_10 = "T2_10"
    T3_1 = "T3_1"
    T3_2 = "T3_2"
    T3_3 = "T3_3"
    T3_4 = "T3_4"
    T3_5 = "T3_5"
    T3_6 = "T3_6"
    T3_7 = "T3_7"
    T4_1 = "T4_1"
    T4_2 = "T4_2"
    T4_3 = "T4_3"
    T4_4 = "T4_4"


class SupportRequirement(Enum):
    Any = "Any"
    Nonnegative = "Nonnegative"
    FiniteB = "FiniteB"


class Verdict(Enum):
    Equality = "Equality"
    StrictInequality = "StrictInequality"
    Divergent = "Divergent"
    DomainMismatch = "DomainMismatch"
    Violation = "Violation"


# check shape: reciprocal product vs single moment bound vs mixed product
_KIND_PRODUCT = "product"
_KIND_MOMENT = "moment-bound"
_KIND_MIXED_ONE = "mixed-product-unit"
_KIND_MIXED_MUSQ = "mixed-product-moment-sq"

_SUSPECT_IDS = frozenset({TheoremId.T3_2, TheoremId.T3_3,
                          TheoremId.T3_6, TheoremId.T3_7})

_EQ_TOL_DEFAULT = 1e-4


@dataclass(frozen=True)
class CheckSpec:
    """One runnable inequality check with its parameters resolved."""

    id: TheoremId
    description: str
    kind: str
    support_requirement: SupportRequirement
    k: Optional[int] = None
    base: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    suspect: bool = False

    def lhs_weights(self, model: DistributionModel) -> Tuple[Callable[[float], float], ...]:
        return _factors(self, model)

    def rhs_value(self, model: DistributionModel) -> float:
        return _rhs(self, model)


@dataclass(frozen=True)
class CheckReport:
    theorem: TheoremId
    family: FamilySpec
    lhs: float
    rhs: float
    gap: float
    ratio: float
    verdict: Verdict
    eq_tol: float
    tol: Tolerances
    components: Tuple[QuadResult, ...] = field(default_factory=tuple)
    suspect: bool = False
    expected_equality: bool = False
    claimed_equality: bool = False
    note: str = ""


# ------------------------------------------------------------ catalog

def make_check(theorem: TheoremId,
               k: Optional[int] = None,
               base: Optional[float] = None,
               alpha: Optional[float] = None,
               beta: Optional[float] = None) -> CheckSpec:
    """Build a CheckSpec for one check id, validating its parameters.

    k defaults: T2_4 -> 2, T2_8 -> 2, T2_10 -> 3, T3_3 -> 2, T4_2/T4_4 -> 1.
    base defaults to 2 for T2_6/T3_7; (alpha, beta) to (1, 0.5) for T3_5.
    """
    tid = theorem
    suspect = tid in _SUSPECT_IDS

    if tid in (TheoremId.T2_1,):
        return CheckSpec(tid, "E[1/rhr(X)] * E[rhr(X)] >= 1",
                         _KIND_PRODUCT, SupportRequirement.Any, suspect=suspect)
    if tid is TheoremId.T2_2:
        return CheckSpec(tid, "E[1/(X*rhr(X))] * E[X*rhr(X)] >= 1, X >= 0",
                         _KIND_PRODUCT, SupportRequirement.Nonnegative)
    if tid is TheoremId.T2_4:
        k = 2 if k is None else k
        if not isinstance(k, int) or k < 2:
            raise ParameterError(f"T2_4 needs integer k >= 2, got {k!r}")
        return CheckSpec(tid, f"E[1/(X^{k}*rhr(X))] * E[X^{k}*rhr(X)] >= 1, X >= 0",
                         _KIND_PRODUCT, SupportRequirement.Nonnegative, k=k)
    if tid is TheoremId.T2_5:
        return CheckSpec(tid, "E[1/(exp(X)*rhr(X))] * E[exp(X)*rhr(X)] >= 1",
                         _KIND_PRODUCT, SupportRequirement.Any)
    if tid is TheoremId.T2_6:
        base = 2.0 if base is None else float(base)
        if not base > 1.0:
            raise ParameterError(f"T2_6 needs base > 1, got {base!r}")
        return CheckSpec(tid, f"E[1/({base:g}^X*rhr(X))] * E[{base:g}^X*rhr(X)] >= 1",
                         _KIND_PRODUCT, SupportRequirement.Any, base=base)
    if tid is TheoremId.T2_7:
        return CheckSpec(tid, "E[X*rhr(X)] >= 2*mu^2/(b^2 - mu_2)",
                         _KIND_MOMENT, SupportRequirement.FiniteB, k=1)
    if tid is TheoremId.T2_8:
        k = 2 if k is None else k
        if not isinstance(k, int) or k < 1:
            raise ParameterError(f"T2_8 needs integer k >= 1, got {k!r}")
        return CheckSpec(tid, f"E[X^{k}*rhr(X)] >= {k + 1}*mu_{k}^2/(b^{k + 1} - mu_{k + 1})",
                         _KIND_MOMENT, SupportRequirement.FiniteB, k=k)
    if tid is TheoremId.T2_9:
        return CheckSpec(tid, "E[rhr(X)/X] >= 2/(b^2 - mu_2)",
                         _KIND_MOMENT, SupportRequirement.FiniteB, k=1)
    if tid is TheoremId.T2_10:
        k = 3 if k is None else k
        if not isinstance(k, int) or k < 1 or k % 2 == 0:
            raise ParameterError(f"T2_10 needs odd integer k >= 1, got {k!r}")
        return CheckSpec(tid, f"E[rhr(X)/X^{k}] >= {k + 1}/(b^{k + 1} - mu_{k + 1})",
                         _KIND_MOMENT, SupportRequirement.FiniteB, k=k)
    if tid is TheoremId.T3_1:
        return CheckSpec(tid, "E[1/eit(X)] * E[eit(X)] >= 1",
                         _KIND_PRODUCT, SupportRequirement.Any)
    if tid is TheoremId.T3_2:
        return CheckSpec(tid, "E[1/(X*eit(X))] * E[X*eit(X)] >= 1, X >= 0",
                         _KIND_PRODUCT, SupportRequirement.Nonnegative, suspect=True)
    if tid is TheoremId.T3_3:
        k = 2 if k is None else k
        if not isinstance(k, int) or k < 1:
            raise ParameterError(f"T3_3 needs integer k >= 1, got {k!r}")
        return CheckSpec(tid, f"E[1/(X^{k}*eit(X))] * E[X^{k}*eit(X)] >= 1, X >= 0",
                         _KIND_PRODUCT, SupportRequirement.Nonnegative, k=k, suspect=True)
    if tid is TheoremId.T3_4:
        return CheckSpec(tid, "E[eit(X)/X] * E[X/eit(X)] >= 1",
                         _KIND_PRODUCT, SupportRequirement.Any)
    if tid is TheoremId.T3_5:
        alpha = 1.0 if alpha is None else float(alpha)
        beta = 0.5 if beta is None else float(beta)
        if not (math.isfinite(alpha) and math.isfinite(beta)):
            raise ParameterError("T3_5 needs finite alpha and beta")
        if alpha == 0.0 and beta == 0.0:
            raise ParameterError("T3_5 weight alpha+beta*x must not vanish identically")
        return CheckSpec(
            tid,
            f"E[eit(X)/({alpha:g}+{beta:g}*X)] * E[({alpha:g}+{beta:g}*X)/eit(X)] >= 1",
            _KIND_PRODUCT, SupportRequirement.Any, alpha=alpha, beta=beta)
    if tid is TheoremId.T3_6:
        return CheckSpec(tid, "E[1/(exp(X)*eit(X))] * E[exp(X)*eit(X)] >= 1",
                         _KIND_PRODUCT, SupportRequirement.Any, suspect=True)
    if tid is TheoremId.T3_7:
        base = 2.0 if base is None else float(base)
        if not base > 1.0:
            raise ParameterError(f"T3_7 needs base > 1, got {base!r}")
        return CheckSpec(tid, f"E[1/({base:g}^X*eit(X))] * E[{base:g}^X*eit(X)] >= 1",
                         _KIND_PRODUCT, SupportRequirement.Any, base=base, suspect=True)
    if tid is TheoremId.T4_1:
        return CheckSpec(tid, "E[eit(X)/rhr(X)] * E[rhr(X)/eit(X)] >= 1",
                         _KIND_MIXED_ONE, SupportRequirement.Any)
    if tid is TheoremId.T4_2:
        k = 1 if k is None else k
        if not isinstance(k, int) or k < 0:
            raise ParameterError(f"T4_2 needs integer k >= 0, got {k!r}")
        return CheckSpec(tid, f"E[X^{k}*eit(X)/rhr(X)] * E[X^{k}*rhr(X)/eit(X)] >= mu_{k}^2",
                         _KIND_MIXED_MUSQ, SupportRequirement.Any, k=k)
    if tid is TheoremId.T4_3:
        return CheckSpec(tid, "E[rai(X)/rhr(X)] * E[rhr(X)/rai(X)] >= 1",
                         _KIND_MIXED_ONE, SupportRequirement.FiniteB)
    if tid is TheoremId.T4_4:
        k = 1 if k is None else k
        if not isinstance(k, int) or k < 0:
            raise ParameterError(f"T4_4 needs integer k >= 0, got {k!r}")
        return CheckSpec(tid, f"E[X^{k}*rai(X)/rhr(X)] * E[X^{k}*rhr(X)/rai(X)] >= mu_{k}^2",
                         _KIND_MIXED_MUSQ, SupportRequirement.FiniteB, k=k)
    raise ParameterError(f"unknown check id {theorem!r}")


def theorem_catalog() -> Tuple[CheckSpec, ...]:
    """All twenty checks at their default parameters."""
    return tuple(make_check(tid) for tid in TheoremId)


_DEFAULT_MODEL_TEXTS = (
    "type3ev:gamma=2,b=0",
    "power:b=1,c=2",
    "invweibull:nu=1,delta=3",
    "truncevpower:alpha=1.5,b=0",
    "basealinkedrhr:theta=1,a_base=2,b=0",
    "reflweibull:theta=0.5,k=1",
    "finiterange:theta=0.5,b=1,k=1",
    "linearmit:xi=0.8,alpha=1,beta=0.5,b=0",
    "explinkedeit:theta=1,b=0",
    "basealinkedeit:gamma=1,delta=1,a_base=2,b=0",
    "uniform:b=1",
)


def default_models() -> Tuple[DistributionModel, ...]:
    """The eleven-family fixture catalog at its default parameter settings."""
    return tuple(model_from_text(text) for text in _DEFAULT_MODEL_TEXTS)


# ----------------------------------------------------- equality families

def equality_family(theorem: TheoremId, **params: float) -> DistributionModel:
    """Construct the family a check's equality clause names.

    For the four suspect checks this returns the family as printed; the
    package never asserts that those models actually achieve equality.
    Accepted keyword parameters per check (all optional, with defaults):

    * T2_1/T2_7/T2_8/T3_1/T4_1..T4_4: gamma, b      (constant-rate family)
    * T2_2/T3_4: b, c                                (power family)
    * T2_4: k, theta -> shape nu=theta/(k-1), delta=k-1
    * T2_5: alpha, b
    * T2_6: base, theta, b
    * T2_9/T2_10: theta (k fixed to 1 resp. the check's odd k)
    * T3_2/T3_3: theta, b (k fixed to 1 resp. the check's k)  [suspect]
    * T3_5: xi, alpha, beta, b                       (linear-eit family)
    * T3_6: theta, b                                  [suspect]
    * T3_7: base, gamma, delta, b                     [suspect]
    """
    p = dict(params)
    tid = theorem

    def take(key: str, default: float) -> float:
        return float(p.pop(key, default))

    if tid in (TheoremId.T2_1, TheoremId.T2_7, TheoremId.T2_8, TheoremId.T3_1,
               TheoremId.T4_1, TheoremId.T4_2, TheoremId.T4_3, TheoremId.T4_4):
        spec = FamilySpec("type3ev", {"gamma": take("gamma", 1.0), "b": take("b", 0.0)})
    elif tid in (TheoremId.T2_2, TheoremId.T3_4):
        spec = FamilySpec("power", {"b": take("b", 1.0), "c": take("c", 2.0)})
    elif tid is TheoremId.T2_4:
        k = int(p.pop("k", 2))
        if k < 2:
            raise ParameterError(f"T2_4 equality family needs k >= 2, got {k}")
        theta = take("theta", 1.0)
        spec = FamilySpec("invweibull", {"nu": theta / (k - 1), "delta": float(k - 1)})
    elif tid is TheoremId.T2_5:
        spec = FamilySpec("truncevpower", {"alpha": take("alpha", 1.5), "b": take("b", 0.0)})
    elif tid is TheoremId.T2_6:
        spec = FamilySpec("basealinkedrhr", {
            "theta": take("theta", 1.0), "a_base": take("base", 2.0), "b": take("b", 0.0)})
    elif tid in (TheoremId.T2_9, TheoremId.T2_10):
        k = int(p.pop("k", 1 if tid is TheoremId.T2_9 else 3))
        spec = FamilySpec("reflweibull", {"theta": take("theta", 0.5), "k": float(k)})
    elif tid in (TheoremId.T3_2, TheoremId.T3_3):
        k = int(p.pop("k", 1 if tid is TheoremId.T3_2 else 2))
        spec = FamilySpec("finiterange", {
            "theta": take("theta", 0.5), "b": take("b", 1.0), "k": float(k)})
    elif tid is TheoremId.T3_5:
        spec = FamilySpec("linearmit", {
            "xi": take("xi", 0.8), "alpha": take("alpha", 1.0),
            "beta": take("beta", 0.5), "b": take("b", 0.0)})
    elif tid is TheoremId.T3_6:
        spec = FamilySpec("explinkedeit", {"theta": take("theta", 1.0), "b": take("b", 0.0)})
    elif tid is TheoremId.T3_7:
        spec = FamilySpec("basealinkedeit", {
            "gamma": take("gamma", 1.0), "delta": take("delta", 1.0),
            "a_base": take("base", 2.0), "b": take("b", 0.0)})
    else:
        raise ParameterError(f"unknown check id {theorem!r}")
    if p:
        raise ParameterError(
            f"unexpected parameters for {tid.value} equality family: {sorted(p)}")
    return make_distribution(spec)


def expected_equality_pair(check: CheckSpec, model: DistributionModel) -> bool:
    """True when this model structurally achieves equality for the check.

    Decided by what the model's functional IS, not by measuring: the
    reciprocal-product checks collapse to equality exactly when the
    weighted functional w(x)*g(x) is constant, the mixed products when
    the two functionals are proportional, and the moment bounds for the
    constant-rate family (resp. the reflected-power-rate family for the
    reciprocal-x weights).  Members of other families that happen to
    coincide (uniform = power with unit shape; linear-eit with zero
    slope = constant rate) are included.  Suspect checks always return
    False here.
    """
    fam = model.spec.family
    p = model.spec.params
    tid = check.id

    def is_constant_eit() -> bool:
        return fam == "type3ev" or (fam == "linearmit" and p["beta"] == 0.0)

    if tid in (TheoremId.T2_1, TheoremId.T2_7, TheoremId.T2_8, TheoremId.T3_1,
               TheoremId.T4_1, TheoremId.T4_2, TheoremId.T4_3, TheoremId.T4_4):
        return is_constant_eit()
    if tid is TheoremId.T2_2:
        return fam in ("power", "uniform")
    if tid is TheoremId.T2_4:
        return fam == "invweibull" and p["delta"] == float(check.k - 1)
    if tid is TheoremId.T2_5:
        return fam == "truncevpower"
    if tid is TheoremId.T2_6:
        return fam == "basealinkedrhr" and p["a_base"] == check.base
    if tid is TheoremId.T2_9:
        return fam == "reflweibull" and p["k"] == 1.0
    if tid is TheoremId.T2_10:
        return fam == "reflweibull" and p["k"] == float(check.k)
    if tid is TheoremId.T3_4:
        return fam in ("power", "uniform") or (fam == "linearmit" and p["alpha"] == 0.0)
    if tid is TheoremId.T3_5:
        a, bt = check.alpha, check.beta
        if fam == "type3ev":
            return bt == 0.0
        if fam in ("power", "uniform"):
            return a == 0.0
        if fam == "linearmit":
            return p["alpha"] * bt == p["beta"] * a
        return False
    return False


def claimed_equality_pair(check: CheckSpec, model: DistributionModel) -> bool:
    """expected_equality_pair plus the suspect checks' printed claims."""
    if expected_equality_pair(check, model):
        return True
    fam = model.spec.family
    p = model.spec.params
    tid = check.id
    if tid is TheoremId.T3_2:
        return fam == "finiterange" and p["k"] == 1.0
    if tid is TheoremId.T3_3:
        return fam == "finiterange" and p["k"] == float(check.k)
    if tid is TheoremId.T3_6:
        return fam == "explinkedeit"
    if tid is TheoremId.T3_7:
        return fam == "basealinkedeit" and p["a_base"] == check.base
    return False


# --------------------------------------------------------- check runner

def _rhr_callable(model: DistributionModel) -> Callable[[float], float]:
    if model.rhr is not None:
        return model.rhr
    return lambda x: numeric_rhr(model, x)


def _eit_callable(model: DistributionModel) -> Callable[[float], float]:
    if model.eit is not None:
        return model.eit
    return lambda x: numeric_eit(model, x)


def _rai_callable(model: DistributionModel) -> Callable[[float], float]:
    if model.rai is not None:
        return model.rai
    upper = model.support.upper
    phi = _rhr_callable(model)

    def generic(x: float) -> float:
        log_cdf_val = model.log_cdf(x)
        if abs(log_cdf_val) < 1e-12:
            return 1.0
        return (x - upper) * phi(x) / log_cdf_val

    return generic


# Factor integrands are assembled in log-magnitude space with an explicit
# sign.  Component-wise evaluation like 1/(x^2 * rhr(x)) dies long before
# the value does: x^2 underflows to 0 around 1e-154 and the reciprocal
# becomes inf at nodes where the true weight (1/(c*x) after cancellation)
# is perfectly representable, which the engine then misreads as an
# endpoint blow-up.  Summing logs and exponentiating once degrades to
# 0.0 or inf only when the weight value itself leaves float range.
def _log_x_weight(check: CheckSpec) -> Tuple[Callable[[float], float],
                                             Callable[[float], float]]:
    """(log|w|, sign of w) for the check's x-weight."""
    tid = check.id
    plus = lambda x: 1.0
    sign_x = lambda x: 1.0 if x > 0.0 else -1.0
    if tid in (TheoremId.T2_1, TheoremId.T3_1, TheoremId.T4_1, TheoremId.T4_3):
        return (lambda x: 0.0), plus
    if tid in (TheoremId.T2_2, TheoremId.T3_2, TheoremId.T2_7):
        return (lambda x: math.log(abs(x))), sign_x
    if tid in (TheoremId.T2_4, TheoremId.T3_3, TheoremId.T2_8,
               TheoremId.T4_2, TheoremId.T4_4):
        k = check.k
        return (lambda x: k * math.log(abs(x))), (plus if k % 2 == 0 else sign_x)
    if tid in (TheoremId.T2_5, TheoremId.T3_6):
        return (lambda x: x), plus
    if tid in (TheoremId.T2_6, TheoremId.T3_7):
        log_base = math.log(check.base)
        return (lambda x: x * log_base), plus
    if tid in (TheoremId.T2_9, TheoremId.T3_4):
        return (lambda x: -math.log(abs(x))), sign_x
    if tid is TheoremId.T2_10:
        k = check.k  # odd
        return (lambda x: -k * math.log(abs(x))), sign_x
    if tid is TheoremId.T3_5:
        a, bt = check.alpha, check.beta
        return (lambda x: -math.log(abs(a + bt * x))), \
               (lambda x: 1.0 if a + bt * x > 0.0 else -1.0)
    raise ParameterError(f"no weight for {tid!r}")


def _signed_exp(sign: float, mag: float) -> float:
    try:
        return sign * math.exp(mag)
    except OverflowError:
        return sign * math.inf


def _factors(check: CheckSpec, model: DistributionModel) -> Tuple[Callable[[float], float], ...]:
    tid = check.id
    lw, sgn = _log_x_weight(check)
    if check.kind == _KIND_PRODUCT:
        g = _eit_callable(model) if tid.value.startswith("T3") else _rhr_callable(model)

        def linked(x: float) -> float:
            return _signed_exp(sgn(x), lw(x) + math.log(g(x)))

        def reciprocal(x: float) -> float:
            return _signed_exp(sgn(x), -lw(x) - math.log(g(x)))

        return (reciprocal, linked)
    if check.kind == _KIND_MOMENT:
        phi = _rhr_callable(model)
        return (lambda x: _signed_exp(sgn(x), lw(x) + math.log(phi(x))),)
    # mixed products
    phi = _rhr_callable(model)
    other = _rai_callable(model) if tid in (TheoremId.T4_3, TheoremId.T4_4) \
        else _eit_callable(model)

    def over(x: float) -> float:
        return _signed_exp(sgn(x), lw(x) + math.log(other(x)) - math.log(phi(x)))

    def under(x: float) -> float:
        return _signed_exp(sgn(x), lw(x) + math.log(phi(x)) - math.log(other(x)))

    return (over, under)


def _rhs(check: CheckSpec, model: DistributionModel) -> float:
    kind = check.kind
    if kind == _KIND_PRODUCT or kind == _KIND_MIXED_ONE:
        return 1.0
    if kind == _KIND_MIXED_MUSQ:
        mu_k = raw_moment(model, check.k)
        return mu_k * mu_k
    # moment bounds
    k = check.k
    b = model.support.upper
    denom = b ** (k + 1) - raw_moment(model, k + 1)
    if denom == 0.0:
        raise DivergentMoment(
            f"degenerate moment denominator b^{k + 1} - mu_{k + 1} = 0")
    if check.id in (TheoremId.T2_7, TheoremId.T2_8):
        mu_k = raw_moment(model, k)
        return (k + 1) * mu_k * mu_k / denom
    return (k + 1) / denom


def _support_mismatch(check: CheckSpec, model: DistributionModel) -> Optional[str]:
    lo, hi = model.support.lower, model.support.upper
    if check.support_requirement is SupportRequirement.Nonnegative and lo < 0.0:
        return "support extends below zero"
    if check.support_requirement is SupportRequirement.FiniteB and not math.isfinite(hi):
        return "support is unbounded above"
    # ratio weights must keep one sign on the interior
    if check.id is TheoremId.T3_4 and lo < 0.0 < hi:
        return "weight 1/x changes sign inside the support"
    if check.id is TheoremId.T3_5 and check.beta != 0.0:
        root = -check.alpha / check.beta
        if lo < root < hi:
            return "weight 1/(alpha+beta*x) changes sign inside the support"
    return None


def run_check(check: CheckSpec, model: DistributionModel,
              tol: Optional[Tolerances] = None,
              eq_tol: float = _EQ_TOL_DEFAULT) -> CheckReport:
    """Evaluate one check against one model and classify the outcome.

    All failure modes are verdicts, never exceptions: a support the
    check does not cover is DomainMismatch, any component integral or
    required moment that fails to converge is Divergent.
    """
    if not eq_tol > 0.0:
        raise ParameterError(f"eq_tol must be positive, got {eq_tol!r}")
    tol = tol or DEFAULT_TOL
    expected = expected_equality_pair(check, model)
    claimed = claimed_equality_pair(check, model)
    nan = math.nan

    def report(verdict: Verdict, lhs: float = nan, rhs: float = nan,
               gap: float = nan, ratio: float = nan,
               components: Tuple[QuadResult, ...] = (), note: str = "") -> CheckReport:
        return CheckReport(
            theorem=check.id, family=model.spec, lhs=lhs, rhs=rhs, gap=gap,
            ratio=ratio, verdict=verdict, eq_tol=eq_tol, tol=tol,
            components=components, suspect=check.suspect,
            expected_equality=expected, claimed_equality=claimed, note=note)

    mismatch = _support_mismatch(check, model)
    if mismatch is not None:
        return report(Verdict.DomainMismatch, note=mismatch)

    try:
        rhs = _rhs(check, model)
    except DivergentMoment as exc:
        return report(Verdict.Divergent, note=str(exc))

    results = tuple(expectation(ExpectationSpec(model, w), tol)
                    for w in check.lhs_weights(model))
    bad = [r for r in results if r.status is not QuadStatus.Converged]
    if bad:
        note = "; ".join(f"component {i} {r.status.value}"
                         for i, r in enumerate(results)
                         if r.status is not QuadStatus.Converged)
        return report(Verdict.Divergent, rhs=rhs, components=results, note=note)

    lhs = 1.0
    for r in results:
        lhs *= r.value
    gap = lhs - rhs
    if rhs != 0.0:
        ratio = lhs / rhs
    else:
        ratio = nan
    if math.isnan(ratio):
        verdict = Verdict.Violation if lhs < 0.0 else (
            Verdict.Equality if lhs == 0.0 else Verdict.StrictInequality)
    elif abs(ratio - 1.0) <= eq_tol:
        verdict = Verdict.Equality
    elif ratio > 1.0:
        verdict = Verdict.StrictInequality
    else:
        verdict = Verdict.Violation
    return report(verdict, lhs=lhs, rhs=rhs, gap=gap, ratio=ratio,
                  components=results)


def run_matrix(models: Optional[Sequence[DistributionModel]] = None,
               checks: Optional[Sequence[CheckSpec]] = None,
               tol: Optional[Tolerances] = None,
               eq_tol: float = _EQ_TOL_DEFAULT) -> Tuple[CheckReport, ...]:
    """Cross-product of checks x models, check-major then model-minor."""
    if models is None:
        models = default_models()
    if checks is None:
        checks = theorem_catalog()
    return tuple(run_check(c, m, tol, eq_tol) for c in checks for m in models)


# --------------------------------------------------------- serialization

def _num(v: float) -> Optional[float]:
    return float(v) if isinstance(v, (int, float)) and math.isfinite(v) else None


def report_records(reports: Sequence[CheckReport]) -> List[Dict[str, object]]:
    """Stable-schema records, one per report, ready for JSON or CSV."""
    records: List[Dict[str, object]] = []
    for r in reports:
        text = format_family(r.family)
        family, _, params = text.partition(":")
        records.append({
            "theorem": r.theorem.value,
            "family": family,
            "params": params,
            "lhs": _num(r.lhs),
            "rhs": _num(r.rhs),
            "ratio": _num(r.ratio),
            "gap": _num(r.gap),
            "verdict": r.verdict.value,
            "err_estimates": [_num(c.err_estimate) for c in r.components],
            "suspect": r.suspect,
            "expected_equality": r.expected_equality,
            "claimed_equality": r.claimed_equality,
            "note": r.note,
        })
    return records


def reports_to_json(reports: Sequence[CheckReport]) -> str:
    return json.dumps(report_records(reports), indent=2)


_CSV_FIELDS = ("theorem", "family", "params", "lhs", "rhs", "ratio", "gap",
               "verdict", "err_estimates", "suspect", "expected_equality",
               "claimed_equality", "note")


def reports_to_csv(reports: Sequence[CheckReport]) -> str:
    lines = [",".join(_CSV_FIELDS)]
    for rec in report_records(reports):
        row = []
        for name in _CSV_FIELDS:
            v = rec[name]
            if v is None:
                row.append("")
            elif name == "err_estimates":
                row.append(";".join("" if e is None else repr(e) for e in v))
            elif isinstance(v, bool):
                row.append("true" if v else "false")
            elif isinstance(v, float):
                row.append(repr(v))
            else:
                cell = str(v)
                if "," in cell or '"' in cell:
                    cell = '"' + cell.replace('"', '""') + '"'
                row.append(cell)
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
