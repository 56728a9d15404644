"""Two-boundary hitting probabilities and the total return probability.

For a walk started at k between absorbing levels a < b, the chance of
reaching a before b is a ratio of partial sums of the odds-ratio
products:

    P_k(a, b) = sum_{j=k}^{b-1} rho_{a+1}...rho_j
                ------------------------------------
                1 + sum_{j=a+1}^{b-1} rho_{a+1}...rho_j

Both sums are evaluated as log-sum-exp over slices of the global
``ProductSeries`` table: each inner product is exp(log_prod[j] -
log_prod[a]), and the common -log_prod[a] offset cancels between
numerator and denominator, so the slices are used as they are.

Letting b grow to infinity turns the same ratio into the probability of
ever returning to the origin from site 1: S/(1+S) with S the full series
of products, which is 1 exactly when the series diverges (the recurrent
case).  ``return_prob`` reports that limit with an explicit truncation
bracket in the transient case.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .asymptotics import ShapeTarget, log_shape, resolve_shape
from .classify import is_recurrent
from .errors import ConvergenceWarning, RangeError
from .series import ProductSeries
from .walk import ConstantWalk, iterated_log

__all__ = [
    "HittingQuery",
    "hit_before",
    "TruncationOptions",
    "ReturnProbability",
    "return_prob",
]


@dataclass(frozen=True)
class HittingQuery:
    """Levels for a two-boundary first-passage question: start k, targets a < b."""

    a: int
    k: int
    b: int

    def __post_init__(self):
        if not (0 <= self.a <= self.k <= self.b):
            raise RangeError(f"need 0 <= a <= k <= b, got a={self.a}, k={self.k}, b={self.b}")


def hit_before(series: ProductSeries, q: HittingQuery) -> float:
    """Probability that the walk hits level ``q.a`` before ``q.b`` from ``q.k``.

    Boundary starts are exact: 1.0 at ``k == a``, 0.0 at ``k == b``.
    Requires the series to cover index ``b - 1``.

    Raises:
        RangeError: if ``b - 1 > series.n_max``.
    """
    if q.k == q.a:
        return 1.0
    if q.k == q.b:
        return 0.0
    if q.b - 1 > series.n_max:
        raise RangeError(f"query needs products up to {q.b - 1}, table stops at {series.n_max}")
    # Numerator: j in [k, b); denominator: 1 + sum over j in (a, b), where
    # the leading 1 is the j = a term exp(log_prod[a] - log_prod[a]).
    log_num = logsumexp(series.log_prod[q.k : q.b])
    log_den = logsumexp(series.log_prod[q.a : q.b])
    return float(math.exp(log_num - log_den))


@dataclass(frozen=True)
class TruncationOptions:
    """Controls for the truncated series behind ``return_prob``.

    min_terms is the number of tabulated products the estimate must rest
    on; tolerance is the widest acceptable bracket before a
    ConvergenceWarning is attached.
    """

    min_terms: int = 100_000
    tolerance: float = 1e-6


@dataclass(frozen=True)
class ReturnProbability:
    """Return probability P(hit 0 | start 1) with a truncation bracket.

    value is the midpoint of [lower, upper] (all three coincide for
    recurrent walks, where the answer is exactly 1).  method records how
    the upper end was obtained: "exact-recurrent", "geometric-tail" for
    constant drift, or "shape-tail" for the fitted asymptotic tail.
    """

    value: float
    lower: float
    upper: float
    n_terms: int
    method: str
    tolerance_met: bool


def _log_tail_estimate(series: ProductSeries) -> float:
    """log of an integral tail bound for the convergent product series.

    The products decay like c * shape(n) with shape a product of
    iterated-log powers whose deepest exponent beta exceeds 1; the sum
    beyond n_max is estimated by the integral
    c * (log_{depth} n_max)^(1-beta) / (beta - 1), with c fitted at n_max.
    """
    spec = series.spec
    n = series.n_max
    if isinstance(spec, ConstantWalk):
        # Exact geometric remainder: rho^(n+1) / (1 - rho).
        r = (1.0 - spec.p) / spec.p
        return (n + 1) * math.log(r) - math.log1p(-r)
    shape = resolve_shape(spec, ShapeTarget.PRODUCT)
    deepest = max(d for d, _ in shape.factors)
    beta = next(e for d, e in shape.factors if d == deepest)
    log_c = float(series.log_prod[n]) - log_shape(shape, n)
    return log_c + (1.0 - beta) * math.log(iterated_log(deepest, float(n))) - math.log(beta - 1.0)


def return_prob(series: ProductSeries, opts: TruncationOptions = TruncationOptions()) -> ReturnProbability:
    """Probability of ever hitting the origin from site 1, with bracket.

    Recurrent walks (by the closed-form classification) return exactly 1.
    Transient walks get [S_N/(1+S_N), (S_N+T)/(1+S_N+T)] where S_N is the
    tabulated partial sum and T the tail estimate; the bracket is a
    documented heuristic, not a proven enclosure, since T uses a constant
    fitted at n_max.

    Raises:
        RangeError: if the series has fewer than ``opts.min_terms`` terms.

    Warns:
        ConvergenceWarning: when the bracket is wider than ``opts.tolerance``.
    """
    if series.n_max < opts.min_terms:
        raise RangeError(
            f"series tabulated to {series.n_max} but opts.min_terms={opts.min_terms}"
        )
    n = series.n_max
    if is_recurrent(series.spec):
        return ReturnProbability(1.0, 1.0, 1.0, n, "exact-recurrent", True)
    # S/(1+S) = 1 - exp(-log(1+S)), stable for both tiny and huge S.
    log_one_plus_s = float(series.log_prefix_sum[n])
    lower = -math.expm1(-log_one_plus_s)
    log_tail = _log_tail_estimate(series)
    upper = -math.expm1(-float(np.logaddexp(log_one_plus_s, log_tail)))
    method = "geometric-tail" if isinstance(series.spec, ConstantWalk) else "shape-tail"
    width = upper - lower
    met = width <= opts.tolerance
    if not met:
        warnings.warn(
            f"return-probability bracket width {width:.3g} exceeds tolerance "
            f"{opts.tolerance:.3g}; raise n_max to tighten it",
            ConvergenceWarning,
            stacklevel=2,
        )
    return ReturnProbability(0.5 * (lower + upper), lower, upper, n, method, met)
