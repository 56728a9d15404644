"""Log-space tabulation of the odds-ratio products and their prefix sums.

Every exact formula downstream is a ratio of the quantities tabulated
here: the running products ``rho_1 ... rho_n`` and the prefix sums
``1 + sum_{j<=n} rho_1 ... rho_j``.  Both live entirely in log space:
for downward-drifting walks the prefix sums grow polynomially without
bound, and for constant ``rho > 1`` they overflow double precision near
n = 700 if held linearly.  Nothing is exponentiated except inside
log-sum-exp steps, so tables are overflow-free to n_max = 1e7 and beyond.

The streaming prefix recurrence is

    log_prefix_sum[n] = logaddexp(log_prefix_sum[n-1], log_prod[n])

with ``logaddexp(a, b) = max(a, b) + log1p(exp(-|a - b|))``, evaluated by
``np.logaddexp.accumulate`` (numpy implements exactly that formulation).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import RangeError, ResourceError
from .walk import WalkSpec, log_rho_array

__all__ = ["ProductSeries", "build", "DEFAULT_MAX_ENTRIES", "MAX_TABLE_ENV"]

# One table of length n holds two float64 arrays of n+1 entries; the
# default budget (~320 MB per table) is deliberately conservative and can
# be raised per call or globally through the environment variable below.
DEFAULT_MAX_ENTRIES = 20_000_000
MAX_TABLE_ENV = "LMAX_MAX_TABLE"


@dataclass(frozen=True, eq=False)
class ProductSeries:
    """Immutable log-space table over sites 1..n_max.

    Attributes:
        spec: the walk the table was built from.
        n_max: last tabulated index.
        log_prod: ``log_prod[n] = sum_{i<=n} log rho_i``; entry 0 is the
            empty product, log 1 = 0.
        log_prefix_sum: ``log(1 + sum_{j<=n} rho_1...rho_j)``; entry 0 is
            the empty sum, log 1 = 0.
    """

    spec: WalkSpec
    n_max: int
    log_prod: np.ndarray
    log_prefix_sum: np.ndarray

    def _check(self, n: int) -> int:
        n = int(n)
        if not 0 <= n <= self.n_max:
            raise RangeError(f"n={n} outside tabulated range 0..{self.n_max}")
        return n

    def log_product(self, n: int) -> float:
        """``log(rho_1 ... rho_n)``; the empty product at n=0 gives 0."""
        return float(self.log_prod[self._check(n)])

    def log_one_plus_sum(self, n: int) -> float:
        """``log(1 + sum_{j=1..n} rho_1 ... rho_j)``; n=0 gives 0."""
        return float(self.log_prefix_sum[self._check(n)])


def _max_entries() -> int:
    env = os.environ.get(MAX_TABLE_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_MAX_ENTRIES


def build(spec: WalkSpec, n_max: int, max_entries: int | None = None) -> ProductSeries:
    """Tabulate log products and log prefix sums in one vectorized pass.

    Args:
        spec: walk to tabulate.
        n_max: last index (>= 1).
        max_entries: memory budget override; defaults to the
            ``LMAX_MAX_TABLE`` environment variable or 2e7 entries.

    Raises:
        ResourceError: if ``n_max`` exceeds the budget.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise RangeError(f"n_max must be >= 1, got {n_max}")
    limit = _max_entries() if max_entries is None else int(max_entries)
    if n_max > limit:
        raise ResourceError(
            f"n_max={n_max} exceeds the table budget of {limit} entries "
            f"(override via max_entries or ${MAX_TABLE_ENV})"
        )
    lr = log_rho_array(spec, np.arange(1, n_max + 1, dtype=np.int64))
    log_prod = np.empty(n_max + 1)
    log_prod[0] = 0.0
    np.cumsum(lr, out=log_prod[1:])
    # Entry 0 of log_prod seeds the accumulator with the empty-sum term
    # exp(0) = 1; the stream then folds in one product per step.
    log_prefix_sum = np.logaddexp.accumulate(log_prod)
    return ProductSeries(spec=spec, n_max=n_max, log_prod=log_prod, log_prefix_sum=log_prefix_sum)
