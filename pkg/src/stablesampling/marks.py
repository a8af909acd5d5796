"""Marks ``V_1, ..., V_{kappa(V)+1}`` and the last-exceedance index ``kappa(V)``.

Index ``n >= 1`` is a *record* when ``V_{n+1} > (n c)^alpha`` with
``c = mu - epsilon``; write ``p(n)`` for its probability.  Past the last
record every mark sits under its threshold.  Record times are drawn one at
a time: a lazily evaluated coin decides whether another record exists, and
acceptance/rejection with proposal ``P(N = n) ~ p(n)`` picks where.

The infinite products and sums involved are never evaluated; a cached
table of ``p(n)`` plus the certified tail bound ``u(l c) / c`` brackets
them, and the bracket is refined until the uniform at hand is separated.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .distributions import MarkModel, NullEventError
from .tilted_walk import IterationCeilingError

__all__ = [
    "MarkHorizon",
    "MarkBlock",
    "RecordTable",
    "p_of_n",
    "lazy_coin_r",
    "sample_record_time",
    "sample_marks",
    "extend_marks",
]

log = logging.getLogger(__name__)

# 1 - x >= exp(-2 x) holds for x <= 0.7968...
_EXP_BOUND_LIMIT = 0.75
MAX_TABLE = 1 << 24
# records up to the index where the remaining mass drops below this are drawn in bulk
BULK_TAIL_MASS = 0.05


class RecordTable:
    """Cached ``p(n)``, ``log prod (1 - p)`` and reverse partial sums of ``p``.

    ``log_keep[n] = sum_{j<=n} log(1 - p(j))`` and
    ``tail[n] = sum_{n<j<=L} p(j)``; the true tail beyond ``L`` is at most
    ``bound(L) = u(L c) / c``.  Growth doubles ``L``.
    """

    def __init__(self, model: MarkModel, slope: float, alpha: float, size: int = 256):
        self.model = model
        self.slope = float(slope)
        self.alpha = float(alpha)
        self.size = 0
        self._bulk = {}
        self._bounds = {}
        self._build(size)

    def _build(self, size):
        if size > MAX_TABLE:
            raise IterationCeilingError(
                f"record table would exceed {MAX_TABLE} entries; u(k) is too loose"
            )
        n = np.arange(1, size + 2, dtype=float)
        thr = self.threshold(n)
        p = np.asarray(self.model.tail_prob(thr), dtype=float)
        keep = np.asarray(self.model.log_cdf(thr), dtype=float)
        # certain records (p = 1) are counted apart so the log sums stay finite
        sure = np.isneginf(keep)
        keep = np.where(sure, 0.0, keep)
        # index 0 is a placeholder so that p[n] is p(n)
        self.p = np.concatenate([[1.0], p])
        self.log_keep = np.concatenate([[0.0], np.cumsum(keep[:-1])])
        self.sure = np.concatenate([[0], np.cumsum(sure[:-1])])
        rev = np.cumsum(p[:size][::-1])[::-1]
        self.tail = np.concatenate([rev, [0.0]])
        self._neg_tail = -self.tail
        self.size = size
        self.tail_bound = self.bound(size)

    def threshold(self, n):
        return (np.asarray(n, dtype=float) * self.slope) ** self.alpha

    def bulk_cutoff(self, mass: float = BULK_TAIL_MASS) -> int:
        """Smallest ``L`` whose certified tail ``sum_{j>L} p(j)`` is at most ``mass``."""
        cached = self._bulk.get(mass)
        if cached is not None:
            return cached
        while self.tail_bound > mass / 2:
            self._build(self.size * 2)
        # tail is nonincreasing; first index with tail + bound <= mass
        limit = self.tail + self.tail_bound
        cut = int(np.searchsorted(-limit, -mass, side="left"))
        cut = min(cut, self.size)
        self._bulk[mass] = cut
        return cut

    def ensure(self, n):
        size = self.size
        while size < n:
            size *= 2
        if size != self.size:
            self._build(size)

    def bound(self, l):
        """Upper bound on ``sum_{j > l} p(j)``."""
        b = self._bounds.get(l)
        if b is None:
            b = float(self.model.tail_integral_bound(l * self.slope, self.alpha)) / self.slope
            self._bounds[l] = b
        return b

    def prob(self, n):
        self.ensure(n + 1)
        return float(self.p[n])

    # -- lazy Bernoulli ----------------------------------------------------

    def coin(self, k: int, u: float) -> bool:
        """Decide ``u <= prod_{j>k} (1 - p(j))`` exactly."""
        log_u = math.log(u) if u > 0 else -math.inf
        l = k + 16
        while True:
            self.ensure(l + 1)
            if self.sure[l] > self.sure[k]:
                return False
            upper = self.log_keep[l] - self.log_keep[k]
            if log_u > upper:
                return False
            if self.p[l + 1] <= _EXP_BOUND_LIMIT:
                lower = upper - 2.0 * self.bound(l)
                if log_u <= lower:
                    return True
            l *= 2
            if l > MAX_TABLE:
                raise IterationCeilingError(f"lazy coin unresolved at l={l}")

    # -- N with P(N = n) proportional to p(n), n > k ------------------------

    def proposal_index(self, k: int, v: np.ndarray) -> np.ndarray:
        """Inverse transform ``N = min{n > k: tau(n) <= v tau(k)}``, ``tau(n) = sum_{j>n} p(j)``."""
        self.ensure(max(2 * k, k + 16))
        out = np.empty(v.size, dtype=np.int64)
        todo = np.arange(v.size)
        while todo.size:
            tail, t, neg = self.tail, self.tail_bound, self._neg_tail
            if tail[k] == 0 and t == 0:
                raise NullEventError(f"no record is possible after index {k}")
            vv = v[todo]
            maybe = np.searchsorted(neg, -(vv * tail[k]), side="left")
            sure = np.searchsorted(neg, -(vv * tail[k] - t * (1.0 - vv)), side="left")
            maybe = np.maximum(maybe, k + 1)
            sure = np.maximum(sure, k + 1)
            done = (maybe == sure) & (sure <= self.size)
            out[todo[done]] = sure[done]
            todo = todo[~done]
            if todo.size:
                self._build(self.size * 2)
        return out

    def acceptance(self, k: int, n: np.ndarray) -> np.ndarray:
        """``prod_{j=k+1}^{n-1} (1 - p(j))``."""
        free = self.sure[n - 1] == self.sure[k]
        return np.where(free, np.exp(self.log_keep[n - 1] - self.log_keep[k]), 0.0)

    def record_after(self, k: int, rng: np.random.Generator) -> int:
        proposals = 0
        self.ensure(max(2 * k, k + 16))
        # acceptance rate of a proposal is (1 - r_k) / tau(k); size the batch for ~2 hits
        survive = 0.0 if self.sure[self.size] > self.sure[k] else math.exp(self.log_keep[self.size] - self.log_keep[k])
        tail_k = self.tail[k] + self.tail_bound
        rate = (1.0 - survive) / tail_k if tail_k > 0 else 1.0
        batch = int(min(max(16, 2.0 / max(rate, 1e-12) + 8), 1 << 16))
        while True:
            n = self.proposal_index(k, rng.random(batch))
            ok = np.flatnonzero(rng.random(batch) <= self.acceptance(k, n))
            if ok.size:
                proposals += ok[0] + 1
                log.debug("record after %d: %d proposals", k, proposals)
                return int(n[ok[0]])
            proposals += batch
            if proposals > 10**9:
                raise IterationCeilingError("record-time rejection loop did not accept")


@dataclass(frozen=True)
class MarkHorizon:
    """Mark law plus the growing threshold ``(n * slope)^alpha``."""

    model: MarkModel
    slope: float
    alpha: float = 1.0

    def __post_init__(self):
        if not (self.slope > 0 and self.alpha > 0):
            raise ValueError("slope and alpha must be positive")

    @cached_property
    def table(self) -> RecordTable:
        return RecordTable(self.model, self.slope, self.alpha)

    def threshold(self, n):
        return (np.asarray(n, dtype=float) * self.slope) ** self.alpha

    @property
    def moment(self) -> float:
        """``E V^(1/alpha)``."""
        return self.model.moment(1.0 / self.alpha)

    @property
    def record_count_bound(self) -> float:
        """Upper bound ``exp(2 E V^(1/alpha) / slope)`` on the mean number of record checks."""
        return math.exp(2.0 * self.moment / self.slope)


@dataclass
class MarkBlock:
    """``V_1..V_{kappa+1}`` and the record times ``Upsilon_1..Upsilon_{sigma-1}``."""

    values: np.ndarray
    records: list = field(default_factory=list)

    @property
    def kappa(self) -> int:
        return (self.records[-1] if self.records else 0) + 1

    @property
    def sigma(self) -> int:
        return len(self.records) + 1


def p_of_n(horizon: MarkHorizon, n: int) -> float:
    """``p(n) = P(V > (n c)^alpha)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return horizon.table.prob(n)


def lazy_coin_r(horizon: MarkHorizon, k: int, rng: np.random.Generator) -> bool:
    """Exact Bernoulli with parameter ``prod_{j>k} (1 - p(j))``: no record after ``k``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return horizon.table.coin(k, rng.random())


def sample_record_time(horizon: MarkHorizon, k: int, rng: np.random.Generator) -> int:
    """Next record index after ``k``, conditional on one existing."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return horizon.table.record_after(k, rng)


def _mark_bounds(horizon: MarkHorizon, records, count):
    """Lower/upper conditioning bounds for ``V_1..V_count``."""
    lower = np.full(count, -np.inf)
    upper = np.full(count, np.inf)
    if count > 1:
        n = np.arange(2, count + 1)
        upper[1:] = horizon.threshold(n - 1)
    if records:
        r = np.asarray(records)
        lower[r] = horizon.threshold(r)
        upper[r] = np.inf
    return lower, upper


def sample_marks(horizon: MarkHorizon, rng: np.random.Generator) -> MarkBlock:
    """Sample ``kappa(V)`` and ``V_1..V_{kappa(V)+1}`` exactly.

    The record skeleton comes first.  Indices are records independently,
    so those up to a cutoff ``L`` are plain Bernoulli draws; beyond ``L``
    the lazy coin and the record-time sampler take over.  Given the
    skeleton the marks are independent conditional draws (above threshold
    at records, below it elsewhere, unconstrained for ``V_1``), so they
    are drawn in one call.
    """
    table = horizon.table
    cut = table.bulk_cutoff()
    hits = np.flatnonzero(rng.random(cut) < table.p[1 : cut + 1]) + 1
    records = hits.tolist()
    k = cut
    while not table.coin(k, rng.random()):
        k = table.record_after(k, rng)
        records.append(k)
    k = records[-1] if records else 0
    count = k + 2
    lower, upper = _mark_bounds(horizon, records, count)
    values = np.asarray(horizon.model.sample_conditional(rng, lower, upper), dtype=float)
    log.debug("marks: kappa(V)=%d with %d records", k + 1, len(records))
    return MarkBlock(values=values, records=records)


def extend_marks(horizon: MarkHorizon, start: int, stop: int, rng: np.random.Generator) -> np.ndarray:
    """``V_start..V_stop`` (inclusive), each conditioned below ``((n-1) c)^alpha``."""
    if stop < start:
        return np.empty(0)
    if start < 2:
        raise ValueError("extension starts past the first mark")
    n = np.arange(start, stop + 1)
    return np.asarray(horizon.model.sample_conditional(rng, -np.inf, horizon.threshold(n - 1)), dtype=float)
