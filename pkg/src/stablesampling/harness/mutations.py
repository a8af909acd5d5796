"""Deliberately broken samplers for checking that the validation battery has teeth.

Each function has the signature of :func:`sample_stationary_queue` and can
be passed to :func:`run_validation_battery` as ``sampler``.  They are not
used anywhere else.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..arrivals import sample_arrivals
from ..distributions import MarkModel
from ..infinite_server import QueueState, ScaledSystem, state_from_sequence
from ..marks import sample_marks
from ..region import HalfSequence, MarkedRenewal, sample_sequence

__all__ = ["skip_mark_extension", "unconditional_marks", "MUTATIONS"]


def skip_mark_extension(system: ScaledSystem, rng: np.random.Generator) -> QueueState:
    """Stop at ``kappa(V)``: customers with index in ``(kappa(V)+1, kappa(A)]`` are never looked at."""
    process = system.process
    arr_rng, mark_rng = rng.spawn(2)
    block = sample_marks(process.horizon, mark_rng)
    kv = block.kappa
    arrivals = sample_arrivals(process.tilt, kv, arr_rng)
    seq = HalfSequence(
        epochs=arrivals.epochs[: kv + 1],
        marks=block.values[: kv + 1],
        kappa_a=0,  # pretend the arrival certificate is already met
        kappa_v=kv,
        segments=arrivals.segments,
        records=len(block.records),
    )
    return state_from_sequence(seq)


class _NominalBelow(MarkModel):
    """Ignores pure upper-bound conditioning: marks 'known' to sit under a threshold are drawn nominally."""

    def __init__(self, base: MarkModel):
        self.base = base

    @property
    def mean(self):
        return self.base.mean

    def moment(self, power):
        return self.base.moment(power)

    def cdf(self, x):
        return self.base.cdf(x)

    def sf(self, x):
        return self.base.sf(x)

    def log_cdf(self, x):
        return self.base.log_cdf(x)

    def ppf(self, p):
        return self.base.ppf(p)

    def isf(self, p):
        return self.base.isf(p)

    def sample(self, rng, size=None):
        return self.base.sample(rng, size)

    def tail_integral_bound(self, k, alpha=1.0):
        return self.base.tail_integral_bound(k, alpha)

    def integrated_tail(self, x):
        return self.base.integrated_tail(x)

    def sample_conditional(self, rng, lower=-np.inf, upper=np.inf, size=None):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        exact = self.base.sample_conditional(rng, lower, upper, size)
        free = np.broadcast_to(np.isneginf(lower), np.shape(exact))
        nominal = self.base.sample(rng, np.shape(exact) or None)
        return np.where(free, nominal, exact) if np.shape(exact) else (nominal if free else exact)


@lru_cache(maxsize=16)
def _nominal_process(system: ScaledSystem) -> MarkedRenewal:
    base = system.process
    return MarkedRenewal(base.arrival, _NominalBelow(base.mark), alpha=base.alpha, epsilon=base.tilt.epsilon)


def unconditional_marks(system: ScaledSystem, rng: np.random.Generator) -> QueueState:
    """Draw below-threshold marks from the nominal law instead of the conditional one."""
    return state_from_sequence(sample_sequence(_nominal_process(system), rng))


MUTATIONS = {
    "skip-extension": skip_mark_extension,
    "unconditional-marks": unconditional_marks,
}
