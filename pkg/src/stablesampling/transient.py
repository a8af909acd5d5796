"""Forward simulation of the GI/GI/infinity queue over a finite horizon.

Used for the initial-transient benchmark: the time average
``Phi = (1/t) int_0^t f(Q(s)) ds`` started empty is biased, started from an
exact stationary draw it is not.  For ``f(q) = q`` the integral has a closed
form per customer (``sum min(V, t - T)`` over arrivals plus ``sum min(R, t)``
over initial customers), so no event ordering is needed; a general ``f``
goes through a sorted sweep of arrival and departure epochs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .infinite_server import QueueState, ScaledSystem

__all__ = [
    "TransientPath",
    "TransientResult",
    "transient_simulate",
    "simulate_path",
    "phi_at_arrivals",
    "occupancy_integral",
    "sweep_counts",
]


@dataclass
class TransientPath:
    """Customer intervals ``[start, end)`` observed on ``[0, horizon]``."""

    start: np.ndarray
    end: np.ndarray
    horizon: float
    arrivals: int
    initial: int


@dataclass
class TransientResult:
    phi: float
    horizon: float
    arrivals: int
    batch_means: np.ndarray | None = None
    times: np.ndarray | None = None
    counts: np.ndarray | None = None

    @property
    def batch_std(self) -> float:
        """Batch-means standard error of ``phi``."""
        b = self.batch_means
        if b is None or b.size < 2:
            return math.nan
        return float(np.std(b, ddof=1) / math.sqrt(b.size))


def occupancy_integral(start, end, a: float, b: float) -> float:
    """``int_a^b Q(s) ds`` for customers present on ``[start, end)``."""
    overlap = np.minimum(end, b) - np.maximum(start, a)
    return math.fsum(overlap[overlap > 0])


def sweep_counts(start, end, horizon: float):
    """Piecewise-constant ``Q`` on ``[0, horizon]``: change times and the count after each."""
    s = start[start < horizon]
    e = end[end < horizon]
    times = np.concatenate([[0.0], s, e])
    jumps = np.concatenate([[0], np.ones(s.size, dtype=np.int64), -np.ones(e.size, dtype=np.int64)])
    # departures before arrivals at tied epochs; initial customers start at 0 and are counted there
    order = np.lexsort((jumps, times))
    times, jumps = times[order], jumps[order]
    counts = np.cumsum(jumps)
    return times, counts


def _integrate_steps(times, counts, f, edges):
    """``int f(Q)`` over consecutive intervals of ``edges`` for a step function."""
    values = np.asarray(f(counts), dtype=float)
    ends = np.append(times[1:], edges[-1])
    cum = np.concatenate([[0.0], np.cumsum(values * (ends - times))])
    idx = np.searchsorted(times, edges, side="right") - 1
    idx = np.clip(idx, 0, times.size - 1)
    at = cum[idx] + values[idx] * (edges - times[idx])
    return np.diff(at)


def _check_horizon(time, arrivals):
    if (time is None) == (arrivals is None):
        raise ValueError("give exactly one of time or arrivals")
    if arrivals is not None and arrivals < 1:
        raise ValueError("arrivals must be >= 1")
    if time is not None and not time > 0:
        raise ValueError("time must be positive")


def phi_at_arrivals(path: TransientPath, ns) -> np.ndarray:
    """``Phi`` of ``Q`` on ``[0, A_n]`` for each ``n`` in ``ns``, all from one path."""
    epochs = path.start[path.initial :]
    out = []
    for n in ns:
        if not 1 <= n <= path.arrivals:
            raise ValueError(f"n={n} outside 1..{path.arrivals}")
        t = float(epochs[n - 1])
        out.append(occupancy_integral(path.start, path.end, 0.0, t) / t)
    return np.array(out)


def _arrival_epochs(system: ScaledSystem, rng, first: float, arrivals, time):
    inter = system.interarrival
    if arrivals is not None:
        gaps = inter.sample(rng, arrivals - 1) if arrivals > 1 else np.empty(0)
        return first + np.concatenate([[0.0], np.cumsum(gaps)])
    pieces = [np.array([first])]
    last = first
    chunk = max(16, int(2 * (time - first) / inter.mean) + 16)
    while last <= time:
        nxt = last + np.cumsum(inter.sample(rng, chunk))
        pieces.append(nxt)
        last = nxt[-1]
    epochs = np.concatenate(pieces)
    return epochs[epochs <= time]


def simulate_path(
    system: ScaledSystem,
    rng: np.random.Generator,
    *,
    time: float | None = None,
    arrivals: int | None = None,
    initial: QueueState | None = None,
) -> TransientPath:
    """Customer intervals up to the horizon; ``horizon`` is ``time`` or ``A_arrivals``."""
    _check_horizon(time, arrivals)
    inter = system.interarrival
    if initial is None:
        # empty with E(0) = 0: the first arrival is a full inter-arrival time
        first = float(inter.sample(rng))
        r0 = np.empty(0)
    else:
        first = float(inter.residual_given_age(initial.age, rng))
        r0 = np.asarray(initial.residuals, dtype=float)
    epochs = _arrival_epochs(system, rng, first, arrivals, time)
    horizon = float(epochs[-1]) if arrivals is not None else float(time)
    service = np.asarray(system.marks.sample(rng, epochs.size), dtype=float)
    start = np.concatenate([np.zeros(r0.size), epochs])
    end = np.concatenate([r0, epochs + service])
    return TransientPath(start, end, horizon, int(epochs.size), int(r0.size))


def transient_simulate(
    system: ScaledSystem,
    rng: np.random.Generator,
    *,
    time: float | None = None,
    arrivals: int | None = None,
    initial: QueueState | None = None,
    f: Callable[[np.ndarray], np.ndarray] | None = None,
    batches: int = 0,
    record: bool = False,
) -> TransientResult:
    """Simulate forward from ``initial`` (empty when ``None``) and return ``Phi``.

    Parameters
    ----------
    time, arrivals
        Exactly one horizon: a fixed time ``t``, or the epoch ``A_n`` of
        the ``n``-th arrival after time 0.
    initial
        Exact stationary state; the first arrival is then the residual of
        an inter-arrival time given its age ``initial.age``.
    f
        Function of the queue length; identity by default.
    batches
        If positive, also return the time averages over that many equal
        sub-intervals of ``[0, t]`` (batch means).
    record
        Keep the piecewise-constant queue-length path.
    """
    path = simulate_path(system, rng, time=time, arrivals=arrivals, initial=initial)
    t = path.horizon
    edges = np.linspace(0.0, t, batches + 1) if batches > 0 else np.array([0.0, t])
    times = counts = None
    if f is None and not record:
        pieces = np.array([occupancy_integral(path.start, path.end, a, b) for a, b in zip(edges[:-1], edges[1:])])
    else:
        times, counts = sweep_counts(path.start, path.end, t)
        pieces = _integrate_steps(times, counts, f or (lambda q: q), edges)
    phi = math.fsum(pieces) / t
    means = pieces / np.diff(edges) if batches > 0 else None
    return TransientResult(
        phi=phi,
        horizon=t,
        arrivals=path.arrivals,
        batch_means=means,
        times=times if record else None,
        counts=counts if record else None,
    )
