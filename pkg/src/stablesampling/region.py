"""Exact samples of the marked renewal process restricted to stable regions.

A region ``B`` is handled when ``B`` is contained in
``C_alpha = {(t, v): |v| >= |t|^alpha}``.  One side of time zero is sampled
by drawing marks up to ``kappa(V)``, arrivals up to
``kappa = max(kappa(V), kappa(A))`` and conditioned marks in between; no
point with index beyond ``kappa + 1`` can fall in ``C_alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .arrivals import sample_arrivals
from .distributions import InterArrivalModel, MarkModel
from .marks import MarkHorizon, extend_marks, sample_marks
from .tilted_walk import TiltParams, choose_tilt

__all__ = [
    "MarkedPoint",
    "HalfSequence",
    "SideCertificate",
    "RegionSample",
    "MarkedRenewal",
    "region_predicate",
    "sample_sequence",
    "sample_half_region",
    "sample_full_region",
    "check_predicate",
]

Predicate = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MarkedPoint:
    t: float
    v: float


@dataclass(frozen=True)
class MarkedRenewal:
    """A marked renewal process together with its region exponent and tilt."""

    arrival: InterArrivalModel
    mark: MarkModel
    alpha: float = 1.0
    epsilon: float | None = None

    @property
    def tilt(self) -> TiltParams:
        # cached per instance; frozen dataclasses allow __dict__ writes
        cached = self.__dict__.get("_tilt")
        if cached is None:
            cached = choose_tilt(self.arrival, self.epsilon)
            self.__dict__["_tilt"] = cached
        return cached

    @property
    def horizon(self) -> MarkHorizon:
        cached = self.__dict__.get("_horizon")
        if cached is None:
            cached = MarkHorizon(self.mark, self.tilt.slope, self.alpha)
            self.__dict__["_horizon"] = cached
        return cached


@dataclass
class HalfSequence:
    """``(A_n, V_n)`` for ``n = 1..kappa+1`` on one side of time zero."""

    epochs: np.ndarray
    marks: np.ndarray
    kappa_a: int
    kappa_v: int
    segments: int = 1
    records: int = 0

    @property
    def kappa(self) -> int:
        return max(self.kappa_a, self.kappa_v)


@dataclass(frozen=True)
class SideCertificate:
    direction: str
    kappa_a: int
    kappa_v: int

    @property
    def kappa(self) -> int:
        return max(self.kappa_a, self.kappa_v)


@dataclass
class RegionSample:
    """The finite random set ``M ∩ B`` with its horizon certificates."""

    t: np.ndarray
    v: np.ndarray
    side: str
    certificates: list = field(default_factory=list)

    @property
    def points(self) -> list:
        return [MarkedPoint(float(a), float(b)) for a, b in zip(self.t, self.v)]

    def __len__(self):
        return self.t.size

    @property
    def kappa(self) -> int:
        return max(c.kappa for c in self.certificates)

    @property
    def kappa_a(self) -> int:
        return max(c.kappa_a for c in self.certificates)

    @property
    def kappa_v(self) -> int:
        return max(c.kappa_v for c in self.certificates)


def region_predicate(alpha: float = 1.0) -> Predicate:
    """Membership in ``C_alpha`` itself."""

    def inside(t, v):
        return np.abs(v) >= np.abs(t) ** alpha

    return inside


def sample_sequence(
    process: MarkedRenewal,
    rng: np.random.Generator,
    first_epoch: float | None = None,
    mark_rng: np.random.Generator | None = None,
) -> HalfSequence:
    """Marks, arrivals and the mark extension for one side.

    Arrivals and marks consume separate streams; when ``mark_rng`` is not
    given both are spawned from ``rng``.
    """
    if mark_rng is None:
        rng, mark_rng = rng.spawn(2)
    horizon = process.horizon
    block = sample_marks(horizon, mark_rng)
    kappa_v = block.kappa
    arrivals = sample_arrivals(process.tilt, kappa_v, rng, first_epoch=first_epoch)
    kappa = max(kappa_v, arrivals.kappa)
    marks = block.values
    if kappa > kappa_v:
        marks = np.concatenate([marks, extend_marks(horizon, kappa_v + 2, kappa + 1, mark_rng)])
    return HalfSequence(
        epochs=arrivals.epochs[: kappa + 1],
        marks=marks[: kappa + 1],
        kappa_a=arrivals.kappa,
        kappa_v=kappa_v,
        segments=arrivals.segments,
        records=len(block.records),
    )


def _emit(seq: HalfSequence, sign: float, predicate: Predicate):
    t = sign * seq.epochs
    keep = np.asarray(predicate(t, seq.marks), dtype=bool)
    return t[keep], seq.marks[keep]


def check_predicate(predicate: Predicate, alpha: float, rng: np.random.Generator, n: int = 4096, scale: float = 10.0):
    """Probe ``predicate`` at random points outside ``C_alpha``; raise if any is accepted."""
    t = rng.uniform(-scale, scale, n)
    v = rng.uniform(-1.0, 1.0, n) * np.abs(t) ** alpha
    hits = np.asarray(predicate(t, v), dtype=bool)
    if np.any(hits):
        i = int(np.flatnonzero(hits)[0])
        raise ValueError(f"predicate accepts ({t[i]:.4g}, {v[i]:.4g}) outside C_alpha")


def sample_half_region(
    process: MarkedRenewal,
    rng: np.random.Generator,
    direction: str = "backward",
    predicate: Predicate | None = None,
    debug: bool = False,
) -> RegionSample:
    """Exact sample of ``M ∩ B`` on one half-line (``t > 0`` forward, ``t < 0`` backward)."""
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    predicate = predicate or region_predicate(process.alpha)
    if debug:
        check_predicate(predicate, process.alpha, np.random.default_rng(0))
    seq = sample_sequence(process, rng)
    sign = 1.0 if direction == "forward" else -1.0
    t, v = _emit(seq, sign, predicate)
    cert = SideCertificate(direction, seq.kappa_a, seq.kappa_v)
    return RegionSample(t=t, v=v, side=direction, certificates=[cert])


def sample_full_region(
    process: MarkedRenewal,
    rng: np.random.Generator,
    predicate: Predicate | None = None,
    debug: bool = False,
) -> RegionSample:
    """Two-sided exact sample.

    The interval straddling time zero is length-biased; an independent
    uniform splits it into the backward age and the forward residual, and
    each side continues with its own i.i.d. inter-arrival times and marks.
    """
    predicate = predicate or region_predicate(process.alpha)
    if debug:
        check_predicate(predicate, process.alpha, np.random.default_rng(0))
    split_rng, back_rng, fwd_rng = rng.spawn(3)
    span = float(process.arrival.sample_length_biased(split_rng))
    u = split_rng.random()
    parts = {"backward": u * span, "forward": (1.0 - u) * span}
    ts, vs, certs = [], [], []
    for direction, side_rng in (("backward", back_rng), ("forward", fwd_rng)):
        seq = sample_sequence(process, side_rng, first_epoch=parts[direction])
        sign = 1.0 if direction == "forward" else -1.0
        t, v = _emit(seq, sign, predicate)
        ts.append(t)
        vs.append(v)
        certs.append(SideCertificate(direction, seq.kappa_a, seq.kappa_v))
    return RegionSample(t=np.concatenate(ts), v=np.concatenate(vs), side="both", certificates=certs)
