"""Exact steady state of the GI/GI/infinity queue and its IPA sensitivities.

Customers present at time 0 are the points of the backward process inside
``{(t, v): v > |t|, t <= 0}``: customer ``i`` arrived ``A_i`` ago and still
has ``V_i - A_i`` of service left.  Systems are indexed by ``(lambda, nu)``:
inter-arrival times are the base ones divided by ``lambda``, service times
the base ones divided by ``nu``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import InterArrivalModel, MarkModel, ScaledInterArrival, ScaledMark
from .region import HalfSequence, MarkedRenewal, sample_sequence

__all__ = [
    "ScaledSystem",
    "QueueState",
    "SensitivitySample",
    "DerivativeEstimate",
    "SensitivityReport",
    "sample_stationary_queue",
    "state_from_sequence",
    "steady_state_functionals",
    "sensitivity_sample",
    "ipa_sensitivities",
    "rescale_state",
    "finite_difference_sensitivities",
    "ipa_from_samples",
]


@dataclass(frozen=True)
class ScaledSystem:
    """Base laws plus the arrival scale ``lam`` and service scale ``nu``."""

    arrival: InterArrivalModel
    service: MarkModel
    lam: float = 1.0
    nu: float = 1.0
    epsilon_fraction: float | None = None

    def __post_init__(self):
        if not (self.lam > 0 and self.nu > 0):
            raise ValueError("lam and nu must be positive")

    @property
    def interarrival(self) -> InterArrivalModel:
        return self.arrival if self.lam == 1.0 else ScaledInterArrival(self.arrival, self.lam)

    @property
    def marks(self) -> MarkModel:
        return self.service if self.nu == 1.0 else ScaledMark(self.service, self.nu)

    @property
    def process(self) -> MarkedRenewal:
        cached = self.__dict__.get("_process")
        if cached is None:
            inter = self.interarrival
            eps = None if self.epsilon_fraction is None else self.epsilon_fraction * inter.mean
            cached = MarkedRenewal(inter, self.marks, alpha=1.0, epsilon=eps)
            self.__dict__["_process"] = cached
        return cached

    @property
    def mean_queue(self) -> float:
        """``E_pi Q(0, 0) = E V / E X`` (Little's law)."""
        return self.marks.mean / self.interarrival.mean

    def with_scales(self, lam: float | None = None, nu: float | None = None) -> "ScaledSystem":
        return ScaledSystem(
            self.arrival,
            self.service,
            self.lam if lam is None else lam,
            self.nu if nu is None else nu,
            self.epsilon_fraction,
        )


@dataclass
class QueueState:
    """Stationary descriptor at time 0.

    ``residuals[i]`` is the remaining service of the ``i``-th present
    customer, ordered from most to least recent arrival; ``elapsed`` and
    ``service`` hold the same customers' time in system and total
    requirement; ``age`` is the time since the last arrival.
    """

    residuals: np.ndarray
    age: float
    elapsed: np.ndarray
    service: np.ndarray
    kappa_a: int = 0
    kappa_v: int = 0
    segments: int = 1
    records: int = 0

    @property
    def count(self) -> int:
        return int(self.residuals.size)

    @property
    def kappa(self) -> int:
        return max(self.kappa_a, self.kappa_v)

    @property
    def simulated_arrivals(self) -> int:
        """Arrival epochs generated to certify the sample, ``kappa + 1``."""
        return self.kappa + 1

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "age": self.age,
            "residuals": self.residuals.tolist(),
            "elapsed": self.elapsed.tolist(),
            "service": self.service.tolist(),
            "kappa_a": self.kappa_a,
            "kappa_v": self.kappa_v,
        }


def _present(epochs, marks):
    keep = marks > epochs
    return epochs[keep], marks[keep]


def sample_stationary_queue(system: ScaledSystem, rng: np.random.Generator) -> QueueState:
    """One exact draw from the stationary law of ``({R_i}, E(0))``."""
    return state_from_sequence(sample_sequence(system.process, rng))


def state_from_sequence(seq: HalfSequence) -> QueueState:
    """Project a backward sequence onto the customers present at time 0."""
    k = seq.kappa
    elapsed, service = _present(seq.epochs[:k], seq.marks[:k])
    return QueueState(
        residuals=service - elapsed,
        age=float(seq.epochs[0]),
        elapsed=elapsed,
        service=service,
        kappa_a=seq.kappa_a,
        kappa_v=seq.kappa_v,
        segments=seq.segments,
        records=seq.records,
    )


def rescale_state(state: QueueState, source: ScaledSystem, target: ScaledSystem) -> QueueState:
    """Re-express an exact sample of ``source`` as one of ``target`` on the same path.

    Valid when every customer present in ``target`` is present in
    ``source``, i.e. ``target.nu / target.lam >= source.nu / source.lam``.
    This yields common-random-number samples across a family of systems.
    """
    if target.nu / target.lam < source.nu / source.lam * (1 - 1e-12):
        raise ValueError("target system admits customers the source sample does not cover")
    base_a = state.elapsed * source.lam
    base_v = state.service * source.nu
    elapsed = base_a / target.lam
    service = base_v / target.nu
    keep = service > elapsed
    return QueueState(
        residuals=service[keep] - elapsed[keep],
        age=state.age * source.lam / target.lam,
        elapsed=elapsed[keep],
        service=service[keep],
        kappa_a=state.kappa_a,
        kappa_v=state.kappa_v,
        segments=state.segments,
        records=state.records,
    )


def steady_state_functionals(state: QueueState):
    """``(q, mean residual, max residual)``; both residual summaries are 0 when empty."""
    q = state.count
    if q == 0:
        return 0, 0.0, 0.0
    r = state.residuals
    return q, math.fsum(r) / q, float(r.max())


@dataclass(frozen=True)
class SensitivitySample:
    """Per-replication inputs of the IPA estimators."""

    count: int
    mean_elapsed: float
    mean_service: float
    mean_residual: float
    max_elapsed: float
    max_service: float
    max_residual: float

    @property
    def empty(self) -> bool:
        return self.count == 0


def sensitivity_sample(state: QueueState) -> SensitivitySample:
    q = state.count
    if q == 0:
        return SensitivitySample(0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    m = int(np.argmax(state.residuals))  # lowest index wins ties
    return SensitivitySample(
        count=q,
        mean_elapsed=math.fsum(state.elapsed) / q,
        mean_service=math.fsum(state.service) / q,
        mean_residual=math.fsum(state.residuals) / q,
        max_elapsed=float(state.elapsed[m]),
        max_service=float(state.service[m]),
        max_residual=float(state.residuals[m]),
    )


@dataclass(frozen=True)
class DerivativeEstimate:
    value: float
    se: float
    n: int

    def interval(self, z: float = 3.0):
        return self.value - z * self.se, self.value + z * self.se


@dataclass
class SensitivityReport:
    """IPA estimates of the four steady-state derivatives at ``(lam, nu)``."""

    lam: float
    nu: float
    d_lam_mean: DerivativeEstimate
    d_nu_mean: DerivativeEstimate
    d_lam_max: DerivativeEstimate
    d_nu_max: DerivativeEstimate
    replications: int
    empty: int
    samples: list = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        out = {"lam": self.lam, "nu": self.nu, "replications": self.replications, "empty": self.empty}
        for name in ("d_lam_mean", "d_nu_mean", "d_lam_max", "d_nu_max"):
            est = getattr(self, name)
            out[name] = est.value
            out[name + "_se"] = est.se
        return out


def _estimate(values, factor):
    x = np.asarray(values, dtype=float) * factor
    n = x.size
    if n == 0:
        return DerivativeEstimate(math.nan, math.nan, 0)
    mean = math.fsum(x) / n
    se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else math.nan
    return DerivativeEstimate(mean, se, n)


def ipa_from_samples(samples, lam: float, nu: float) -> SensitivityReport:
    """Combine per-replication samples into the four IPA estimates.

    Empty replications are left out of the mean-residual derivatives (the
    mean residual is undefined there) and enter the max-residual ones as 0.
    """
    busy = [s for s in samples if not s.empty]
    return SensitivityReport(
        lam=lam,
        nu=nu,
        d_lam_mean=_estimate([s.mean_elapsed for s in busy], 1.0 / lam),
        d_nu_mean=_estimate([s.mean_service for s in busy], -1.0 / nu),
        d_lam_max=_estimate([s.max_elapsed for s in samples], 1.0 / lam),
        d_nu_max=_estimate([s.max_service for s in samples], -1.0 / nu),
        replications=len(samples),
        empty=len(samples) - len(busy),
        samples=list(samples),
    )


def ipa_sensitivities(system: ScaledSystem, rng: np.random.Generator, replications: int) -> SensitivityReport:
    """IPA estimates of ``d/dlam`` and ``d/dnu`` of ``E R_mean`` and ``E R_max``."""
    streams = rng.spawn(replications)
    samples = [sensitivity_sample(sample_stationary_queue(system, s)) for s in streams]
    return ipa_from_samples(samples, system.lam, system.nu)


def _ratio_difference(num_hi, den_hi, num_lo, den_lo, step):
    """Central difference of ``E num / E den`` with a delta-method standard error."""
    x = np.column_stack([num_hi, den_hi, num_lo, den_lo]).astype(float)
    n = x.shape[0]
    a_hi, b_hi, a_lo, b_lo = x.mean(axis=0)
    value = (a_hi / b_hi - a_lo / b_lo) / (2 * step)
    grad = np.array([1 / b_hi, -a_hi / b_hi**2, -1 / b_lo, a_lo / b_lo**2]) / (2 * step)
    var = float(grad @ np.cov(x, rowvar=False) @ grad) / n
    return DerivativeEstimate(float(value), math.sqrt(max(var, 0.0)), n)


def finite_difference_sensitivities(
    system: ScaledSystem,
    rng: np.random.Generator,
    replications: int,
    rel_step: float = 0.05,
) -> SensitivityReport:
    """Central differences with common random numbers, for checking the IPA estimates.

    Each replication samples the system with the largest ``lam`` and
    smallest ``nu`` of the stencil, which contains every customer present
    in the other stencil systems, and rescales that one path to all four
    points.  The mean-residual target is ``E[R_mean | q >= 1]``, matching
    :func:`ipa_from_samples`; the max-residual target counts empty systems
    as 0.
    """
    lam, nu = system.lam, system.nu
    hl, hn = rel_step * lam, rel_step * nu
    source = system.with_scales(lam=lam + hl, nu=nu - hn)
    stencil = {
        "lam_hi": system.with_scales(lam=lam + hl),
        "lam_lo": system.with_scales(lam=lam - hl),
        "nu_hi": system.with_scales(nu=nu + hn),
        "nu_lo": system.with_scales(nu=nu - hn),
    }
    rows = {k: [] for k in stencil}
    for stream in rng.spawn(replications):
        state = sample_stationary_queue(source, stream)
        for key, target in stencil.items():
            rows[key].append(steady_state_functionals(rescale_state(state, source, target)))
    arr = {k: np.array(v, dtype=float) for k, v in rows.items()}  # columns q, mean, max

    def mean_part(hi, lo, step):
        return _ratio_difference(arr[hi][:, 1], arr[hi][:, 0] > 0, arr[lo][:, 1], arr[lo][:, 0] > 0, step)

    def max_part(hi, lo, step):
        d = (arr[hi][:, 2] - arr[lo][:, 2]) / (2 * step)
        return _estimate(d, 1.0)

    empty = int(np.sum(arr["lam_lo"][:, 0] == 0))
    return SensitivityReport(
        lam=lam,
        nu=nu,
        d_lam_mean=mean_part("lam_hi", "lam_lo", hl),
        d_nu_mean=mean_part("nu_hi", "nu_lo", hn),
        d_lam_max=max_part("lam_hi", "lam_lo", hl),
        d_nu_max=max_part("nu_hi", "nu_lo", hn),
        replications=replications,
        empty=empty,
    )
