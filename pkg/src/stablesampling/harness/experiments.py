"""Benchmarks and the statistical validation battery.

Every replication draws from its own stream keyed by ``(seed, replication)``
so results do not depend on how replications are spread over workers.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sst

from ..distributions import Exponential
from ..infinite_server import (
    QueueState,
    ScaledSystem,
    ipa_from_samples,
    sample_stationary_queue,
    sensitivity_sample,
)
from ..region import sample_full_region, sample_half_region
from ..rng import replication_rng
from ..stats import TestResult, geometric_chi2, ks_test, mean_se, poisson_chi2
from ..transient import phi_at_arrivals, simulate_path, transient_simulate
from .config import ConfigError, ExperimentConfig

__all__ = [
    "BiasRow",
    "BatchRow",
    "ValidationReport",
    "run_sample_queue",
    "run_sample_region",
    "run_bias_benchmark",
    "run_batch_means_comparison",
    "run_sensitivity_table",
    "run_validation_battery",
    "estimate_kappa",
]

log = logging.getLogger(__name__)

# streams for pilot runs live far away from the replication keys
_PILOT_OFFSET = 1 << 40


def _map(fn, tasks, workers: int):
    if workers <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (8 * workers))))


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


# -- sampling ---------------------------------------------------------------


def _queue_task(args):
    system, seed, rep, sampler = args
    return _timed(sampler or sample_stationary_queue, system, replication_rng(seed, rep))


def run_sample_queue(config: ExperimentConfig, sampler=None):
    """Exact stationary states, one per replication, with per-replication runtimes."""
    system = config.system.system()
    tasks = [(system, config.seed, r, sampler) for r in range(config.replications)]
    out = _map(_queue_task, tasks, config.workers)
    return [s for s, _ in out], [t for _, t in out]


def _region_task(args):
    process, seed, rep, direction = args
    rng = replication_rng(seed, rep)
    if direction == "both":
        return sample_full_region(process, rng)
    return sample_half_region(process, rng, direction=direction)


def run_sample_region(config: ExperimentConfig):
    process = config.system.process()
    tasks = [(process, config.seed, r, config.direction) for r in range(config.replications)]
    return _map(_region_task, tasks, config.workers)


def estimate_kappa(system: ScaledSystem, seed: int, pilot: int = 200) -> float:
    """Mean number of arrivals an exact draw simulates (``kappa + 1``), from a pilot run."""
    ks = [
        sample_stationary_queue(system, replication_rng(seed, _PILOT_OFFSET + r)).simulated_arrivals
        for r in range(pilot)
    ]
    return float(np.mean(ks))


# -- initial-transient bias -------------------------------------------------


@dataclass(frozen=True)
class BiasRow:
    start: str
    n: int
    mean: float
    se: float
    relative_bias: float
    ci_low: float
    ci_high: float
    pvalue: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _bias_task(args):
    system, seed, rep, horizons = args
    rng = replication_rng(seed, rep)
    empty_rng, exact_rng = rng.spawn(2)
    top = max(horizons)
    empty = phi_at_arrivals(simulate_path(system, empty_rng, arrivals=top), horizons)
    state = sample_stationary_queue(system, exact_rng)
    exact = phi_at_arrivals(simulate_path(system, exact_rng, arrivals=top, initial=state), horizons)
    return empty, exact


def _require_poisson(system: ScaledSystem, what: str):
    base = system.arrival
    if not isinstance(base, Exponential):
        raise ConfigError(f"{what} needs Poisson arrivals (family 'exponential')")


def run_bias_benchmark(config: ExperimentConfig):
    """Relative bias of ``Phi(A_n)`` from empty and from exact starts.

    Returns ``(rows, crossings)``: one :class:`BiasRow` per start and
    horizon, and for each target the smallest horizon of the grid whose
    empty-start bias is at most the target (``None`` when none is).
    Confidence bounds are two-sided at the configured test level.
    """
    system = config.system.system()
    _require_poisson(system, "the bias benchmark")
    truth = system.mean_queue
    horizons = sorted(int(n) for n in config.horizons)
    if not horizons or horizons[0] < 1:
        raise ConfigError("horizons must be positive integers")
    tasks = [(system, config.seed, r, horizons) for r in range(config.replications)]
    out = _map(_bias_task, tasks, config.workers)
    z = float(sst.norm.isf(config.level / 2))
    rows = []
    for start, column in (("empty", 0), ("exact", 1)):
        phis = np.array([o[column] for o in out])
        for j, n in enumerate(horizons):
            m, se = mean_se(phis[:, j])
            p = float(2 * sst.norm.sf(abs(m - truth) / se)) if se > 0 else math.nan
            rows.append(
                BiasRow(
                    start=start,
                    n=n,
                    mean=m,
                    se=se,
                    relative_bias=abs(m - truth) / truth,
                    ci_low=max(abs(m - truth) - z * se, 0.0) / truth,
                    ci_high=(abs(m - truth) + z * se) / truth,
                    pvalue=p,
                )
            )
    crossings = {}
    for target in config.targets:
        hit = [r.n for r in rows if r.start == "empty" and r.relative_bias <= target]
        crossings[float(target)] = min(hit) if hit else None
    return rows, crossings


# -- batch means with equal budgets -----------------------------------------


@dataclass(frozen=True)
class BatchRow:
    n: int
    n_exact: int
    meta: int
    empty_mean: float
    empty_std: float
    exact_mean: float
    exact_std: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _batch_task(args):
    system, seed, key, n, n_exact, batches = args
    rng = replication_rng(seed, key)
    empty_rng, exact_rng = rng.spawn(2)
    empty = transient_simulate(system, empty_rng, arrivals=n, batches=batches)
    state = sample_stationary_queue(system, exact_rng)
    exact = transient_simulate(system, exact_rng, arrivals=n_exact, initial=state, batches=batches)
    return empty.phi, empty.batch_std, exact.phi, exact.batch_std


def run_batch_means_comparison(config: ExperimentConfig):
    """Empty start with ``n`` arrivals against exact start with ``n - round(E kappa)``.

    Each meta-replication is one pair of runs; the sample standard
    deviation reported for a run is its batch-means standard error
    (``config.batches`` equal time batches).  Returns
    ``(rows, kappa_estimate)``.
    """
    system = config.system.system()
    _require_poisson(system, "the batch-means comparison")
    kappa = estimate_kappa(system, config.seed)
    rows = []
    for i, n in enumerate(config.budgets):
        n_exact = int(n - round(kappa))
        if n_exact < config.batches:
            raise ConfigError(f"budget n={n} does not cover E kappa ~ {kappa:.1f} plus {config.batches} batches")
        tasks = [
            (system, config.seed, i * config.meta_replications + m, n, n_exact, config.batches)
            for m in range(config.meta_replications)
        ]
        for m, (em, es, xm, xs) in enumerate(_map(_batch_task, tasks, config.workers)):
            rows.append(BatchRow(n, n_exact, m, em, es, xm, xs))
    return rows, kappa


def closer_fraction(rows, truth: float, n: int | None = None) -> float:
    """Share of meta-replications in which the exact start lands nearer ``truth``."""
    sel = [r for r in rows if n is None or r.n == n]
    wins = [abs(r.exact_mean - truth) < abs(r.empty_mean - truth) for r in sel]
    return float(np.mean(wins)) if wins else math.nan


# -- sensitivity ------------------------------------------------------------


def _sens_task(args):
    system, seed, rep = args
    return sensitivity_sample(sample_stationary_queue(system, replication_rng(seed, rep)))


def run_sensitivity_table(config: ExperimentConfig):
    """IPA estimates for every ``(lam, nu)`` of ``config.grid``; one report per point."""
    reports = []
    for lam, nu in config.grid:
        system = config.system.system(lam=lam, nu=nu)
        tasks = [(system, config.seed, r) for r in range(config.replications)]
        samples = _map(_sens_task, tasks, config.workers)
        reports.append(ipa_from_samples(samples, lam, nu))
    return reports


# -- validation battery -----------------------------------------------------


@dataclass
class ValidationReport:
    tests: list
    replications: int
    runtime_mean: float
    kappa_mean: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.tests)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "replications": self.replications,
            "runtime_mean": self.runtime_mean,
            "kappa_mean": self.kappa_mean,
            "tests": [t.as_dict() for t in self.tests],
            **self.details,
        }


def run_validation_battery(config: ExperimentConfig, sampler=None) -> ValidationReport:
    """Goodness-of-fit checks of exact stationary draws in a Poisson-arrival system.

    * occupancy ``q`` against Poisson(``lam E V / nu``) by chi-square;
    * pooled residual service times against the equilibrium law of ``V / nu`` by KS;
    * the age ``E(0)`` against the equilibrium inter-arrival law by KS;
    * the number of first-passage checks in the arrival walk against its
      geometric law, whose success probability is ``epsilon / mu``.

    ``sampler`` replaces :func:`sample_stationary_queue` (used to check
    that broken samplers are caught).
    """
    system = config.system.system()
    _require_poisson(system, "the validation battery")
    states, runtimes = run_sample_queue(config, sampler)
    level = config.level
    q = np.array([s.count for s in states])
    residuals = np.concatenate([s.residuals for s in states])
    ages = np.array([s.age for s in states])
    segments = np.array([s.segments for s in states])
    tilt = system.process.tilt
    success = tilt.epsilon / system.interarrival.mean
    tests = [
        poisson_chi2(q, system.mean_queue, level),
        ks_test("residual_ks", residuals, system.marks.cdf_equilibrium, level),
        ks_test("age_ks", ages, system.interarrival.cdf_equilibrium, level),
        geometric_chi2(segments, success, level),
    ]
    for t in tests:
        log.info("%s: statistic=%.4g p=%.4g %s", t.name, t.statistic, t.pvalue, "pass" if t.passed else "FAIL")
    return ValidationReport(
        tests=tests,
        replications=len(states),
        runtime_mean=float(np.mean(runtimes)),
        kappa_mean=float(np.mean([s.simulated_arrivals for s in states])),
        details={"mean_q": float(q.mean()), "expected_q": system.mean_queue},
    )
