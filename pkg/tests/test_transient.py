import math

import numpy as np
import pytest
from scipy import integrate

from stablesampling.distributions import Exponential, Gamma, Lognormal, PointMassMark
from stablesampling.infinite_server import ScaledSystem, sample_stationary_queue
from stablesampling.rng import replication_rng
from stablesampling.transient import (
    occupancy_integral,
    phi_at_arrivals,
    simulate_path,
    sweep_counts,
    transient_simulate,
)


def test_occupancy_integral_by_hand():
    start = np.array([0.0, 1.0, 2.5])
    end = np.array([2.0, 4.0, 3.0])
    assert occupancy_integral(start, end, 0.0, 3.0) == pytest.approx(2.0 + 2.0 + 0.5)
    assert occupancy_integral(start, end, 1.5, 2.0) == pytest.approx(1.0)


def test_sweep_matches_identity(rng):
    system = ScaledSystem(Gamma(2.0, 2.0), Lognormal(-0.25, 0.5), lam=5.0)
    for seed in range(20):
        a = transient_simulate(system, np.random.default_rng(seed), time=30.0, batches=6)
        b = transient_simulate(system, np.random.default_rng(seed), time=30.0, batches=6, f=lambda q: q, record=True)
        assert a.phi == pytest.approx(b.phi, rel=1e-12)
        np.testing.assert_allclose(a.batch_means, b.batch_means, rtol=1e-10)
        assert np.all(b.counts >= 0)


def test_sweep_counts_small():
    times, counts = sweep_counts(np.array([0.0, 1.0]), np.array([2.0, 1.5]), 3.0)
    # a zero-length sentinel at 0 precedes the first change
    assert times.tolist() == [0.0, 0.0, 1.0, 1.5, 2.0]
    assert counts.tolist() == [0, 1, 2, 1, 0]


def _empty_oracle(lam, sf, t):
    val, _ = integrate.quad(lambda u: (t - u) * float(sf(u)), 0, t, limit=200)
    return lam * val / t


def test_empty_start_fixed_time_oracle():
    # Poisson arrivals from empty: E Q(s) = lam int_0^s sf(u) du
    lam, t = 4.0, 3.0
    system = ScaledSystem(Exponential(1.0), Lognormal(-0.25, 0.5), lam=lam)
    phi = np.array([transient_simulate(system, replication_rng(40, r), time=t).phi for r in range(8000)])
    target = _empty_oracle(lam, system.marks.sf, t)
    assert abs(phi.mean() - target) < 4 * phi.std() / math.sqrt(phi.size)


def test_exact_start_is_unbiased():
    system = ScaledSystem(Gamma(2.0, 2.0), Lognormal(-0.25, 0.5), lam=4.0)
    phi = []
    for r in range(5000):
        g = replication_rng(41, r)
        phi.append(transient_simulate(system, g, time=2.0, initial=sample_stationary_queue(system, g)).phi)
    phi = np.array(phi)
    assert abs(phi.mean() - system.mean_queue) < 4 * phi.std() / math.sqrt(phi.size)


def test_deterministic_service():
    lam = 3.0
    system = ScaledSystem(Exponential(1.0), PointMassMark(1.0), lam=lam)
    empty = np.array([transient_simulate(system, replication_rng(42, r), time=2.0).phi for r in range(6000)])
    # int_0^1 (2 - u) du / 2 = 0.75
    assert abs(empty.mean() - 0.75 * lam) < 4 * empty.std() / math.sqrt(empty.size)
    exact = []
    for r in range(4000):
        g = replication_rng(43, r)
        exact.append(transient_simulate(system, g, time=2.0, initial=sample_stationary_queue(system, g)).phi)
    exact = np.array(exact)
    assert abs(exact.mean() - lam) < 4 * exact.std() / math.sqrt(exact.size)


def test_arrival_horizon_and_phi_at_arrivals(rng):
    system = ScaledSystem(Gamma(2.0, 2.0), Lognormal(-0.25, 0.5), lam=5.0)
    path = simulate_path(system, np.random.default_rng(3), arrivals=200)
    assert path.arrivals == 200 and path.horizon == path.start[-1]
    res = transient_simulate(system, np.random.default_rng(3), arrivals=200)
    assert phi_at_arrivals(path, [200])[0] == pytest.approx(res.phi, rel=1e-12)
    many = phi_at_arrivals(path, [10, 100, 200])
    assert many.shape == (3,)
    with pytest.raises(ValueError):
        phi_at_arrivals(path, [201])


def test_horizon_arguments(rng):
    system = ScaledSystem(Exponential(1.0), Lognormal(-0.25, 0.5))
    with pytest.raises(ValueError):
        transient_simulate(system, rng)
    with pytest.raises(ValueError):
        transient_simulate(system, rng, time=1.0, arrivals=5)
    with pytest.raises(ValueError):
        transient_simulate(system, rng, time=-1.0)


def test_batch_std(rng):
    system = ScaledSystem(Exponential(1.0), Lognormal(-0.25, 0.5), lam=5.0)
    res = transient_simulate(system, rng, time=300.0, batches=30)
    assert res.batch_means.size == 30
    assert res.batch_std == pytest.approx(np.std(res.batch_means, ddof=1) / math.sqrt(30))
    assert np.mean(res.batch_means) == pytest.approx(res.phi, rel=1e-10)
