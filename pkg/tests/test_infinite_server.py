import math

import numpy as np
import pytest
from scipy import stats

from stablesampling.distributions import Exponential, ExponentialMark, Gamma, Lognormal, PointMassMark
from stablesampling.infinite_server import (
    QueueState,
    ScaledSystem,
    finite_difference_sensitivities,
    ipa_sensitivities,
    rescale_state,
    sample_stationary_queue,
    sensitivity_sample,
    steady_state_functionals,
)
from stablesampling.rng import replication_rng
from stablesampling.stats import poisson_chi2


def _states(system, seed, n):
    return [sample_stationary_queue(system, replication_rng(seed, r)) for r in range(n)]


@pytest.fixture(scope="module")
def mm_inf():
    system = ScaledSystem(Exponential(1.0), ExponentialMark(1.0), lam=10.0)
    return system, _states(system, 31, 6000)


def test_mm_inf_count_is_poisson(mm_inf):
    system, states = mm_inf
    q = np.array([s.count for s in states])
    assert system.mean_queue == pytest.approx(10.0)
    assert poisson_chi2(q, 10.0).passed


def test_mm_inf_residuals_and_age(mm_inf):
    _, states = mm_inf
    res = np.concatenate([s.residuals for s in states])
    assert stats.kstest(res, stats.expon().cdf).pvalue > 1e-3
    ages = np.array([s.age for s in states])
    assert stats.kstest(ages, stats.expon(scale=0.1).cdf).pvalue > 1e-3


def test_point_mass_service():
    # V = 1: the occupants are the arrivals of the last time unit
    system = ScaledSystem(Exponential(1.0), PointMassMark(1.0), lam=4.0)
    states = _states(system, 32, 4000)
    q = np.array([s.count for s in states])
    assert poisson_chi2(q, 4.0).passed
    res = np.concatenate([s.residuals for s in states])
    assert stats.kstest(res, stats.uniform().cdf).pvalue > 1e-3


def test_identity_and_ordering(rng):
    system = ScaledSystem(Gamma(2.0, 2.0), Lognormal(-0.25, 0.5), lam=5.0)
    for _ in range(300):
        s = sample_stationary_queue(system, rng)
        np.testing.assert_allclose(s.elapsed + s.residuals, s.service, rtol=1e-12)
        assert np.all(s.residuals > 0)
        assert np.all(np.diff(s.elapsed) > 0)  # most recent arrival first
        if s.count:
            assert s.elapsed[0] >= s.age


def _state(elapsed, service, age=0.1):
    elapsed, service = np.asarray(elapsed, float), np.asarray(service, float)
    return QueueState(service - elapsed, age, elapsed, service)


def test_functionals_by_hand():
    s = _state([0.2, 1.0, 2.0], [1.2, 4.0, 4.0])
    q, mean, mx = steady_state_functionals(s)
    assert (q, mean, mx) == (3, pytest.approx(2.0), 3.0)
    assert steady_state_functionals(_state([], [])) == (0, 0.0, 0.0)
    one = _state([1.0], [1.5])
    assert steady_state_functionals(one) == (1, 0.5, 0.5)


def test_argmax_ties_take_most_recent():
    s = _state([0.5, 1.0], [2.5, 3.0])
    ss = sensitivity_sample(s)
    assert ss.max_residual == 2.0 and ss.max_elapsed == 0.5 and ss.max_service == 2.5
    assert sensitivity_sample(_state([], [])).empty


def test_rescale_state_scales_and_drops():
    base = ScaledSystem(Exponential(1.0), Lognormal(-0.25, 0.5), lam=2.0, nu=1.0)
    s = _state([0.5, 1.0], [0.6, 3.0], age=0.25)
    # halving lam doubles elapsed times, so the first customer has left
    t = rescale_state(s, base, base.with_scales(lam=1.0))
    np.testing.assert_allclose(t.elapsed, [2.0])
    np.testing.assert_allclose(t.residuals, [1.0])
    assert t.age == pytest.approx(0.5)
    with pytest.raises(ValueError):
        rescale_state(s, base, base.with_scales(lam=4.0))


def test_conditional_mean_residual_poisson():
    # residuals are iid equilibrium given q: E[R_mean | q >= 1] = E V^2 / (2 E V)
    system = ScaledSystem(Exponential(1.0), Lognormal(-0.25, 0.5), lam=3.0)
    vals = np.array([steady_state_functionals(s)[1] for s in _states(system, 33, 8000) if s.count])
    target = 1.0 / (2 * math.exp(-0.125))
    assert abs(vals.mean() - target) < 4 * vals.std() / math.sqrt(vals.size)


def test_service_scale():
    system = ScaledSystem(Exponential(1.0), Lognormal(-0.25, 0.5), lam=3.0, nu=2.0)
    assert system.mean_queue == pytest.approx(1.5 * math.exp(-0.125))
    q = np.array([s.count for s in _states(system, 34, 4000)])
    assert poisson_chi2(q, system.mean_queue).passed


def test_fd_against_closed_form_poisson():
    # Poisson arrivals: E[R_mean | q >= 1] = E V^2 / (2 E V nu) does not depend on lam
    system = ScaledSystem(Exponential(1.0), Lognormal(-0.25, 0.5), lam=3.0)
    fd = finite_difference_sensitivities(system, np.random.default_rng(35), 6000, rel_step=0.05)
    assert abs(fd.d_lam_mean.value) < 4 * fd.d_lam_mean.se
    target = -1.0 / (2 * math.exp(-0.125))
    assert abs(fd.d_nu_mean.value - target) < 4 * fd.d_nu_mean.se + 0.01


def test_ipa_report_shape():
    system = ScaledSystem(Gamma(2.0, 2.0), Lognormal(-0.25, 0.5), lam=2.0)
    rep = ipa_sensitivities(system, np.random.default_rng(36), 200)
    assert rep.replications == 200 and len(rep.samples) == 200
    assert rep.d_lam_max.value > 0 and rep.d_nu_max.value < 0
    assert set(rep.as_dict()) >= {"d_lam_mean", "d_nu_max_se", "empty"}


# frozen from oracles.max_residual_oracle(5.0): (value, standard error)
MAX_RESIDUAL_LAM5 = {"mean": (1.09788, 0.00115), "d_nu": (-1.53175, 0.00074), "d_lam": (0.086785, 0.00019)}


def test_max_residual_ipa_against_smooth_oracle():
    system = ScaledSystem(Gamma(2.0, 2.0), Lognormal(-0.25, 0.5), lam=5.0)
    rep = ipa_sensitivities(system, np.random.default_rng(37), 20_000)
    rmax = np.array([steady_state_functionals(sample_stationary_queue(system, g))[2] for g in np.random.default_rng(38).spawn(20_000)])
    checks = [
        (rmax.mean(), rmax.std(ddof=1) / math.sqrt(rmax.size), MAX_RESIDUAL_LAM5["mean"]),
        (rep.d_nu_max.value, rep.d_nu_max.se, MAX_RESIDUAL_LAM5["d_nu"]),
        (rep.d_lam_max.value, rep.d_lam_max.se, MAX_RESIDUAL_LAM5["d_lam"]),
    ]
    for est, se, (ref, ref_se) in checks:
        assert abs(est - ref) < 4 * math.hypot(se, ref_se)
