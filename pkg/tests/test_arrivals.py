import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from stablesampling.arrivals import sample_arrivals
from stablesampling.distributions import Exponential, Gamma, ScaledInterArrival
from stablesampling.tilted_walk import choose_tilt


@pytest.fixture(scope="module")
def poisson100():
    return choose_tilt(ScaledInterArrival(Exponential(1.0), 100.0))


def test_poisson_increments_are_exponential(poisson100):
    rng = np.random.default_rng(8)
    n = 20
    gaps = np.concatenate([np.diff(sample_arrivals(poisson100, n, rng).epochs[: n + 1]) for _ in range(3000)])
    assert np.all(gaps > 0)
    assert stats.kstest(gaps, stats.expon(scale=0.01).cdf).pvalue > 1e-3


def test_first_epoch_is_equilibrium():
    params = choose_tilt(Gamma(2.0, 2.0))
    rng = np.random.default_rng(9)
    a1 = np.array([sample_arrivals(params, 0, rng).epochs[0] for _ in range(100_000)])
    assert stats.kstest(a1, params.model.cdf_equilibrium).pvalue > 1e-3
    # E A_1 = E X^2 / (2 mu)
    model = params.model
    target = (model.variance + model.mean**2) / (2 * model.mean)
    assert abs(a1.mean() - target) < 4 * a1.std() / math.sqrt(a1.size)


def test_horizon_rule(rng):
    params = choose_tilt(Exponential(1.0))
    block = sample_arrivals(params, 0, rng)
    assert block.horizon == block.kappa
    block = sample_arrivals(params, 50, rng)
    assert block.horizon == max(50, block.kappa)
    with pytest.raises(ValueError):
        sample_arrivals(params, -1, rng)


def test_reconstruction_identity(rng):
    params = choose_tilt(Gamma(2.0, 2.0))
    b = sample_arrivals(params, 30, rng, first_epoch=0.25)
    k = np.arange(b.epochs.size)
    assert b.epochs[0] == 0.25
    np.testing.assert_allclose(b.epochs, 0.25 - b.walk + k * params.slope, rtol=0, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(0, 200))
def test_certificate_holds(seed, n):
    params = choose_tilt(Gamma(2.0, 2.0))
    b = sample_arrivals(params, n, np.random.default_rng(seed))
    assert b.certificate_margin() >= 0
    assert np.all(np.diff(b.epochs) > 0) and b.epochs[0] > 0
