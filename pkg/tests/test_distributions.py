"""Distribution families checked against quadrature and closed forms."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from stablesampling.distributions import (
    Deterministic,
    DiscreteMark,
    DomainError,
    Exponential,
    ExponentialMark,
    Gamma,
    Lognormal,
    NullEventError,
    PointMassMark,
    ScaledInterArrival,
    ScaledMark,
    ShiftedExponential,
    UniformMark,
)

ARRIVALS = [
    Exponential(1.0),
    Exponential(3.0),
    Gamma(2.0, 2.0),
    Gamma(0.7, 1.3),
    ShiftedExponential(0.3, 2.0),
    ScaledInterArrival(Gamma(2.0, 2.0), 5.0),
]
MARKS = [
    Lognormal(-0.25, 0.5),
    ExponentialMark(2.0),
    UniformMark(3.0),
    DiscreteMark((0.5, 1.5, 2.5), (0.5, 0.3, 0.2)),
    ScaledMark(Lognormal(-0.25, 0.5), 2.0),
]


def _quad_mgf(model, theta):
    # E exp(theta X) = 1 + theta int_0^inf exp(theta x) P(X > x) dx for X >= 0
    def f(x):
        s = float(model.sf(x))
        return math.exp(theta * x + math.log(s)) if s > 0 else 0.0

    val, _ = integrate.quad(f, 0, np.inf, limit=400)
    return 1.0 + theta * val


@pytest.mark.parametrize("model", ARRIVALS, ids=repr)
def test_mean_and_variance_by_quadrature(model):
    m1, _ = integrate.quad(lambda x: float(model.sf(x)), 0, np.inf, limit=400)
    m2, _ = integrate.quad(lambda x: 2 * x * float(model.sf(x)), 0, np.inf, limit=400)
    assert model.mean == pytest.approx(m1, rel=1e-7)
    assert model.variance == pytest.approx(m2 - m1**2, rel=1e-6)


@pytest.mark.parametrize("model", ARRIVALS, ids=repr)
@pytest.mark.parametrize("frac", [-3.0, -0.5, 0.3])
def test_cumulant_matches_quadrature(model, frac):
    theta = frac / model.mean if frac < 0 else frac * min(model.theta_max, 10 / model.mean)
    assert float(model.cumulant(theta)) == pytest.approx(math.log(_quad_mgf(model, theta)), rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("model", ARRIVALS, ids=repr)
def test_cumulant_derivative_is_derivative(model):
    theta, h = -1.0 / model.mean, 1e-5 / model.mean
    fd = (model.cumulant(theta + h) - model.cumulant(theta - h)) / (2 * h)
    assert float(model.cumulant_derivative(theta)) == pytest.approx(float(fd), rel=1e-6)
    assert float(model.cumulant(0.0)) == 0.0
    assert float(model.cumulant_derivative(0.0)) == pytest.approx(model.mean)


def test_cumulant_domain():
    with pytest.raises(DomainError):
        Exponential(1.0).cumulant(1.0)
    with pytest.raises(DomainError):
        Gamma(2.0, 2.0).cumulant(2.5)


@pytest.mark.parametrize("model", ARRIVALS, ids=repr)
def test_tilted_mean(model, rng):
    theta = -2.0 / model.mean
    x = model.sample_tilted(theta, rng, 200_000)
    se = x.std() / math.sqrt(x.size)
    assert abs(x.mean() - float(model.cumulant_derivative(theta))) < 4 * se


@pytest.mark.parametrize("model", ARRIVALS, ids=repr)
def test_equilibrium_law(model, rng):
    # CDF against quadrature of sf / mu, samples against the CDF
    for x in (0.1 * model.mean, model.mean, 3 * model.mean):
        val, _ = integrate.quad(lambda y: float(model.sf(y)), 0, x)
        assert float(model.cdf_equilibrium(x)) == pytest.approx(val / model.mean, rel=1e-7, abs=1e-12)
    sample = model.sample_equilibrium(rng, 20_000)
    assert stats.kstest(sample, model.cdf_equilibrium).pvalue > 1e-3


@pytest.mark.parametrize("model", ARRIVALS, ids=repr)
def test_length_biased_law(model, rng):
    for x in (0.5 * model.mean, 2 * model.mean):
        # int_0^x y dF(y) = int_0^x sf(y) dy - x sf(x)
        val, _ = integrate.quad(lambda y: float(model.sf(y)), 0, x)
        expect = (val - x * float(model.sf(x))) / model.mean
        assert float(model.cdf_length_biased(x)) == pytest.approx(expect, rel=1e-6, abs=1e-12)
    assert stats.kstest(model.sample_length_biased(rng, 20_000), model.cdf_length_biased).pvalue > 1e-3


@pytest.mark.parametrize("model", ARRIVALS, ids=repr)
def test_residual_given_age(model, rng):
    age = 0.8 * model.mean
    r = np.array([model.residual_given_age(age, rng) for _ in range(5000)])
    base = float(model.sf(age))

    def cdf(x):
        return (model.cdf(age + x) - model.cdf(age)) / base

    assert stats.kstest(r, cdf).pvalue > 1e-3


def test_deterministic_interarrival(rng):
    d = Deterministic(2.0)
    assert d.variance == 0.0
    assert float(d.cumulant(0.7)) == pytest.approx(1.4)
    assert np.all(d.sample(rng, 5) == 2.0)
    eq = d.sample_equilibrium(rng, 10_000)
    assert stats.kstest(eq, stats.uniform(0, 2).cdf).pvalue > 1e-3


def test_scaled_interarrival_cumulant():
    base = Gamma(2.0, 2.0)
    s = ScaledInterArrival(base, 4.0)
    assert s.mean == pytest.approx(base.mean / 4)
    assert float(s.cumulant(-3.0)) == pytest.approx(float(base.cumulant(-0.75)))


# -- marks ---------------------------------------------------------------------


def _quad_tail(model, k, alpha):
    # int_k^inf P(V^(1/alpha) > x) dx = int_k^inf sf(x^alpha) dx
    val, _ = integrate.quad(lambda x: float(model.sf(x**alpha)), k, np.inf, limit=400)
    return val


@pytest.mark.parametrize("model", MARKS, ids=repr)
@pytest.mark.parametrize("alpha", [1.0, 2.0, 0.5])
@pytest.mark.parametrize("k", [0.0, 0.3, 1.7, 6.0])
def test_tail_integral_bound_dominates(model, alpha, k):
    exact = _quad_tail(model, k, alpha)
    bound = float(model.tail_integral_bound(k, alpha))
    assert bound >= exact * (1 - 1e-7) - 1e-9  # quadrature error at kinks
    if model._exact_tail_integral(np.asarray(k), alpha) is not None:
        assert bound == pytest.approx(exact, rel=1e-6, abs=1e-10)


@pytest.mark.parametrize("model", MARKS, ids=repr)
@pytest.mark.parametrize("power", [0.5, 1.0, 2.0])
def test_mark_moments(model, power):
    val, _ = integrate.quad(lambda x: power * x ** (power - 1) * float(model.sf(x)), 0, np.inf, limit=400)
    assert model.moment(power) == pytest.approx(val, rel=1e-6)


def test_lognormal_closed_forms():
    m = Lognormal(-0.25, 0.5)
    assert m.mean == pytest.approx(math.exp(-0.125))
    assert m.moment(2) == pytest.approx(1.0)
    assert float(m.tail_prob(1.0)) == pytest.approx(stats.lognorm(0.5, scale=math.exp(-0.25)).sf(1.0))


@pytest.mark.parametrize("model", MARKS, ids=repr)
def test_mark_equilibrium_cdf(model):
    for x in (0.2, 1.0, 2.5):
        val, _ = integrate.quad(lambda y: float(model.sf(y)), 0, x, limit=200)
        assert float(model.cdf_equilibrium(x)) == pytest.approx(val / model.mean, rel=1e-6, abs=1e-10)


@pytest.mark.parametrize("model", [Lognormal(-0.25, 0.5), ExponentialMark(1.0), UniformMark(3.0)], ids=repr)
@pytest.mark.parametrize("band", [(-np.inf, 0.4), (0.6, 1.2), (2.5, np.inf)])
def test_conditional_draws_follow_truncated_law(model, band, rng):
    lo, hi = band
    x = model.sample_conditional(rng, lo, hi, 20_000)
    assert np.all(x > lo) and np.all(x <= hi)
    f_lo, f_hi = float(model.cdf(lo)), float(model.cdf(hi))

    def cdf(v):
        return (np.clip(model.cdf(v), f_lo, f_hi) - f_lo) / (f_hi - f_lo)

    assert stats.kstest(x, cdf).pvalue > 1e-3


def test_far_tail_conditioning_keeps_precision(rng):
    m = Lognormal(-0.25, 0.5)
    x = m.sample_conditional(rng, 30.0, np.inf, 1000)
    assert np.all(x > 30.0) and np.all(np.isfinite(x))


def test_discrete_conditional_and_null_event(rng):
    m = DiscreteMark((0.5, 1.5, 2.5), (0.5, 0.3, 0.2))
    x = m.sample_conditional(rng, 1.0, np.inf, 50_000)
    assert set(np.unique(x)) == {1.5, 2.5}
    assert np.mean(x == 1.5) == pytest.approx(0.6, abs=0.01)
    with pytest.raises(NullEventError):
        m.sample_conditional(rng, 2.5, np.inf)
    with pytest.raises(NullEventError):
        PointMassMark(1.0).sample_conditional(rng, -np.inf, 0.5)


@settings(max_examples=60, deadline=None)
@given(
    lo=st.floats(-1.0, 4.0),
    width=st.floats(1e-3, 5.0),
    seed=st.integers(0, 2**32 - 1),
)
def test_conditional_support_property(lo, width, seed):
    m = Lognormal(-0.25, 0.5)
    hi = lo + width
    if float(m.cdf(hi) - m.cdf(lo)) <= 0:
        return
    x = m.sample_conditional(np.random.default_rng(seed), lo, hi, 64)
    assert np.all(x > lo) and np.all(x <= hi)


def test_scaled_mark():
    base = Lognormal(-0.25, 0.5)
    s = ScaledMark(base, 2.0)
    assert s.mean == pytest.approx(base.mean / 2)
    assert float(s.sf(0.5)) == pytest.approx(float(base.sf(1.0)))
    assert float(s.tail_integral_bound(0.3, 2.0)) == pytest.approx(_quad_tail(s, 0.3, 2.0), rel=1e-6)
