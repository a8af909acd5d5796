"""Inter-arrival and mark distributions.

Two abstract interfaces drive every sampler in the package:

* :class:`InterArrivalModel` -- a positive inter-arrival time ``X`` with a
  finite cumulant ``psi(theta) = log E exp(theta X)`` for ``theta`` below
  ``theta_max``.  It can draw nominal, exponentially tilted, length-biased
  and equilibrium (stationary forward recurrence) variates.
* :class:`MarkModel` -- a nonnegative mark ``V`` with accessible CDF, exact
  conditional draws on ``V in (lower, upper]`` and an upper bound ``u(k)`` on
  the integrated tail ``int_k^inf P(V**(1/alpha) > x) dx``.

Every ``sample*`` method takes an external :class:`numpy.random.Generator`
and an optional ``size``; objects are immutable.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from scipy import special

__all__ = [
    "DomainError",
    "NullEventError",
    "InterArrivalModel",
    "Exponential",
    "Gamma",
    "Deterministic",
    "ShiftedExponential",
    "ScaledInterArrival",
    "MarkModel",
    "Lognormal",
    "ExponentialMark",
    "UniformMark",
    "PointMassMark",
    "DiscreteMark",
    "ScaledMark",
]


class DomainError(ValueError):
    """Cumulant or tilt requested outside the finite-cumulant domain."""


class NullEventError(ValueError):
    """Conditioning on an event of probability zero."""


def _draw_shape(size):
    return () if size is None else size


def _scalar_or_array(x, size):
    if size is None:
        return float(np.asarray(x).reshape(-1)[0]) if np.ndim(x) else float(x)
    return x


# --------------------------------------------------------------------------
# inter-arrival models
# --------------------------------------------------------------------------


class InterArrivalModel(ABC):
    """Law of a strictly positive inter-arrival time with light right tail."""

    @property
    @abstractmethod
    def mean(self) -> float: ...

    @property
    @abstractmethod
    def variance(self) -> float: ...

    @property
    @abstractmethod
    def theta_max(self) -> float:
        """Supremum of the finite-cumulant domain (excluded)."""

    @abstractmethod
    def cdf(self, x): ...

    @abstractmethod
    def sf(self, x): ...

    @abstractmethod
    def _cumulant(self, theta): ...

    @abstractmethod
    def _cumulant_derivative(self, theta): ...

    @abstractmethod
    def sample(self, rng: np.random.Generator, size=None): ...

    @abstractmethod
    def _sample_tilted(self, theta, rng, size): ...

    @abstractmethod
    def sample_length_biased(self, rng: np.random.Generator, size=None):
        """Draw from ``x G(dx) / mu``, the law of the interval covering a fixed time."""

    @abstractmethod
    def cdf_length_biased(self, x): ...

    @abstractmethod
    def residual_given_age(self, age: float, rng: np.random.Generator) -> float:
        """Draw ``X - age`` conditional on ``X > age``."""

    def _check_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        if np.any(theta >= self.theta_max):
            raise DomainError(
                f"cumulant is infinite for theta >= {self.theta_max!r} (got {theta!r})"
            )
        return theta

    def cumulant(self, theta):
        """``psi(theta) = log E exp(theta X)``."""
        return self._cumulant(self._check_theta(theta))

    def cumulant_derivative(self, theta):
        """``psi'(theta)``, the mean of the theta-tilted law."""
        return self._cumulant_derivative(self._check_theta(theta))

    def sample_tilted(self, theta: float, rng: np.random.Generator, size=None):
        """Draw from ``G_theta(dx) = exp(theta x - psi(theta)) G(dx)``."""
        self._check_theta(theta)
        return self._sample_tilted(float(theta), rng, size)

    def sample_equilibrium(self, rng: np.random.Generator, size=None):
        """Stationary forward recurrence time, density ``(1 - G(x)) / mu``.

        Uses the representation ``U * L`` with ``L`` length-biased and ``U``
        an independent uniform.
        """
        u = rng.random(_draw_shape(size))
        return u * self.sample_length_biased(rng, size)

    def cdf_equilibrium(self, x):
        """``G_eq(x) = mu^-1 int_0^x (1 - G(t)) dt``."""
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return x * self.sf(x) / self.mean + self.cdf_length_biased(x)


@dataclass(frozen=True)
class Exponential(InterArrivalModel):
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("rate must be positive")

    @property
    def mean(self):
        return 1.0 / self.rate

    @property
    def variance(self):
        return 1.0 / self.rate**2

    @property
    def theta_max(self):
        return self.rate

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0)), 0.0)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, np.exp(-self.rate * np.maximum(x, 0)), 1.0)

    def _cumulant(self, theta):
        return -np.log1p(-theta / self.rate)

    def _cumulant_derivative(self, theta):
        return 1.0 / (self.rate - theta)

    def sample(self, rng, size=None):
        return rng.exponential(1.0 / self.rate, size)

    def _sample_tilted(self, theta, rng, size):
        return rng.exponential(1.0 / (self.rate - theta), size)

    def sample_length_biased(self, rng, size=None):
        return rng.gamma(2.0, 1.0 / self.rate, size)

    def cdf_length_biased(self, x):
        return special.gdtr(self.rate, 2.0, np.maximum(x, 0))

    def sample_equilibrium(self, rng, size=None):
        return self.sample(rng, size)

    def cdf_equilibrium(self, x):
        return self.cdf(x)

    def residual_given_age(self, age, rng):
        return float(rng.exponential(1.0 / self.rate))


@dataclass(frozen=True)
class Gamma(InterArrivalModel):
    """Gamma law with ``shape`` and ``rate`` (mean ``shape / rate``)."""

    shape: float = 2.0
    rate: float = 2.0

    def __post_init__(self):
        if not (self.shape > 0 and self.rate > 0):
            raise ValueError("shape and rate must be positive")

    @property
    def mean(self):
        return self.shape / self.rate

    @property
    def variance(self):
        return self.shape / self.rate**2

    @property
    def theta_max(self):
        return self.rate

    def cdf(self, x):
        return special.gdtr(self.rate, self.shape, np.maximum(x, 0))

    def sf(self, x):
        return special.gdtrc(self.rate, self.shape, np.maximum(x, 0))

    def _cumulant(self, theta):
        return -self.shape * np.log1p(-theta / self.rate)

    def _cumulant_derivative(self, theta):
        return self.shape / (self.rate - theta)

    def sample(self, rng, size=None):
        return rng.gamma(self.shape, 1.0 / self.rate, size)

    def _sample_tilted(self, theta, rng, size):
        return rng.gamma(self.shape, 1.0 / (self.rate - theta), size)

    def sample_length_biased(self, rng, size=None):
        return rng.gamma(self.shape + 1.0, 1.0 / self.rate, size)

    def cdf_length_biased(self, x):
        return special.gdtr(self.rate, self.shape + 1.0, np.maximum(x, 0))

    def residual_given_age(self, age, rng):
        if age <= 0:
            return float(self.sample(rng))
        tail = special.gammaincc(self.shape, self.rate * age)
        u = rng.random()
        if tail > 0:
            x = special.gammainccinv(self.shape, u * tail) / self.rate
            if x > age:
                return float(x - age)
        # beyond double precision of the upper tail: the residual of a gamma
        # law at large age is asymptotically exponential(rate)
        return float(rng.exponential(1.0 / self.rate))


@dataclass(frozen=True)
class Deterministic(InterArrivalModel):
    """Point mass at ``value``; zero variance, so not usable by the tilted walk."""

    value: float = 1.0

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("value must be positive")

    @property
    def mean(self):
        return self.value

    @property
    def variance(self):
        return 0.0

    @property
    def theta_max(self):
        return math.inf

    def cdf(self, x):
        return np.where(np.asarray(x, dtype=float) >= self.value, 1.0, 0.0)

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def _cumulant(self, theta):
        return theta * self.value

    def _cumulant_derivative(self, theta):
        return np.full_like(np.asarray(theta, dtype=float), self.value)

    def sample(self, rng, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)

    def _sample_tilted(self, theta, rng, size):
        return self.sample(rng, size)

    def sample_length_biased(self, rng, size=None):
        return self.sample(rng, size)

    def cdf_length_biased(self, x):
        return self.cdf(x)

    def sample_equilibrium(self, rng, size=None):
        return rng.uniform(0.0, self.value, size)

    def cdf_equilibrium(self, x):
        return np.clip(np.asarray(x, dtype=float) / self.value, 0.0, 1.0)

    def residual_given_age(self, age, rng):
        if age >= self.value:
            raise NullEventError("deterministic interval cannot exceed its value")
        return self.value - age


@dataclass(frozen=True)
class ShiftedExponential(InterArrivalModel):
    """``shift + Exponential(rate)``."""

    shift: float = 0.5
    rate: float = 2.0

    def __post_init__(self):
        if not (self.shift >= 0 and self.rate > 0):
            raise ValueError("shift must be >= 0 and rate positive")

    @property
    def mean(self):
        return self.shift + 1.0 / self.rate

    @property
    def variance(self):
        return 1.0 / self.rate**2

    @property
    def theta_max(self):
        return self.rate

    def cdf(self, x):
        y = np.asarray(x, dtype=float) - self.shift
        return np.where(y > 0, -np.expm1(-self.rate * np.maximum(y, 0)), 0.0)

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def _cumulant(self, theta):
        return theta * self.shift - np.log1p(-theta / self.rate)

    def _cumulant_derivative(self, theta):
        return self.shift + 1.0 / (self.rate - theta)

    def sample(self, rng, size=None):
        return self.shift + rng.exponential(1.0 / self.rate, size)

    def _sample_tilted(self, theta, rng, size):
        return self.shift + rng.exponential(1.0 / (self.rate - theta), size)

    @property
    def _lb_weight(self):
        # weight of the Exp(rate) component in the length-biased mixture
        return self.shift / self.mean

    def sample_length_biased(self, rng, size=None):
        shape = _draw_shape(size)
        pick = rng.random(shape) < self._lb_weight
        k = np.where(pick, 1.0, 2.0)
        out = self.shift + rng.gamma(k, 1.0 / self.rate)
        return _scalar_or_array(out, size)

    def cdf_length_biased(self, x):
        y = np.maximum(np.asarray(x, dtype=float) - self.shift, 0)
        w = self._lb_weight
        return w * special.gdtr(self.rate, 1.0, y) + (1 - w) * special.gdtr(self.rate, 2.0, y)

    def residual_given_age(self, age, rng):
        extra = float(rng.exponential(1.0 / self.rate))
        return max(self.shift - age, 0.0) + extra


@dataclass(frozen=True)
class ScaledInterArrival(InterArrivalModel):
    """The law of ``X / scale`` for a base inter-arrival ``X``."""

    base: InterArrivalModel
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def mean(self):
        return self.base.mean / self.scale

    @property
    def variance(self):
        return self.base.variance / self.scale**2

    @property
    def theta_max(self):
        return self.base.theta_max * self.scale

    def cdf(self, x):
        return self.base.cdf(np.asarray(x, dtype=float) * self.scale)

    def sf(self, x):
        return self.base.sf(np.asarray(x, dtype=float) * self.scale)

    def _cumulant(self, theta):
        return self.base._cumulant(theta / self.scale)

    def _cumulant_derivative(self, theta):
        return self.base._cumulant_derivative(theta / self.scale) / self.scale

    def sample(self, rng, size=None):
        return self.base.sample(rng, size) / self.scale

    def _sample_tilted(self, theta, rng, size):
        return self.base._sample_tilted(theta / self.scale, rng, size) / self.scale

    def sample_length_biased(self, rng, size=None):
        return self.base.sample_length_biased(rng, size) / self.scale

    def cdf_length_biased(self, x):
        return self.base.cdf_length_biased(np.asarray(x, dtype=float) * self.scale)

    def sample_equilibrium(self, rng, size=None):
        return self.base.sample_equilibrium(rng, size) / self.scale

    def cdf_equilibrium(self, x):
        return self.base.cdf_equilibrium(np.asarray(x, dtype=float) * self.scale)

    def residual_given_age(self, age, rng):
        return self.base.residual_given_age(age * self.scale, rng) / self.scale


# --------------------------------------------------------------------------
# mark models
# --------------------------------------------------------------------------


class MarkModel(ABC):
    """Law of a nonnegative mark ``V``.

    Thresholds below are on ``V`` itself; since marks are nonnegative,
    ``|V| = V``.
    """

    @property
    def mean(self) -> float:
        return self.moment(1.0)

    @abstractmethod
    def moment(self, power: float) -> float:
        """``E V**power`` (``inf`` when it diverges)."""

    @abstractmethod
    def cdf(self, x): ...

    @abstractmethod
    def sf(self, x): ...

    def log_cdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self.cdf(x))

    def tail_prob(self, c):
        """``P(V > c)``."""
        return self.sf(c)

    @abstractmethod
    def ppf(self, p): ...

    @abstractmethod
    def isf(self, p): ...

    @abstractmethod
    def sample(self, rng: np.random.Generator, size=None): ...

    def _exact_tail_integral(self, k, alpha):
        """``E (V**(1/alpha) - k)^+`` when a closed form exists, else ``None``."""
        return None

    def tail_integral_bound(self, k, alpha: float = 1.0):
        """``u(k) >= int_k^inf P(V**(1/alpha) > x) dx``; nonincreasing, vanishing.

        Families without a closed form fall back on Markov's inequality,
        ``E V**(2/alpha) / k`` capped at ``E V**(1/alpha)``.
        """
        k = np.maximum(np.asarray(k, dtype=float), 0.0)
        exact = self._exact_tail_integral(k, alpha)
        if exact is not None:
            return np.maximum(exact, 0.0)
        first = self.moment(1.0 / alpha)
        second = self.moment(2.0 / alpha)
        with np.errstate(divide="ignore"):
            markov = np.where(k > 0, second / np.where(k > 0, k, 1.0), np.inf)
        return np.minimum(first, markov)

    def integrated_tail(self, x):
        """``E (V - x)^+``; requires a closed form."""
        exact = self._exact_tail_integral(np.maximum(np.asarray(x, dtype=float), 0.0), 1.0)
        if exact is None:
            raise NotImplementedError(f"{type(self).__name__} has no closed-form tail integral")
        return exact

    def cdf_equilibrium(self, x):
        """CDF of the stationary residual of a renewal process with intervals ``V``."""
        return 1.0 - self.integrated_tail(x) / self.mean

    def sample_conditional(self, rng: np.random.Generator, lower=-np.inf, upper=np.inf, size=None):
        """Exact draws of ``V`` conditional on ``lower < V <= upper``.

        ``lower`` and ``upper`` broadcast against each other (and ``size``).
        Inverse CDF on the restricted range, switching to the survival form
        when the band sits in the upper half so tiny tail masses keep their
        relative precision.
        """
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        shape = np.broadcast_shapes(lower.shape, upper.shape, _draw_shape(size))
        lower = np.broadcast_to(lower, shape)
        upper = np.broadcast_to(upper, shape)
        f_lo, f_hi = self.cdf(lower), self.cdf(upper)
        s_lo, s_hi = self.sf(lower), self.sf(upper)
        use_sf = f_hi > 0.5
        mass = np.where(use_sf, s_lo - s_hi, f_hi - f_lo)
        if np.any(mass <= 0):
            raise NullEventError("conditioning band has zero probability")
        u = rng.random(shape)
        with np.errstate(invalid="ignore", divide="ignore"):
            via_cdf = self.ppf(f_lo + u * (f_hi - f_lo))
            via_sf = self.isf(s_lo - u * (s_lo - s_hi))
        out = np.where(use_sf, via_sf, via_cdf)
        out = np.clip(out, np.nextafter(lower, np.inf), upper)
        return out if shape else float(out)


@dataclass(frozen=True)
class Lognormal(MarkModel):
    """``exp(mu + sigma Z)`` with ``Z`` standard normal."""

    mu: float = -0.25
    sigma: float = 0.5

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def _z(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return (np.log(np.maximum(x, 0.0)) - self.mu) / self.sigma

    def moment(self, power):
        return math.exp(power * self.mu + 0.5 * (power * self.sigma) ** 2)

    def cdf(self, x):
        return special.ndtr(self._z(x))

    def sf(self, x):
        return special.ndtr(-self._z(x))

    def log_cdf(self, x):
        return special.log_ndtr(self._z(x))

    def ppf(self, p):
        return np.exp(self.mu + self.sigma * special.ndtri(p))

    def isf(self, p):
        return np.exp(self.mu - self.sigma * special.ndtri(p))

    def sample(self, rng, size=None):
        return rng.lognormal(self.mu, self.sigma, size)

    def _exact_tail_integral(self, k, alpha):
        # V**(1/alpha) is lognormal(mu/alpha, sigma/alpha)
        m, s = self.mu / alpha, self.sigma / alpha
        k = np.asarray(k, dtype=float)
        with np.errstate(divide="ignore"):
            logk = np.log(np.where(k > 0, k, 1.0))
        first = math.exp(m + 0.5 * s * s) * special.ndtr((m + s * s - logk) / s)
        second = k * special.ndtr((m - logk) / s)
        return np.where(k > 0, first - second, math.exp(m + 0.5 * s * s))


@dataclass(frozen=True)
class ExponentialMark(MarkModel):
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("rate must be positive")

    def moment(self, power):
        return math.gamma(1.0 + power) / self.rate**power

    def cdf(self, x):
        return -np.expm1(-self.rate * np.maximum(np.asarray(x, dtype=float), 0.0))

    def sf(self, x):
        return np.exp(-self.rate * np.maximum(np.asarray(x, dtype=float), 0.0))

    def log_cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        with np.errstate(divide="ignore"):
            return np.log(-np.expm1(-self.rate * x))

    def ppf(self, p):
        return -np.log1p(-np.asarray(p, dtype=float)) / self.rate

    def isf(self, p):
        with np.errstate(divide="ignore"):
            return -np.log(np.asarray(p, dtype=float)) / self.rate

    def sample(self, rng, size=None):
        return rng.exponential(1.0 / self.rate, size)

    def _exact_tail_integral(self, k, alpha):
        a = 1.0 / alpha
        z = self.rate * np.asarray(k, dtype=float) ** alpha
        return a * self.rate ** (-a) * special.gamma(a) * special.gammaincc(a, z)


@dataclass(frozen=True)
class UniformMark(MarkModel):
    """Uniform on ``[0, upper]`` -- the bounded-mark test family."""

    upper: float = 1.0

    def __post_init__(self):
        if not self.upper > 0:
            raise ValueError("upper must be positive")

    def moment(self, power):
        return self.upper**power / (1.0 + power)

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=float) / self.upper, 0.0, 1.0)

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def ppf(self, p):
        return np.asarray(p, dtype=float) * self.upper

    def isf(self, p):
        return (1.0 - np.asarray(p, dtype=float)) * self.upper

    def sample(self, rng, size=None):
        return rng.uniform(0.0, self.upper, size)

    def _exact_tail_integral(self, k, alpha):
        b = self.upper
        k = np.minimum(np.asarray(k, dtype=float), b ** (1.0 / alpha))
        ka = k**alpha
        body = alpha / (alpha + 1.0) * (b ** ((alpha + 1.0) / alpha) - k ** (alpha + 1.0))
        return (body - k * (b - ka)) / b


@dataclass(frozen=True)
class DiscreteMark(MarkModel):
    """Finitely supported nonnegative mark."""

    values: tuple = (0.5, 1.5, 2.5)
    probs: tuple = (0.5, 0.3, 0.2)
    _v: np.ndarray = field(init=False, repr=False, compare=False)
    _p: np.ndarray = field(init=False, repr=False, compare=False)
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        if v.shape != p.shape or v.ndim != 1 or v.size == 0:
            raise ValueError("values and probs must be equal-length 1-d sequences")
        if np.any(v < 0) or np.any(p <= 0) or not math.isclose(p.sum(), 1.0, abs_tol=1e-12):
            raise ValueError("values must be >= 0 and probs a positive distribution")
        order = np.argsort(v)
        v, p = v[order], p[order] / p.sum()
        object.__setattr__(self, "values", tuple(v))
        object.__setattr__(self, "probs", tuple(p))
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "_p", p)
        object.__setattr__(self, "_cum", np.cumsum(p))

    def __hash__(self):
        return hash((self.values, self.probs))

    def moment(self, power):
        return float(np.sum(self._p * self._v**power))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self._v, x, side="right")
        return np.where(idx > 0, self._cum[np.maximum(idx - 1, 0)], 0.0)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self._v, x, side="right")
        tail = np.concatenate([np.cumsum(self._p[::-1])[::-1], [0.0]])
        return tail[idx]

    def ppf(self, p):
        idx = np.searchsorted(self._cum, np.asarray(p, dtype=float), side="left")
        return self._v[np.minimum(idx, self._v.size - 1)]

    def isf(self, p):
        return self.ppf(1.0 - np.asarray(p, dtype=float))

    def sample(self, rng, size=None):
        return rng.choice(self._v, size=size, p=self._p)

    def sample_conditional(self, rng, lower=-np.inf, upper=np.inf, size=None):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        shape = np.broadcast_shapes(lower.shape, upper.shape, _draw_shape(size))
        lo = np.broadcast_to(lower, shape)[..., None]
        hi = np.broadcast_to(upper, shape)[..., None]
        w = np.where((self._v > lo) & (self._v <= hi), self._p, 0.0)
        mass = w.sum(axis=-1)
        if np.any(mass <= 0):
            raise NullEventError("conditioning band has zero probability")
        cum = np.cumsum(w, axis=-1) / mass[..., None]
        u = rng.random(shape)[..., None]
        idx = np.minimum((cum < u).sum(axis=-1), self._v.size - 1)
        out = self._v[idx]
        return out if shape else float(out)

    def _exact_tail_integral(self, k, alpha):
        k = np.asarray(k, dtype=float)
        w = self._v ** (1.0 / alpha)
        return np.sum(self._p * np.maximum(w - k[..., None], 0.0), axis=-1)


@dataclass(frozen=True)
class PointMassMark(MarkModel):
    """Deterministic mark ``value`` (e.g. unit service time)."""

    value: float = 1.0

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError("value must be >= 0")

    def moment(self, power):
        return self.value**power

    def cdf(self, x):
        return np.where(np.asarray(x, dtype=float) >= self.value, 1.0, 0.0)

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def ppf(self, p):
        return np.full_like(np.asarray(p, dtype=float), self.value)

    isf = ppf

    def sample(self, rng, size=None):
        return self.value if size is None else np.full(size, self.value)

    def sample_conditional(self, rng, lower=-np.inf, upper=np.inf, size=None):
        shape = np.broadcast_shapes(np.shape(lower), np.shape(upper), _draw_shape(size))
        inside = (np.asarray(lower) < self.value) & (self.value <= np.asarray(upper))
        if not np.all(inside):
            raise NullEventError("conditioning band excludes the point mass")
        return np.full(shape, self.value) if shape else self.value

    def _exact_tail_integral(self, k, alpha):
        return np.maximum(self.value ** (1.0 / alpha) - np.asarray(k, dtype=float), 0.0)


@dataclass(frozen=True)
class ScaledMark(MarkModel):
    """The law of ``V / scale`` for a base mark ``V``."""

    base: MarkModel
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def _up(self, x):
        return np.asarray(x, dtype=float) * self.scale

    def moment(self, power):
        return self.base.moment(power) / self.scale**power

    def cdf(self, x):
        return self.base.cdf(self._up(x))

    def sf(self, x):
        return self.base.sf(self._up(x))

    def log_cdf(self, x):
        return self.base.log_cdf(self._up(x))

    def ppf(self, p):
        return self.base.ppf(p) / self.scale

    def isf(self, p):
        return self.base.isf(p) / self.scale

    def sample(self, rng, size=None):
        return self.base.sample(rng, size) / self.scale

    def sample_conditional(self, rng, lower=-np.inf, upper=np.inf, size=None):
        out = self.base.sample_conditional(rng, self._up(lower), self._up(upper), size)
        return out / self.scale

    def _exact_tail_integral(self, k, alpha):
        factor = self.scale ** (1.0 / alpha)
        exact = self.base._exact_tail_integral(np.asarray(k, dtype=float) * factor, alpha)
        return None if exact is None else exact / factor

    def tail_integral_bound(self, k, alpha=1.0):
        factor = self.scale ** (1.0 / alpha)
        return self.base.tail_integral_bound(np.asarray(k, dtype=float) * factor, alpha) / factor
