"""Negative-drift random walk driven by inter-arrival times.

With ``c = mu - epsilon`` the walk ``S_n = sum_{i<=n} (c - X_i)`` has drift
``-epsilon``.  Exponentially tilting ``Y = c - X`` by the positive root
``eta`` of ``psi_Y`` turns first-passage events into certain events, which
gives exact Bernoulli coins for ``q(xi) = P(sup_n S_n > xi)`` and exact
path samples conditional on either ``T_0 < inf`` or ``T_0 = inf``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .distributions import InterArrivalModel

__all__ = [
    "NoRootError",
    "IterationCeilingError",
    "TiltParams",
    "WalkPath",
    "find_tilt_root",
    "choose_tilt",
    "sample_coin_J",
    "sample_to_kappaA",
    "extend_beyond_kappaA",
]

log = logging.getLogger(__name__)

STEP_CEILING = 10**9


class NoRootError(RuntimeError):
    """``psi_Y`` has no positive root: epsilon too large for this family."""


class IterationCeilingError(RuntimeError):
    """A loop that terminates almost surely ran past its safety ceiling."""


@dataclass(frozen=True)
class TiltParams:
    """Drift margin ``epsilon`` and the tilt root ``eta`` for one inter-arrival law."""

    model: InterArrivalModel
    epsilon: float
    eta: float

    @property
    def slope(self) -> float:
        """``mu - epsilon``: the linear envelope the arrival epochs must dominate."""
        return self.model.mean - self.epsilon

    def cumulant_y(self, theta):
        return theta * self.slope + self.model.cumulant(-np.asarray(theta, dtype=float))

    def cumulant_y_derivative(self, theta):
        return self.slope - self.model.cumulant_derivative(-np.asarray(theta, dtype=float))

    @property
    def tilted_drift(self) -> float:
        return float(self.cumulant_y_derivative(self.eta))

    def nominal_increments(self, rng, size):
        return self.slope - self.model.sample(rng, size)

    def tilted_increments(self, rng, size):
        # the eta-tilt of Y = c - X is the (-eta)-tilt of X
        return self.slope - self.model.sample_tilted(-self.eta, rng, size)


def find_tilt_root(model: InterArrivalModel, epsilon: float) -> TiltParams:
    """Positive root of ``psi_Y(theta) = theta (mu - eps) + psi(-theta)``."""
    mu = model.mean
    if not 0 < epsilon < mu:
        raise ValueError(f"epsilon must lie in (0, mu={mu}), got {epsilon}")
    if model.variance <= 0:
        raise NoRootError("degenerate inter-arrival law: psi_Y < 0 for every theta > 0")
    c = mu - epsilon

    def f(theta):
        return theta * c + float(model.cumulant(-theta))

    lo = 1.0 / mu
    while f(lo) >= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise NoRootError("could not bracket the negative region of psi_Y")
    hi = 2.0 * lo
    while f(hi) <= 0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12 / mu:
            raise NoRootError(f"psi_Y < 0 on (0, {hi:g}); shrink epsilon")
    eta = brentq(f, lo, hi, xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps, maxiter=500)
    params = TiltParams(model, float(epsilon), float(eta))
    if params.cumulant_y_derivative(eta) <= 0:
        raise NoRootError("root found where psi_Y is not increasing")
    return params


def choose_tilt(model: InterArrivalModel, epsilon: float | None = None, halvings: int = 6) -> TiltParams:
    """Default policy: ``epsilon = mu / 2``, halved until a root exists."""
    eps = model.mean / 2 if epsilon is None else float(epsilon)
    for _ in range(halvings + 1):
        try:
            return find_tilt_root(model, eps)
        except NoRootError:
            eps *= 0.5
    raise NoRootError(f"no tilt root for {model!r} even with epsilon={eps * 2:g}")


def _batch_guess(distance, drift):
    return int(min(max(8, 1.5 * distance / drift + 4), 1 << 16))


def _tilted_passage(params: TiltParams, xi: float, rng: np.random.Generator):
    """Path ``S_1..S_T`` under the tilted law, ``T = inf{n: S_n > xi}``."""
    drift = params.tilted_drift
    pieces = []
    level = 0.0
    steps = 0
    batch = _batch_guess(xi, drift)
    while True:
        path = level + np.cumsum(params.tilted_increments(rng, batch))
        above = np.flatnonzero(path > xi)
        if above.size:
            pieces.append(path[: above[0] + 1])
            break
        pieces.append(path)
        level = path[-1]
        steps += batch
        if steps > STEP_CEILING:
            raise IterationCeilingError(f"tilted walk did not pass {xi} in {steps} steps")
        batch = min(batch * 2, 1 << 20)
    return np.concatenate(pieces) if len(pieces) > 1 else pieces[0]


def sample_coin_J(params: TiltParams, xi: float, rng: np.random.Generator):
    """Bernoulli ``J(xi)`` with ``P(J = 1) = q(xi) = P(T_xi < inf)``.

    Returns ``(J, path)`` where ``path`` holds ``S_1..S_{T_xi}`` drawn under
    the tilted measure.
    """
    if xi < 0:
        raise ValueError("xi must be nonnegative")
    path = _tilted_passage(params, float(xi), rng)
    j = rng.random() <= math.exp(-params.eta * path[-1])
    return bool(j), path


@dataclass
class WalkPath:
    """``S_0..S_K`` up to ``K = kappa(A)`` with its segment boundaries."""

    values: np.ndarray
    deltas: list = field(default_factory=list)
    gammas: list = field(default_factory=list)
    proposals: int = 0

    @property
    def kappa(self) -> int:
        return self.values.size - 1

    @property
    def segments(self) -> int:
        """Number of first-passage checks; geometric with success ``1 - q(0)``."""
        return len(self.gammas) + 1


def _nominal_descent(params: TiltParams, level: float, rng):
    """Continue the nominal walk from ``level > 0`` until it is ``<= 0``."""
    pieces = []
    steps = 0
    batch = _batch_guess(level, params.epsilon)
    while True:
        path = level + np.cumsum(params.nominal_increments(rng, batch))
        below = np.flatnonzero(path <= 0)
        if below.size:
            pieces.append(path[: below[0] + 1])
            break
        pieces.append(path)
        level = path[-1]
        steps += batch
        if steps > STEP_CEILING:
            raise IterationCeilingError("nominal walk failed to return below zero")
        batch = min(batch * 2, 1 << 20)
    return np.concatenate(pieces)


def sample_to_kappaA(params: TiltParams, rng: np.random.Generator) -> WalkPath:
    """Sample ``S_0..S_{kappa(A)}``; past ``kappa(A)`` the walk never exceeds 0.

    Each round starts at a level ``S_K <= 0`` and asks, through ``J(0)``,
    whether the walk ever climbs above ``S_K``.  On ``J = 1`` the tilted
    excursion is kept (it is an exact draw conditional on the climb) and,
    if it ended above 0, the nominal walk is continued until it is back at
    or below 0; on ``J = 0``
    the walk stays below ``S_K <= 0`` forever and ``K`` is ``kappa(A)``.
    """
    pieces = [np.zeros(1)]
    level = 0.0
    k = 0
    out = WalkPath(values=np.zeros(1))
    while True:
        out.deltas.append(k)
        j, excursion = sample_coin_J(params, 0.0, rng)
        out.proposals += 1
        if not j:
            break
        up = level + excursion
        k += up.size
        out.gammas.append(k)
        pieces.append(up)
        level = float(up[-1])
        if level > 0:
            down = _nominal_descent(params, level, rng)
            pieces.append(down)
            k += down.size
            level = float(down[-1])
    out.values = np.concatenate(pieces)
    log.debug("walk: kappa(A)=%d after %d first-passage checks", out.kappa, out.proposals)
    return out


def extend_beyond_kappaA(params: TiltParams, length: int, rng: np.random.Generator):
    """``S_1..S_l`` of the walk conditioned on never exceeding 0.

    Proposes from the nominal law, rejects any path that climbs above 0
    and accepts the survivors with probability ``1 - q(-S_l)``, decided by
    one coin ``J(-S_l)``.  Returns ``(path, proposals)``.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    proposals = 0
    while True:
        proposals += 1
        path = _nominal_prefix_below_zero(params, length, rng)
        if path is None:
            continue
        j, _ = sample_coin_J(params, -float(path[-1]), rng)
        if not j:
            log.debug("extension: l=%d accepted after %d proposals", length, proposals)
            return path, proposals
        if proposals > STEP_CEILING:
            raise IterationCeilingError("conditional extension never accepted")


def _nominal_prefix_below_zero(params, length, rng):
    """Nominal path of ``length`` steps, or ``None`` as soon as it goes above 0."""
    pieces = []
    level = 0.0
    done = 0
    chunk = min(length, 32)
    while done < length:
        path = level + np.cumsum(params.nominal_increments(rng, chunk))
        if np.any(path > 0):
            return None
        pieces.append(path)
        level = path[-1]
        done += chunk
        chunk = min(length - done, chunk * 4)
    return np.concatenate(pieces) if len(pieces) > 1 else pieces[0]
