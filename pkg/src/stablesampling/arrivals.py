"""Arrival epochs ``A_1, ..., A_{max(n, kappa(A)) + 1}`` of a stationary renewal process."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tilted_walk import TiltParams, extend_beyond_kappaA, sample_to_kappaA

__all__ = ["ArrivalBlock", "sample_arrivals"]


@dataclass
class ArrivalBlock:
    """Epochs ``A_1..A_{m+1}`` together with the certificate index ``kappa(A)``.

    For every ``k >= kappa`` the epoch ``A_{k+1}`` is at least ``k * slope``.
    """

    epochs: np.ndarray
    kappa: int
    walk: np.ndarray
    slope: float
    segments: int = 1
    extension_proposals: int = 0

    @property
    def horizon(self) -> int:
        return self.epochs.size - 1

    def certificate_margin(self) -> float:
        """``min_{k >= kappa} (A_{k+1} - k * slope)`` over the block; never negative."""
        k = np.arange(self.kappa, self.horizon + 1)
        return float(np.min(self.epochs[k] - k * self.slope))


def sample_arrivals(
    params: TiltParams,
    n: int,
    rng: np.random.Generator,
    first_epoch: float | None = None,
) -> ArrivalBlock:
    """Sample ``A_1..A_{m+1}`` with ``m = max(n, kappa(A))``.

    ``A_1`` is drawn from the equilibrium law unless ``first_epoch`` is
    given; the two-sided construction supplies it from a split
    length-biased interval.  ``A_1`` is independent of the walk, so either
    choice leaves the rest of the block unchanged.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    walk = sample_to_kappaA(params, rng)
    kappa = walk.kappa
    values = walk.values
    proposals = 0
    if kappa < n:
        tail, proposals = extend_beyond_kappaA(params, n - kappa, rng)
        values = np.concatenate([values, values[-1] + tail])
    if first_epoch is None:
        first_epoch = float(params.model.sample_equilibrium(rng))
    k = np.arange(values.size)
    epochs = first_epoch - values + k * params.slope
    return ArrivalBlock(
        epochs=epochs,
        kappa=kappa,
        walk=values,
        slope=params.slope,
        segments=walk.segments,
        extension_proposals=proposals,
    )
