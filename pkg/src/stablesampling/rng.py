"""Keyed random streams.

Every replication gets its own counter-based generator derived from
``(seed, replication)``; inside a replication the samplers spawn child
streams for marks and arrivals (child 0 drives arrivals and their coins,
child 1 the marks), so the independence the constructions rely on is
structural rather than a matter of draw order.
"""
from __future__ import annotations

import numpy as np

__all__ = ["replication_rng", "replication_rngs", "PURPOSES"]

PURPOSES = ("arrivals", "marks")


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """Philox generator keyed by ``(seed, replication)``; independent of the order reps run in."""
    if seed < 0 or replication < 0:
        raise ValueError("seed and replication must be nonnegative")
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replication),))
    return np.random.Generator(np.random.Philox(ss))


def replication_rngs(seed: int, replications, start: int = 0):
    return [replication_rng(seed, start + r) for r in range(replications)]
