"""Exact steady state of a Poisson(100) / Lognormal infinite-server queue.

Each draw returns the residual service times of the customers present at
time 0 and the age of the current inter-arrival interval.  With Poisson
arrivals the count is Poisson(100 E V) = Poisson(88.2497).
"""
import time

import numpy as np

from stablesampling import Exponential, Lognormal, ScaledSystem, replication_rng, sample_stationary_queue

system = ScaledSystem(Exponential(1.0), Lognormal(-0.25, 0.5), lam=100.0, epsilon_fraction=0.5)
reps = 2000
t0 = time.perf_counter()
states = [sample_stationary_queue(system, replication_rng(7, r)) for r in range(reps)]
elapsed = time.perf_counter() - t0

q = np.array([s.count for s in states])
kappa = np.array([s.simulated_arrivals for s in states])
print(f"E q: {q.mean():.3f} +/- {q.std() / np.sqrt(reps):.3f} (exact {system.mean_queue:.4f})")
print(f"Var q / E q: {q.var() / q.mean():.3f} (Poisson gives 1)")
print(f"arrivals simulated per draw: mean {kappa.mean():.1f}, 99th percentile {np.percentile(kappa, 99):.0f}")
print(f"{1e3 * elapsed / reps:.2f} ms per draw")
