"""Independent reference computations shared by unit and acceptance tests."""
import itertools
import math
from collections import Counter

import numpy as np
from scipy import optimize


def chernoff_horizon(params, tol=1e-6):
    """Smallest N with sum_{n>N} exp(-n I) <= tol, I = -min_theta psi_Y(theta).

    Beyond N the untilted walk exceeds 0 with total probability at most ``tol``.
    """
    res = optimize.minimize_scalar(lambda t: float(params.cumulant_y(t)), bounds=(0, params.eta), method="bounded")
    rate = -res.fun
    n = math.ceil((-math.log(tol) - math.log(1 / (1 - math.exp(-rate)))) / rate)
    return max(n, 1)


def nominal_maxima(params, paths, horizon, rng, chunk=2000):
    out = []
    for start in range(0, paths, chunk):
        m = min(chunk, paths - start)
        out.append(np.cumsum(params.nominal_increments(rng, (m, horizon)), axis=1).max(axis=1))
    return np.concatenate(out)


def enumerate_joint(model, slope: float):
    """Exact law of (V_1, ..., V_{kappa+1}) when records are only possible at n = 1, 2.

    kappa <= 3, so four marks cover every outcome; V_4 never exceeds 3c.
    """
    law = Counter()
    vals, probs = model.values, model.probs
    assert max(vals) <= 3 * slope
    for combo in itertools.product(range(len(vals)), repeat=4):
        v = [vals[i] for i in combo]
        w = math.prod(probs[i] for i in combo)
        last = 0
        for n in (1, 2):
            if v[n] > n * slope:
                last = n
        kappa = last + 1
        law[tuple(v[: kappa + 1])] += w
    return law


def max_residual_oracle(lam, paths=20_000, arrivals=160, seed=1, y_max=8.0, grid=401):
    """``E R_max`` and its ``nu`` and ``lam`` derivatives at ``nu = 1``.

    Gamma(2, 2) inter-arrivals scaled by ``lam``, Lognormal(-0.25, 0.5)
    service.  Conditionally on the backward arrival epochs,
    ``P(R_max <= y) = prod_n F(nu (A_n / lam + y))``, which is smooth in both
    scales; integrating its complement over ``y`` and differentiating under
    the integral gives estimators with no pathwise discontinuity.
    """
    from scipy import special

    mu_l, s = -0.25, 0.5
    rng = np.random.default_rng(seed)
    a1 = rng.random(paths) * rng.gamma(3.0, 0.5, paths)  # equilibrium = U x length-biased
    gaps = rng.gamma(2.0, 0.5, (paths, arrivals - 1))
    base = np.concatenate([a1[:, None], a1[:, None] + np.cumsum(gaps, axis=1)], axis=1)
    a = base / lam
    ys = np.linspace(0.0, y_max, grid)
    w = np.full(grid, ys[1] - ys[0])
    w[[0, -1]] *= 0.5
    value = np.zeros(paths)
    d_nu = np.zeros(paths)
    d_lam = np.zeros(paths)
    for y, wt in zip(ys, w):
        x = a + y
        z = (np.log(x) - mu_l) / s
        log_f = special.log_ndtr(z)
        prod = np.exp(log_f.sum(axis=1))
        # d/dnu log F(nu x) at nu = 1 is x f(x) / F(x) = phi(z) / (s F)
        hazard = np.exp(-0.5 * z * z - 0.5 * math.log(2 * math.pi) - log_f) / s
        value += wt * (1 - prod)
        d_nu += wt * -prod * hazard.sum(axis=1)
        # d x / d lam = -A / lam^2, and d/dx log F(x) = hazard / x
        d_lam += wt * -prod * np.sum(hazard / x * (-a / lam), axis=1)
    out = {}
    for key, arr in (("mean", value), ("d_nu", d_nu), ("d_lam", d_lam)):
        out[key] = (float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(paths)))
    return out
