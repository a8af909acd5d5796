"""Goodness-of-fit helpers and compensated summaries."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

__all__ = [
    "TestResult",
    "mean_se",
    "pooled_chi2",
    "poisson_chi2",
    "geometric_chi2",
    "ks_test",
    "ks_two_sample",
    "counts_two_sample",
    "batch_means",
]


@dataclass(frozen=True)
class TestResult:
    name: str
    statistic: float
    pvalue: float
    level: float
    n: int

    __test__ = False  # not a pytest class

    @property
    def passed(self) -> bool:
        return self.pvalue > self.level

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "pvalue": self.pvalue,
            "level": self.level,
            "n": self.n,
            "passed": self.passed,
        }


def mean_se(x):
    """Compensated mean and its standard error."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n == 0:
        return math.nan, math.nan
    m = math.fsum(x) / n
    se = math.sqrt(math.fsum((x - m) ** 2) / (n - 1) / n) if n > 1 else math.nan
    return m, se


def pooled_chi2(observed, expected, min_expected: float = 5.0, ddof: int = 0):
    """Pearson chi-square after merging adjacent cells until each expects ``min_expected``.

    ``expected`` must already include the tail mass in its last cell.
    Returns ``(statistic, dof, pvalue)``.
    """
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    merged_o, merged_e = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(obs, exp):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            merged_o.append(acc_o)
            merged_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if merged_e:
            merged_o[-1] += acc_o
            merged_e[-1] += acc_e
        else:
            merged_o.append(acc_o)
            merged_e.append(acc_e)
    o = np.array(merged_o)
    e = np.array(merged_e)
    dof = o.size - 1 - ddof
    if dof < 1:
        return 0.0, 0, 1.0
    stat = float(np.sum((o - e) ** 2 / e))
    return stat, dof, float(stats.chi2.sf(stat, dof))


def _discrete_chi2(name, values, pmf, sf, level, min_expected):
    values = np.asarray(values, dtype=np.int64)
    n = values.size
    top = int(values.max())
    k = np.arange(top + 1)
    probs = pmf(k)
    probs[-1] = sf(top - 1)  # last cell collects P(K >= top)
    observed = np.bincount(values, minlength=top + 1)
    stat, _, p = pooled_chi2(observed, n * probs, min_expected)
    return TestResult(name, stat, p, level, n)


def poisson_chi2(counts, mean: float, level: float = 0.01, min_expected: float = 5.0) -> TestResult:
    """Chi-square test of ``counts`` against Poisson(``mean``)."""
    law = stats.poisson(mean)
    return _discrete_chi2("poisson_chi2", counts, law.pmf, law.sf, level, min_expected)


def geometric_chi2(values, success: float, level: float = 0.01, min_expected: float = 5.0) -> TestResult:
    """Chi-square test against ``P(K = k) = (1 - s)^(k-1) s`` on ``k >= 1``."""
    values = np.asarray(values, dtype=np.int64)
    if values.min() < 1:
        raise ValueError("geometric values start at 1")
    law = stats.geom(success)
    return _discrete_chi2("geometric_chi2", values, law.pmf, law.sf, level, min_expected)


def ks_test(name, sample, cdf, level: float = 0.01) -> TestResult:
    sample = np.asarray(sample, dtype=float)
    r = stats.kstest(sample, cdf)
    return TestResult(name, float(r.statistic), float(r.pvalue), level, sample.size)


def ks_two_sample(name, a, b, level: float = 0.01) -> TestResult:
    r = stats.ks_2samp(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return TestResult(name, float(r.statistic), float(r.pvalue), level, len(a) + len(b))


def counts_two_sample(name, a, b, level: float = 0.01, min_expected: float = 5.0) -> TestResult:
    """Chi-square homogeneity test for two samples of nonnegative integers."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    top = int(max(a.max(), b.max()))
    ca = np.bincount(a, minlength=top + 1).astype(float)
    cb = np.bincount(b, minlength=top + 1).astype(float)
    # merge cells from the left until the pooled expectation of both rows is large enough
    rows, acc = [], np.zeros(2)
    for x, y in zip(ca, cb):
        acc += (x, y)
        if acc.sum() * min(a.size, b.size) / (a.size + b.size) >= min_expected:
            rows.append(acc.copy())
            acc[:] = 0
    if acc.sum() > 0:
        if rows:
            rows[-1] += acc
        else:
            rows.append(acc.copy())
    table = np.array(rows).T
    if table.shape[1] < 2:
        return TestResult(name, 0.0, 1.0, level, a.size + b.size)
    chi2, p, _, _ = stats.chi2_contingency(table, correction=False)
    return TestResult(name, float(chi2), float(p), level, a.size + b.size)


def batch_means(x, batches: int = 30):
    """Means of ``batches`` equal consecutive blocks; the remainder is dropped."""
    x = np.asarray(x, dtype=float)
    size = x.size // batches
    if size < 1:
        raise ValueError(f"need at least {batches} observations")
    return x[: size * batches].reshape(batches, size).mean(axis=1)
