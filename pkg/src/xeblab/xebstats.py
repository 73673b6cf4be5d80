"""XEB scores, fourth-moment statistics, exponential fits, and aggregation.

Two XEB conventions exist in the wild and both are exposed: the default
score is 2^n sum_x a(x) q(x) (uniform sampler scores exactly 1); the
`minus_one` flag subtracts 1 from that.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import kolmogi, kolmogorov, logsumexp

from .circuits import BitString


@dataclass(frozen=True)
class EnsembleStat:
    """A named per-instance statistic with mean and one standard error."""

    name: str
    values: tuple[float, ...]
    mean: float
    stderr: float

    @property
    def count(self) -> int:
        return len(self.values)


def aggregate(name: str, values) -> EnsembleStat:
    """Mean and standard error (sample stddev / sqrt(count)) over instances."""
    vals = np.asarray(values, dtype=float)
    if vals.size < 2:
        raise ValueError("need at least 2 instances to aggregate")
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(vals.size))
    return EnsembleStat(name, tuple(float(v) for v in vals), mean, stderr)


def _check_tables(*tables: np.ndarray) -> int:
    sizes = {t.size for t in tables}
    if len(sizes) != 1:
        raise ValueError(f"distribution tables of different sizes: {sizes}")
    size = sizes.pop()
    n = size.bit_length() - 1
    if 1 << n != size:
        raise ValueError(f"table size {size} is not a power of two")
    for t in tables:
        if abs(float(t.sum()) - 1.0) > 1e-9:
            raise ValueError("distribution table does not sum to 1 within 1e-9")
    return n


def xeb_exact(q: np.ndarray, a: np.ndarray, minus_one: bool = False) -> float:
    """2^n sum_x a(x) q(x), optionally minus 1 (subtract-one convention)."""
    q = np.asarray(q, dtype=float)
    a = np.asarray(a, dtype=float)
    n = _check_tables(q, a)
    score = float(2.0**n * np.dot(a, q))
    return score - 1.0 if minus_one else score


def xeb_empirical(q: np.ndarray, samples: list[BitString], minus_one: bool = False) -> float:
    """2^n times the sample mean of q over drawn bitstrings."""
    if not samples:
        raise ValueError("samples must be nonempty")
    q = np.asarray(q, dtype=float)
    idx = np.array([s.index for s in samples])
    score = float(2.0 ** samples[0].n * q[idx].mean())
    return score - 1.0 if minus_one else score


def _scaled_power_sum(log_weights: np.ndarray, n: int, scale_pow: int, method: str) -> float:
    if method == "log":
        return float(np.exp(scale_pow * n * math.log(2.0) + logsumexp(log_weights)))
    raise ValueError(f"unknown method {method!r}")


def quantum_fourth_stat(q: np.ndarray, method: str = "log") -> float:
    """2^{3n} sum_x q(x)^4, accumulated in the log domain by default."""
    q = np.asarray(q, dtype=float)
    n = _check_tables(q)
    if method == "direct":
        return float(2.0 ** (3 * n) * np.sum(q**4))
    pos = q[q > 0]
    return _scaled_power_sum(4.0 * np.log(pos), n, 3, method)


def spoof_fourth_stat(q: np.ndarray, a: np.ndarray, method: str = "log") -> float:
    """2^{3n} sum_x a(x)^2 q(x)^2."""
    q = np.asarray(q, dtype=float)
    a = np.asarray(a, dtype=float)
    n = _check_tables(q, a)
    if method == "direct":
        return float(2.0 ** (3 * n) * np.sum(a**2 * q**2))
    mask = (q > 0) & (a > 0)
    logs = 2.0 * np.log(a[mask]) + 2.0 * np.log(q[mask])
    return _scaled_power_sum(logs, n, 3, method)


def sample_complexity_value(n: int, jt: float) -> float:
    """180000 (1+3e^{-24 JT})^n / (1+e^{-24 JT})^{2n}, evaluated in log domain."""
    if jt < 0:
        raise ValueError("JT must be >= 0")
    u = math.exp(-24.0 * jt)
    logm = math.log(180000.0) + n * math.log1p(3.0 * u) - 2.0 * n * math.log1p(u)
    if logm <= 700.0:
        return math.exp(logm)
    # Astronomical counts: return a finite float-precision value by scaling.
    k = int(logm / math.log(2.0)) - 50
    return math.ldexp(math.exp(logm - k * math.log(2.0)), k)


def sample_complexity_m(n: int, jt: float) -> int:
    """Number of bitstring samples sufficient to pin the empirical score."""
    v = sample_complexity_value(n, jt)
    if math.isinf(v):
        raise OverflowError("sample complexity exceeds float range")
    return math.ceil(v)


def exponential_ks_distance(values: np.ndarray, rate: float) -> float:
    """Kolmogorov-Smirnov sup distance of a sample against Exp(rate)."""
    x = np.sort(np.asarray(values, dtype=float))
    m = x.size
    cdf = -np.expm1(-rate * x)
    i = np.arange(1, m + 1)
    return float(np.max(np.maximum(i / m - cdf, cdf - (i - 1) / m)))


def ks_critical_value(alpha: float, m: int) -> float:
    """Asymptotic KS critical value: reject when D > this."""
    return float(kolmogi(alpha)) / math.sqrt(m)


def ks_pvalue(d: float, m: int) -> float:
    return float(kolmogorov(d * math.sqrt(m)))


def porter_thomas_fit(values) -> tuple[float, float]:
    """Maximum-likelihood exponential rate and KS distance of the fit.

    For return probabilities p drawn from Q(p) = b e^{-b p}, the MLE is
    b_hat = 1/mean(p). Non-positive values are rejected.
    """
    vals = np.asarray(values, dtype=float)
    if vals.size < 2:
        raise ValueError("need at least 2 values to fit")
    if np.any(vals <= 0):
        raise ValueError("values must be positive")
    bhat = 1.0 / float(vals.mean())
    return bhat, exponential_ks_distance(vals, bhat)
