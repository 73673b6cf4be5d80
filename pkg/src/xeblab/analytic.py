"""Closed-form moments of Brownian-circuit output distributions.

Every formula is evaluated internally in the log domain ((1 +/- e^{-12JT})
raised to k*n spans hundreds of orders of magnitude); functions that can
overflow or underflow take `log=True` to return the natural log instead.
The exact finite-n sums group bitstrings by Hamming weight with log-space
binomials and combine alternating-sign terms by compensated summation in
the linear domain.

Two spectra appear for the k=1 sums: the full-circuit one with level
spacing proportional to w(3n - 2w - 1)/n, and the spoofer-model one with
w(3n - 2w)/n (no -1). Both are kept as written; each docstring says which
one it evaluates.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, logsumexp

LN2 = math.log(2.0)


def _log_binom(m: int, j) -> np.ndarray:
    j = np.asarray(j, dtype=float)
    return gammaln(m + 1.0) - gammaln(j + 1.0) - gammaln(m - j + 1.0)


def _log_one_minus_u(jt: float) -> float:
    """log(1 - e^{-12 JT}), -inf at JT = 0."""
    if jt <= 0:
        return -math.inf
    return math.log(-math.expm1(-12.0 * jt))


def _log_one_plus_u(jt: float) -> float:
    return math.log1p(math.exp(-12.0 * jt))


def _finish(logval: float, log: bool) -> float:
    return logval if log else math.exp(logval)


def _check(n: int, jt: float) -> None:
    if n < 0:
        raise ValueError("n must be >= 0")
    if jt < 0:
        raise ValueError("JT must be >= 0")


def _check_positive_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1 for the exact spectrum sums")


def _signed_weight_sum(m_bits: int, hx: int, decay) -> float:
    """2^{-m} sum over bitstrings z of (-1)^{x.z} e^{-decay(|z|)} for |x| = hx.

    Grouped as sum_{a<=hx, b<=m-hx} (-1)^a C(hx,a) C(m-hx,b) e^{-decay(a+b)};
    terms are built in log space, rescaled by the max, and combined with
    exact compensated summation.
    """
    a = np.arange(hx + 1)
    b = np.arange(m_bits - hx + 1)
    w = a[:, None] + b[None, :]
    logmag = (_log_binom(hx, a)[:, None] + _log_binom(m_bits - hx, b)[None, :]) - decay(w)
    sign = np.where(a[:, None] % 2 == 0, 1.0, -1.0)
    top = float(np.max(logmag))
    scaled = (sign * np.exp(logmag - top)).reshape(-1)
    total = math.fsum(scaled.tolist())
    return total * math.exp(top - m_bits * LN2)


def return_prob_exact(n: int, jt: float) -> float:
    """Expected all-zeros return probability, exact at every n.

    2^{-n} sum_w C(n,w) exp(-4 JT w (3n - 2w - 1)/n): the full-circuit
    spectrum with the -1. Goes to 1 at JT=0 and to 2^{-n} at large JT.
    """
    _check(n, jt)
    _check_positive_n(n)
    w = np.arange(n + 1)
    logterms = _log_binom(n, w) - 4.0 * jt * w * (3 * n - 2 * w - 1) / n
    return math.exp(float(logsumexp(logterms)) - n * LN2)


def transition_prob_exact(n: int, jt: float, hx: int) -> float:
    """Expected probability of a weight-hx output string, exact at every n.

    Same spectrum as `return_prob_exact` (with the -1); the target string
    only enters through the (-1)^{x.z} signs, i.e. through its weight.
    """
    _check(n, jt)
    _check_positive_n(n)
    if not 0 <= hx <= n:
        raise ValueError(f"hx must be in 0..{n}")
    return _signed_weight_sum(n, hx, lambda w: 4.0 * jt * w * (3 * n - 2 * w - 1) / n)


def kth_moment_largen(n: int, jt: float, k: int, hx: int, log: bool = False) -> float:
    """Large-n k-th moment of q(x): (k!/2^{kn}) (1-u)^{k hx} (1+u)^{k(n-hx)}."""
    _check(n, jt)
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 <= hx <= n:
        raise ValueError(f"hx must be in 0..{n}")
    logval = gammaln(k + 1.0) - k * n * LN2 + k * (n - hx) * _log_one_plus_u(jt)
    if hx:
        logval += k * hx * _log_one_minus_u(jt)
    return _finish(logval, log)


def kth_moment_sum(n: int, jt: float, k: int, log: bool = False) -> float:
    """Large-n bitstring sum of the k-th moment:
    (k!/2^{kn}) [(1-u)^k + (1+u)^k]^n."""
    _check(n, jt)
    if k < 1:
        raise ValueError("k must be >= 1")
    bracket = logsumexp([k * _log_one_minus_u(jt), k * _log_one_plus_u(jt)])
    logval = gammaln(k + 1.0) - k * n * LN2 + n * float(bracket)
    return _finish(logval, log)


def xeb_quantum_expect(n: int, jt: float, log: bool = False) -> float:
    """Expected ideal-sampler XEB score: 2 (1 + e^{-24 JT})^n."""
    _check(n, jt)
    logval = LN2 + n * math.log1p(math.exp(-24.0 * jt))
    return _finish(logval, log)


def xeb_quantum_small_jt(n: int, jt: float) -> float:
    """Late-time expansion of the score in the minus-one convention:
    1 + 2 n e^{-24 JT}."""
    _check(n, jt)
    return 1.0 + 2.0 * n * math.exp(-24.0 * jt)


def third_moment_sum(n: int, jt: float, log: bool = False) -> float:
    """sum_x E[q^3] = (3!/2^{2n}) (1 + 3 e^{-24 JT})^n."""
    _check(n, jt)
    logval = gammaln(4.0) - 2 * n * LN2 + n * math.log1p(3.0 * math.exp(-24.0 * jt))
    return _finish(logval, log)


def fourth_moment_sum(n: int, jt: float, log: bool = False) -> float:
    """sum_{x,y} E[q(x)^2 q(y)^2] = (4!/2^{2n}) (1 + e^{-24 JT})^{2n}."""
    _check(n, jt)
    logval = gammaln(5.0) - 2 * n * LN2 + 2 * n * math.log1p(math.exp(-24.0 * jt))
    return _finish(logval, log)


def third_fourth_quantum(n: int, jt: float, log: bool = False) -> tuple[float, float]:
    return third_moment_sum(n, jt, log), fourth_moment_sum(n, jt, log)


def paley_zygmund_ratio(n: int, jt: float) -> float:
    """(E[sum q^2])^2 / (4 E[(sum q^2)^2]); equals 1/24 at every (n, JT)."""
    log_mean = kth_moment_sum(n, jt, 2, log=True)
    log_sq = fourth_moment_sum(n, jt, log=True)
    return math.exp(2.0 * log_mean - math.log(4.0) - log_sq)


def quantum_fourth_sum(n: int, jt: float, log: bool = False) -> float:
    """2^{3n} sum_x E[q^4] = 4! (1 + 6 e^{-24 JT} + e^{-48 JT})^n."""
    _check(n, jt)
    u = math.exp(-24.0 * jt)
    logval = math.log(24.0) + n * math.log1p(6.0 * u + u * u)
    return _finish(logval, log)


def spoofer_overlap_moment(
    n: int, jt: float, K: int, c: int, hx: int, log: bool = False
) -> float:
    """Large-n E[q(x)^c A(x)^c] for the K-subset amplified disjoint model:
    ((c!)^{1+K}/2^{2cn}) (1-u)^{2c hx} (1+u)^{2c(n-hx)}."""
    _check(n, jt)
    _check_kc(K, c, n)
    if not 0 <= hx <= n:
        raise ValueError(f"hx must be in 0..{n}")
    logval = (1 + K) * gammaln(c + 1.0) - 2 * c * n * LN2
    logval += 2 * c * (n - hx) * _log_one_plus_u(jt)
    if hx:
        logval += 2 * c * hx * _log_one_minus_u(jt)
    return _finish(logval, log)


def spoofer_overlap_sum(n: int, jt: float, K: int, c: int, log: bool = False) -> float:
    """Bitstring sum of the overlap moment:
    ((c!)^{1+K}/2^{2cn}) [(1-u)^{2c} + (1+u)^{2c}]^n."""
    _check(n, jt)
    _check_kc(K, c, n)
    bracket = logsumexp([2 * c * _log_one_minus_u(jt), 2 * c * _log_one_plus_u(jt)])
    logval = (1 + K) * gammaln(c + 1.0) - 2 * c * n * LN2 + n * float(bracket)
    return _finish(logval, log)


def spoofer_overlap_and_moments(
    n: int, jt: float, K: int, c: int, hx: int, log: bool = False
) -> tuple[float, float]:
    """(per-bitstring overlap moment, its bitstring sum)."""
    return (
        spoofer_overlap_moment(n, jt, K, c, hx, log),
        spoofer_overlap_sum(n, jt, K, c, log),
    )


def spoofer_overlap_finite(
    n: int,
    jt: float,
    subset_sizes: list[int],
    subset_weights: list[int],
    amplification_sq: float | None = None,
) -> float:
    """Finite-size E[q(x) A(x)]: a product of exact spectrum sums.

    One factor for the full circuit over all n qubits and one per disjoint
    subsystem of M_l qubits with couplings amplified by A^2 (default K).
    These factors use the spoofer-model spectrum w(3m - 2w)/n, without the
    -1 of `return_prob_exact`. `subset_weights[l]` is the Hamming weight of
    the target string restricted to subsystem l.
    """
    _check(n, jt)
    _check_positive_n(n)
    if len(subset_sizes) != len(subset_weights):
        raise ValueError("need one weight per subset")
    if sum(subset_sizes) != n:
        raise ValueError("subset sizes must sum to n")
    for m, w in zip(subset_sizes, subset_weights):
        if not 0 <= w <= m:
            raise ValueError("subset weight out of range")
    K = len(subset_sizes)
    a_sq = float(K) if amplification_sq is None else float(amplification_sq)
    hx = sum(subset_weights)
    value = _signed_weight_sum(n, hx, lambda w: 4.0 * jt * w * (3 * n - 2 * w) / n)
    for m, wl in zip(subset_sizes, subset_weights):
        value *= _signed_weight_sum(
            m, wl, lambda w: 4.0 * a_sq * jt * w * (3 * m - 2 * w) / n
        )
    return value


def disjoint_circuit_moment(
    n: int, jt: float, K: int, k: int, hx: int, log: bool = False
) -> float:
    """Large-n E[A(x)^k] = ((k!)^K/2^{kn}) (1-u)^{k hx} (1+u)^{k(n-hx)}."""
    _check(n, jt)
    _check_kc(K, k, n)
    if not 0 <= hx <= n:
        raise ValueError(f"hx must be in 0..{n}")
    logval = K * gammaln(k + 1.0) - k * n * LN2 + k * (n - hx) * _log_one_plus_u(jt)
    if hx:
        logval += k * hx * _log_one_minus_u(jt)
    return _finish(logval, log)


def disjoint_circuit_moment_sum(
    n: int, jt: float, K: int, k: int, log: bool = False
) -> float:
    """Bitstring sum of E[A^k]: ((k!)^K/2^{kn}) [(1-u)^k + (1+u)^k]^n."""
    _check(n, jt)
    _check_kc(K, k, n)
    bracket = logsumexp([k * _log_one_minus_u(jt), k * _log_one_plus_u(jt)])
    logval = K * gammaln(k + 1.0) - k * n * LN2 + n * float(bracket)
    return _finish(logval, log)


def disjoint_circuit_moments(
    n: int, jt: float, K: int, k: int, hx: int, log: bool = False
) -> tuple[float, float]:
    return (
        disjoint_circuit_moment(n, jt, K, k, hx, log),
        disjoint_circuit_moment_sum(n, jt, K, k, log),
    )


class VarianceLimits(NamedTuple):
    spoofer: float
    spoofer_approx: float
    true: float


def variance_limits(n: int, K: int, log: bool = False) -> VarianceLimits:
    """Long-time XEB variances: (2^{1+K}-1)/2^{4n} for the spoofer (with its
    2^{1+K}/2^{4n} approximation) against (4!-4)/2^{4n} for the ideal
    sampler."""
    if n < 1 or K < 1:
        raise ValueError("n and K must be >= 1")
    if log:
        scale = -4 * n * LN2
        return VarianceLimits(
            math.log(math.expm1((1 + K) * LN2)) + scale,
            (1 + K) * LN2 + scale,
            math.log(20.0) + scale,
        )
    denom = 2.0 ** (4 * n)
    if math.isinf(denom) or K > 1022:
        raise OverflowError("use log=True for parameters this large")
    return VarianceLimits((2.0 ** (1 + K) - 1.0) / denom, 2.0 ** (1 + K) / denom, 20.0 / denom)


def porter_thomas_b(n: int, jt: float, log: bool = False) -> float:
    """Effective Hilbert-space dimension of the output-probability
    exponential: 2^n (1 + e^{-12 JT})^{-n}."""
    _check(n, jt)
    logval = n * LN2 - n * _log_one_plus_u(jt)
    return _finish(logval, log)


def onedesign_overlap(n: int, jt: float, c: int, K: int, log: bool = False) -> float:
    """Overlap moment in the strongly single-qubit-scrambled variant:
    ((c!)^{1+K}/2^{2cn}) (1 + (c(2c-1)/3) e^{-24 JT})^n."""
    _check(n, jt)
    _check_kc(K, c, n)
    coef = c * (2 * c - 1) / 3.0
    logval = (1 + K) * gammaln(c + 1.0) - 2 * c * n * LN2
    logval += n * math.log1p(coef * math.exp(-24.0 * jt))
    return _finish(logval, log)


class DiscreteBounds(NamedTuple):
    qs: float
    spoofer: float
    qs_product: float


def discrete_bounds(n: int, d: int, log: bool = False) -> DiscreteBounds:
    """Expected-XEB lower bounds for depth-d all-to-all circuits.

    qs:         2^{(1/3)(1/5)^d n}        ideal sampler
    spoofer:    (1+(1/15)^d)^{n/(d^2+1)}  greedy-partition spoofer
    qs_product: (1+(1/3)(2/5)^d)^n        ideal sampler, product form

    The two ideal-sampler forms are distinct bounds and are never conflated.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    log_qs = (n / 3.0) * (0.2**d) * LN2
    log_sp = (n / (d * d + 1.0)) * math.log1p(15.0**-d)
    log_qp = n * math.log1p((1.0 / 3.0) * (0.4**d))
    if log:
        return DiscreteBounds(log_qs, log_sp, log_qp)
    return DiscreteBounds(math.exp(log_qs), math.exp(log_sp), math.exp(log_qp))


def _check_kc(K: int, c: int, n: int) -> None:
    if K < 1 or K > n:
        raise ValueError(f"K must be in 1..{n}")
    if c < 1:
        raise ValueError("moment order must be >= 1")
