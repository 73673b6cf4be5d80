import math

import pytest

from xeblab.analytic import (
    DiscreteBounds,
    VarianceLimits,
    discrete_bounds,
    disjoint_circuit_moment,
    disjoint_circuit_moment_sum,
    disjoint_circuit_moments,
    kth_moment_largen,
    kth_moment_sum,
    onedesign_overlap,
    paley_zygmund_ratio,
    porter_thomas_b,
    quantum_fourth_sum,
    return_prob_exact,
    spoofer_overlap_and_moments,
    spoofer_overlap_finite,
    spoofer_overlap_moment,
    spoofer_overlap_sum,
    third_fourth_quantum,
    transition_prob_exact,
    variance_limits,
    xeb_quantum_expect,
    xeb_quantum_small_jt,
)

from oracles import brute_force_return_prob, brute_force_spectrum_factor, brute_force_transition_prob

BIG_JT = 50.0

GRID = [(n, jt) for n in (2, 4, 8, 16, 32, 40) for jt in (0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0)]
assert len(GRID) >= 40


def rel_log_close(la, lb, tol=1e-12):
    return abs(la - lb) <= tol * max(1.0, abs(la), abs(lb))


# -------------------------------------------------- exact k=1 spectrum sums

def test_return_prob_limits():
    for n in (2, 5, 9):
        assert return_prob_exact(n, 0.0) == pytest.approx(1.0, rel=1e-14)
        assert return_prob_exact(n, BIG_JT) == pytest.approx(2.0**-n, rel=1e-12)


def test_return_prob_matches_bruteforce():
    for n, jt in [(3, 0.1), (4, 0.3), (6, 0.7), (8, 0.05), (10, 1.3)]:
        assert return_prob_exact(n, jt) == pytest.approx(
            brute_force_return_prob(n, jt), abs=1e-14
        )


def test_transition_prob_limits():
    for hx in (0, 1, 3):
        v = transition_prob_exact(4, 0.0, hx)
        assert v == pytest.approx(1.0 if hx == 0 else 0.0, abs=1e-14)
    for hx in (0, 2, 5):
        assert transition_prob_exact(5, BIG_JT, hx) == pytest.approx(2.0**-5, rel=1e-12)


def test_transition_prob_matches_bruteforce():
    assert transition_prob_exact(4, 0.2, 2) == pytest.approx(
        brute_force_transition_prob(4, 0.2, 0b0011), abs=1e-14
    )
    for n, jt, hx in [(3, 0.4, 1), (6, 0.15, 4), (9, 0.8, 9), (7, 1.1, 3)]:
        x = (1 << hx) - 1
        assert transition_prob_exact(n, jt, hx) == pytest.approx(
            brute_force_transition_prob(n, jt, x), abs=1e-14
        )


def test_transition_prob_normalizes():
    from scipy.special import comb

    for n, jt in GRID:
        total = math.fsum(
            comb(n, hx, exact=True) * transition_prob_exact(n, jt, hx)
            for hx in range(n + 1)
        )
        assert total == pytest.approx(1.0, abs=1e-12)


# -------------------------------------------------- large-n moment formulas

def test_kth_moment_largen_examples():
    assert kth_moment_largen(6, BIG_JT, 1, 0) == pytest.approx(2.0**-6, rel=1e-12)
    for k, hx in [(1, 0), (2, 3), (4, 6)]:
        assert kth_moment_largen(6, BIG_JT, k, hx) == pytest.approx(
            math.factorial(k) * 2.0 ** (-k * 6), rel=1e-10
        )
    # hx = 0 closed form
    n, jt, k = 8, 0.4, 3
    u = math.exp(-12 * jt)
    expect = math.factorial(k) / 2.0 ** (k * n) * (1 + u) ** (k * n)
    assert kth_moment_largen(n, jt, k, 0) == pytest.approx(expect, rel=1e-12)
    assert kth_moment_largen(4, 0.0, 2, 1) == 0.0


def test_kth_moment_sum_examples():
    for n, jt in GRID:
        assert kth_moment_sum(n, jt, 1) == pytest.approx(1.0, rel=1e-12)
        u24 = math.exp(-24 * jt)
        expect = 2.0 / 2.0**n * (1 + u24) ** n
        assert kth_moment_sum(n, jt, 2) == pytest.approx(expect, rel=1e-12)
    assert kth_moment_sum(7, BIG_JT, 2) == pytest.approx(2.0 * 2.0**-7, rel=1e-12)


def test_exact_vs_largen_agreement():
    # the large-n form drops the O(1/n) spectrum corrections
    for n in (8, 16, 32):
        for jt in (0.5, 0.8, 1.2):
            for hx in (0, 1, n // 2):
                exact = transition_prob_exact(n, jt, hx)
                approx = kth_moment_largen(n, jt, 1, hx)
                assert abs(exact - approx) / exact <= 5.0 / n


def test_xeb_quantum_expect():
    assert xeb_quantum_expect(12, BIG_JT) == pytest.approx(2.0, rel=1e-12)
    assert xeb_quantum_expect(0, 0.3) == pytest.approx(2.0, rel=1e-14)
    for n, jt in GRID:
        la = xeb_quantum_expect(n, jt, log=True)
        lb = n * math.log(2.0) + kth_moment_sum(n, jt, 2, log=True)
        assert rel_log_close(la, lb)
    # late-time expansion in the subtract-one convention
    assert xeb_quantum_small_jt(10, 0.5) == pytest.approx(
        1 + 20 * math.exp(-12), rel=1e-12
    )


def test_third_fourth_quantum():
    n = 9
    third, fourth = third_fourth_quantum(n, BIG_JT)
    assert third == pytest.approx(6.0 * 2.0 ** (-2 * n), rel=1e-12)
    assert fourth == pytest.approx(24.0 * 2.0 ** (-2 * n), rel=1e-12)
    third, fourth = third_fourth_quantum(1, 0.0)
    assert third == pytest.approx(6.0, rel=1e-14)
    assert fourth == pytest.approx(24.0, rel=1e-14)


def test_paley_zygmund_ratio_constant():
    for n, jt in GRID:
        assert paley_zygmund_ratio(n, jt) == pytest.approx(1.0 / 24.0, rel=1e-12)


def test_quantum_fourth_sum():
    assert quantum_fourth_sum(10, BIG_JT) == pytest.approx(24.0, rel=1e-12)
    assert quantum_fourth_sum(3, 0.0) == pytest.approx(24.0 * 8.0**3, rel=1e-12)
    # dual-path check at e^{-24 JT} = 0.01
    jt = -math.log(0.01) / 24.0
    direct = 24.0 * (1 + 6 * 0.01 + 0.01**2) ** 16
    assert quantum_fourth_sum(16, jt) == pytest.approx(direct, rel=1e-12)


# -------------------------------------------------- spoofer overlap moments

def test_spoofer_overlap_c1_reduction():
    for n, jt in GRID:
        for hx in (0, n // 2, n):
            got = spoofer_overlap_moment(n, jt, K=min(3, n), c=1, hx=hx, log=True)
            u = math.exp(-12 * jt)
            ln = -2 * n * math.log(2.0) + 2 * (n - hx) * math.log1p(u)
            if hx:
                ln += 2 * hx * math.log(-math.expm1(-12 * jt))
            assert rel_log_close(got, ln)


def test_spoofer_overlap_sum_c1():
    for n, jt in GRID:
        got = spoofer_overlap_sum(n, jt, K=min(5, n), c=1, log=True)
        expect = -n * math.log(2.0) + n * math.log1p(math.exp(-24 * jt))
        assert rel_log_close(got, expect)


def test_spoofer_overlap_sum_c2_limit():
    n = 6
    got = spoofer_overlap_sum(n, BIG_JT, K=3, c=2)
    assert got == pytest.approx(16.0 * 2.0 ** (-3 * n), rel=1e-10)
    moment, total = spoofer_overlap_and_moments(n, 0.7, K=3, c=2, hx=0)
    assert moment == pytest.approx(spoofer_overlap_moment(n, 0.7, 3, 2, 0), rel=1e-14)
    assert total == pytest.approx(spoofer_overlap_sum(n, 0.7, 3, 2), rel=1e-14)


def test_spoofer_overlap_finite_factors():
    n, jt, K = 6, 0.4, 2
    m = n // K
    got = spoofer_overlap_finite(n, jt, [m] * K, [0] * K)
    expect = brute_force_spectrum_factor(n, jt, 0, n)
    for _ in range(K):
        expect *= brute_force_spectrum_factor(m, K * jt, 0, n)
    assert got == pytest.approx(expect, rel=1e-12)
    # weighted target string
    got = spoofer_overlap_finite(4, 0.3, [2, 2], [1, 2])
    expect = brute_force_spectrum_factor(4, 0.3, 0b0111, 4)
    expect *= brute_force_spectrum_factor(2, 2 * 0.3, 0b01, 4)
    expect *= brute_force_spectrum_factor(2, 2 * 0.3, 0b11, 4)
    assert got == pytest.approx(expect, rel=1e-12)


def test_spoofer_overlap_finite_limit():
    n = 6
    got = spoofer_overlap_finite(n, BIG_JT, [3, 3], [0, 0])
    assert got == pytest.approx(2.0 ** (-2 * n), rel=1e-10)


# -------------------------------------------------- disjoint circuit moments

def test_disjoint_reduces_to_full_at_K1():
    for n, jt in GRID:
        for k, hx in [(1, 0), (2, 2), (3, n)]:
            la = disjoint_circuit_moment(n, jt, 1, k, hx, log=True)
            lb = kth_moment_largen(n, jt, k, hx, log=True)
            if math.isinf(la) and math.isinf(lb):
                continue
            assert rel_log_close(la, lb)


def test_disjoint_k1_normalizes():
    for n, jt in GRID:
        for K in (1, 2, n):
            assert disjoint_circuit_moment_sum(n, jt, K, 1) == pytest.approx(1.0, rel=1e-12)


def test_disjoint_singletons_dual_path():
    # ((k!)^K / 2^{kn}) [(1-u)^k + (1+u)^k]^n, log path vs direct evaluation
    n, k = 8, 2
    got = disjoint_circuit_moment_sum(n, BIG_JT, K=n, k=k)
    u = math.exp(-12 * BIG_JT)
    direct = (math.factorial(k) ** n / 2.0 ** (k * n)) * ((1 - u) ** k + (1 + u) ** k) ** n
    assert got == pytest.approx(direct, rel=1e-10)
    moment, total = disjoint_circuit_moments(n, 0.5, K=2, k=2, hx=1)
    assert moment == pytest.approx(disjoint_circuit_moment(n, 0.5, 2, 2, 1), rel=1e-14)
    assert total == pytest.approx(disjoint_circuit_moment_sum(n, 0.5, 2, 2), rel=1e-14)


# -------------------------------------------------- variance limits, b, bounds

def test_variance_limits_examples():
    v = variance_limits(4, 3)
    assert v == VarianceLimits(15.0 / 2.0**16, 16.0 / 2.0**16, 20.0 / 2.0**16)
    assert v.spoofer < v.true
    v = variance_limits(4, 10)
    assert v.spoofer == pytest.approx(2047.0 / 2.0**16, rel=1e-12)
    assert v.spoofer > v.true
    for n, K in [(4, 2), (20, 7), (64, 30)]:
        lv = variance_limits(n, K, log=True)
        assert rel_log_close(lv.true, math.log(20.0) - 4 * n * math.log(2.0))
        assert rel_log_close(
            lv.spoofer_approx, (1 + K) * math.log(2.0) - 4 * n * math.log(2.0)
        )


def test_porter_thomas_b():
    assert porter_thomas_b(10, BIG_JT) == pytest.approx(2.0**10, rel=1e-10)
    assert porter_thomas_b(10, 0.0) == pytest.approx(1.0, rel=1e-12)
    u = 0.5
    jt = -math.log(u) / 12.0
    assert porter_thomas_b(10, jt) == pytest.approx((2.0 / 1.5) ** 10, rel=1e-12)


def test_onedesign_overlap():
    n = 6
    u = math.exp(-24 * 0.3)
    expect = (1.0 / 2.0 ** (2 * n)) * (1 + u / 3.0) ** n
    assert onedesign_overlap(n, 0.3, c=1, K=1) == pytest.approx(expect, rel=1e-12)
    for c, K in [(1, 2), (2, 3), (3, 1)]:
        got = onedesign_overlap(n, BIG_JT, c=c, K=K)
        expect = math.factorial(c) ** (1 + K) / 2.0 ** (2 * c * n)
        assert got == pytest.approx(expect, rel=1e-10)


def test_onedesign_xeb_late_time_expansion():
    # bitstring-independent overlap => subtract-one score 2^{2n} E[qA] - 1,
    # which expands to (n/3) e^{-24 JT} at late times
    n, jt = 12, 0.6
    score = 2.0 ** (2 * n) * onedesign_overlap(n, jt, c=1, K=3) - 1.0
    leading = (n / 3.0) * math.exp(-24.0 * jt)
    assert score == pytest.approx(leading, rel=2 * leading)


def test_discrete_bounds():
    b = discrete_bounds(16, 3)
    assert b.spoofer == pytest.approx((1 + (1 / 15.0) ** 3) ** 1.6, rel=1e-12)
    assert b.qs == pytest.approx(2.0 ** (16 / 3.0 / 125.0), rel=1e-12)
    assert b.qs_product == pytest.approx((1 + (1 / 3.0) * 0.4**3) ** 16, rel=1e-12)
    big = discrete_bounds(16, 60)
    for v in big:
        assert v == pytest.approx(1.0, abs=1e-9)
    # the two ideal-sampler forms stay distinct
    assert discrete_bounds(16, 2).qs != discrete_bounds(16, 2).qs_product
    assert isinstance(b, DiscreteBounds)


def test_input_validation():
    with pytest.raises(ValueError):
        return_prob_exact(4, -0.1)
    with pytest.raises(ValueError):
        transition_prob_exact(4, 0.1, 5)
    with pytest.raises(ValueError):
        kth_moment_largen(4, 0.1, 0, 0)
    with pytest.raises(ValueError):
        spoofer_overlap_moment(4, 0.1, 0, 1, 0)
    with pytest.raises(ValueError):
        spoofer_overlap_finite(4, 0.1, [2, 3], [0, 0])
    with pytest.raises(ValueError):
        discrete_bounds(0, 3)
