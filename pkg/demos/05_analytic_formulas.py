#!/usr/bin/env python3
"""Tour of the closed-form moment expressions.

All of these evaluate in the log domain internally, so they stay finite and
accurate far outside the range where naive evaluation would overflow.
"""
import math

from xeblab.analytic import (
    discrete_bounds,
    kth_moment_sum,
    paley_zygmund_ratio,
    porter_thomas_b,
    quantum_fourth_sum,
    spoofer_overlap_sum,
    variance_limits,
    xeb_quantum_expect,
)
from xeblab.xebstats import sample_complexity_m

n, jt = 20, 0.25
print(f"n={n}, JT={jt}")
print(f"  expected ideal-sampler XEB        2(1+e^-24JT)^n  = {xeb_quantum_expect(n, jt):.4f}")
print(f"  expected spoofer XEB (c=1 sum)    2^n * sum       = "
      f"{2.0**n * spoofer_overlap_sum(n, jt, K=5, c=1):.4f}")
print(f"  scaled 4th-moment sum             4!(1+6u+u^2)^n  = {quantum_fourth_sum(n, jt):.2f}")
print(f"  Paley-Zygmund ratio (any n, JT)                   = {paley_zygmund_ratio(n, jt):.6f}")
print(f"  effective PT dimension b / 2^n                    = "
      f"{porter_thomas_b(n, jt) / 2.0**n:.4f}")
print(f"  samples to certify the score                      = {sample_complexity_m(n, jt)}")

print()
print("long-time XEB variances: the spoofer pays 2^(K+1) against the ideal 20")
for K in (3, 5, 10):
    v = variance_limits(n, K)
    print(f"  K={K:2d}: spoofer/ideal variance ratio = {v.spoofer / v.true:8.1f}")

print()
print("discrete-circuit lower bounds at n=16")
for d in (1, 3, 5, 8):
    b = discrete_bounds(16, d)
    print(f"  d={d}: ideal >= {b.qs:9.4f} (or {b.qs_product:9.4f}), spoofer >= {b.spoofer:.6f}")

print()
print("normalization survives extreme parameters via the log domain:")
print(f"  sum_x E[q] at n=4000, JT=0.01: {kth_moment_sum(4000, 0.01, 1):.12f}")
print(f"  log of the k=6 moment sum at n=4000: {kth_moment_sum(4000, 0.01, 6, log=True):.1f}")
print(f"  (the linear value would be e^{kth_moment_sum(4000, 0.01, 6, log=True):.0f}, "
      f"hopeless in double precision: {math.inf if kth_moment_sum(4000, 0.01, 6, log=True) > 709 else 'ok'})")
