#!/usr/bin/env python3
"""Desk-scale fourth-moment sweep: where does the spoofer's statistic pass
the ideal sampler's?

Estimates 2^{3n} sum_x q^4 (ideal) and 2^{3n} sum_x a^2 q^2 (spoofer) over
circuit ensembles, the quantities whose ordering flips with depth for
all-to-all circuits and never flips for 1D brickwork. Writes the same CSV
the `xeblab fig1` / `xeblab fig2` commands emit.
"""
from xeblab.harness import ExperimentConfig, run_fig1, run_fig2

print("all-to-all, n=12, 60 instances (takes about a minute)")
cfg = ExperimentConfig(
    experiment="fig1", n_values=(12,), d_values=(3, 5, 8),
    instances=60, master_seed=5, workers=2, out="fig1_demo.csv",
)
for row in run_fig1(cfg):
    print(f"  d={row.depth_or_t:3.0f} {row.stat_name:15s} {row.mean:10.2f} +- {row.stderr:.2f}")

print()
print("periodic brickwork, n=12, d=6, block spoofers")
cfg = ExperimentConfig(
    experiment="fig2", n_values=(12,), d_values=(6,), block_sizes=(3, 6),
    instances=60, master_seed=5, workers=2, out="fig2_demo.csv",
)
for row in run_fig2(cfg):
    print(f"  {row.stat_name:15s} partition={row.partition:8s} {row.mean:9.2f} +- {row.stderr:.2f}")

print()
print("wrote fig1_demo.csv and fig2_demo.csv (plot with figures/plot.py)")
