"""Desk-scale lab for shallow random-circuit sampling statistics.

Generates all-to-all and 1D-brickwork Haar random circuits, simulates them
exactly, runs the gate-deletion XEB spoofer against them, and validates the
white-noise (Brownian) circuit moment formulas by Monte Carlo against their
closed forms.
"""
from .circuits import (
    ALL_TO_ALL,
    BRICK1D_PERIODIC,
    BitString,
    Circuit,
    Gate,
    gen_all_to_all,
    gen_brick1d,
    haar_u4,
    haar_unitary,
)
from .seeding import SeedSpec
from .spoofer import Partition, block_partition, greedy_partition, spoof_distribution, truncate
from .statevector import StateVector, new_zero_state, output_distribution, run_circuit, sample_bitstrings
from .xebstats import EnsembleStat, aggregate, porter_thomas_fit, xeb_exact, xeb_empirical
from .brownian import BrownianConfig, estimate_moment, estimate_overlap, simulate_trajectory

__all__ = [
    "ALL_TO_ALL",
    "BRICK1D_PERIODIC",
    "BitString",
    "BrownianConfig",
    "Circuit",
    "EnsembleStat",
    "Gate",
    "Partition",
    "SeedSpec",
    "StateVector",
    "aggregate",
    "block_partition",
    "estimate_moment",
    "estimate_overlap",
    "gen_all_to_all",
    "gen_brick1d",
    "greedy_partition",
    "haar_u4",
    "haar_unitary",
    "new_zero_state",
    "output_distribution",
    "porter_thomas_fit",
    "run_circuit",
    "sample_bitstrings",
    "simulate_trajectory",
    "spoof_distribution",
    "truncate",
    "xeb_exact",
    "xeb_empirical",
]

__version__ = "0.1.0"
