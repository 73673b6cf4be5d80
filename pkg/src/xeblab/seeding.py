"""Deterministic, coordination-free random streams.

Every stochastic operation in the package draws from a stream derived from a
(master_seed, instance_index, stream_tag) triple. The derivation is a pure
function, so identical triples reproduce identical circuits, samples, and
noise trajectories on any machine and under any degree of parallelism.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

MAX_SEED = 2**64 - 1


def _tag_entropy(tag: str) -> int:
    # Stable across processes (unlike hash()).
    return int.from_bytes(hashlib.sha256(tag.encode("utf-8")).digest()[:8], "little")


@dataclass(frozen=True)
class SeedSpec:
    """Names one random stream: a master seed, an ensemble member, and a tag.

    The tag separates logically distinct draws (gate choices, measurement
    samples, noise trajectories) so that adding draws to one stream never
    perturbs another.
    """

    master_seed: int
    instance_index: int = 0
    stream_tag: str = "default"

    def __post_init__(self):
        if not 0 <= self.master_seed <= MAX_SEED:
            raise ValueError(f"master_seed must fit in 64 bits, got {self.master_seed}")
        if self.instance_index < 0:
            raise ValueError("instance_index must be non-negative")

    def stream(self) -> np.random.Generator:
        """Derive the counter-based generator for this (seed, instance, tag)."""
        seq = np.random.SeedSequence(
            [self.master_seed, self.instance_index, _tag_entropy(self.stream_tag)]
        )
        return np.random.Generator(np.random.Philox(seq))

    def with_instance(self, instance_index: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, instance_index, self.stream_tag)

    def with_tag(self, stream_tag: str) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.instance_index, stream_tag)
