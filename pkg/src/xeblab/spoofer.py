"""Classical XEB spoofing by gate deletion.

The spoofer partitions the qubits, deletes every gate that straddles two
subsets, simulates each small subset exactly, and samples the product
distribution A(x) = prod_l q_l(x_l). Partitions come from a greedy
neighborhood construction (all-to-all layouts) or contiguous blocks (1D).
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .circuits import GENERIC, BitString, Circuit, Gate
from .statevector import output_distribution, run_circuit

MAX_SUBSET_QUBITS = 30


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of {0..n-1}. For the greedy strategy, `anchor_qubits[i]`
    is the chosen qubit whose gate neighborhood built `subsets[i]`; subsets
    past the anchors are singleton leftovers. None for other strategies."""

    n: int
    subsets: tuple[tuple[int, ...], ...]
    strategy: str
    anchor_qubits: tuple[int, ...] | None = None

    def __post_init__(self):
        seen: set[int] = set()
        for s in self.subsets:
            if tuple(sorted(s)) != tuple(s):
                raise ValueError("subset qubits must be ascending")
            if seen.intersection(s):
                raise ValueError("subsets overlap")
            seen.update(s)
        if seen != set(range(self.n)):
            raise ValueError("subsets do not cover all qubits")
        if self.anchor_qubits is not None:
            for anchor, subset in zip(self.anchor_qubits, self.subsets):
                if anchor not in subset:
                    raise ValueError("anchor qubit missing from its subset")

    @property
    def K(self) -> int:
        return len(self.subsets)

    @property
    def anchor_count(self) -> int | None:
        return None if self.anchor_qubits is None else len(self.anchor_qubits)


def greedy_partition(circuit: Circuit) -> Partition:
    """Anchor-set partition for unstructured layouts.

    Repeatedly pick the smallest live qubit i, group it with every qubit it
    shares a gate with (any layer), then retire the whole 2-hop neighborhood
    of that group from the live set. Qubits never grouped become singletons.
    For a depth-d circuit each anchor set has at most d+1 qubits and at least
    n/(d^2+1) anchor sets are produced.
    """
    n = circuit.n
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for g in circuit.gates:
        j, k = g.qubits
        neighbors[j].add(k)
        neighbors[k].add(j)

    live = set(range(n))
    anchor_sets: list[tuple[int, ...]] = []
    anchor_qubits: list[int] = []
    grouped: set[int] = set()
    while live:
        i = min(live)
        p_i = {i} | neighbors[i]
        anchor_sets.append(tuple(sorted(p_i)))
        anchor_qubits.append(i)
        grouped |= p_i
        d_i = {j for k in p_i for j in neighbors[k]} | p_i
        live -= d_i
    singles = [(j,) for j in range(n) if j not in grouped]
    return Partition(
        n, tuple(anchor_sets + singles), "greedy", anchor_qubits=tuple(anchor_qubits)
    )


def block_partition(n: int, r: int) -> Partition:
    """ceil(n/r) contiguous blocks of size r; the last block may be smaller."""
    if not 1 <= r <= n:
        raise ValueError(f"block size must be in 1..{n}, got {r}")
    subsets = tuple(
        tuple(range(start, min(start + r, n))) for start in range(0, n, r)
    )
    return Partition(n, subsets, f"block:{r}")


@dataclass(frozen=True)
class DisjointCircuit:
    """A circuit with cross-subset gates removed, plus its per-subset pieces.

    `subcircuits[l]` is the base circuit restricted to subset l with qubits
    relabeled 0..m_l-1 ascending by global index; `truncated` is the same
    surviving-gate set kept on the global labels.
    """

    base: Circuit
    partition: Partition
    truncated: Circuit
    subcircuits: tuple[Circuit, ...]


def truncate(circuit: Circuit, partition: Partition) -> DisjointCircuit:
    """Drop every gate whose qubits lie in different subsets."""
    if partition.n != circuit.n:
        raise ValueError("partition does not cover this circuit's qubits")
    owner = {}
    for l, subset in enumerate(partition.subsets):
        for q in subset:
            owner[q] = l
    local = {q: i for subset in partition.subsets for i, q in enumerate(subset)}

    kept: list[Gate] = []
    per_subset: list[list[Gate]] = [[] for _ in partition.subsets]
    for g in circuit.gates:
        j, k = g.qubits
        if owner[j] != owner[k]:
            continue
        kept.append(g)
        per_subset[owner[j]].append(Gate(g.layer, (local[j], local[k]), g.matrix))

    truncated = Circuit(circuit.n, circuit.d, tuple(kept), GENERIC)
    subcircuits = tuple(
        Circuit(len(subset), circuit.d, tuple(per_subset[l]), GENERIC)
        for l, subset in enumerate(partition.subsets)
    )
    return DisjointCircuit(circuit, partition, truncated, subcircuits)


@dataclass(frozen=True)
class SpoofDistribution:
    """Per-subset output tables and the product-form evaluator A(x)."""

    partition: Partition
    tables: tuple[np.ndarray, ...]

    def prob(self, x: BitString | int) -> float:
        bits = x.bits if isinstance(x, BitString) else int(x)
        p = 1.0
        for subset, table in zip(self.partition.subsets, self.tables):
            local = 0
            for i, q in enumerate(subset):
                local |= ((bits >> q) & 1) << i
            p *= table[local]
        return float(p)

    def full_table(self) -> np.ndarray:
        """A(x) over all 2^n bitstrings, assembled by broadcasting."""
        n = self.partition.n
        if n > 26:
            raise ValueError("full table above n=26 would not fit in memory")
        out = np.ones([1] * n)
        for subset, table in zip(self.partition.subsets, self.tables):
            dims = [1] * n
            for q in subset:
                dims[n - 1 - q] = 2
            # Ascending local = ascending global, so the reshaped axes already
            # land in descending global-qubit order.
            out = out * table.reshape(dims)
        return out.reshape(-1)


def spoof_distribution(disjoint: DisjointCircuit) -> SpoofDistribution:
    """Simulate each subset circuit on |0..0> exactly."""
    for subset in disjoint.partition.subsets:
        if len(subset) > MAX_SUBSET_QUBITS:
            raise ValueError(
                f"subset of {len(subset)} qubits is too large to simulate"
            )
    tables = tuple(output_distribution(run_circuit(sc)) for sc in disjoint.subcircuits)
    return SpoofDistribution(disjoint.partition, tables)


def spoof_sample(
    disjoint: DisjointCircuit, count: int, rng: np.random.Generator
) -> list[BitString]:
    """Independent per-subset draws concatenated into global bitstrings."""
    if count < 1:
        raise ValueError("count must be >= 1")
    dist = spoof_distribution(disjoint)
    n = disjoint.partition.n
    words = np.zeros(count, dtype=np.int64)
    for subset, table in zip(dist.partition.subsets, dist.tables):
        cum = np.cumsum(table)
        local = np.searchsorted(cum, rng.random(count) * cum[-1], side="right")
        local = np.minimum(local, table.size - 1)
        for i, q in enumerate(subset):
            words |= ((local >> i) & 1) << q
    return [BitString(n, int(w)) for w in words]


# ---------------------------------------------------------------------------
# Partition serialization: one line per subset, space-separated qubit indices.

def write_partition(partition: Partition, fh: io.TextIOBase) -> None:
    for subset in partition.subsets:
        fh.write(" ".join(str(q) for q in subset) + "\n")


def read_partition(fh: io.TextIOBase, n: int, strategy: str = "file") -> Partition:
    subsets = []
    for line in fh:
        parts = line.split()
        if parts:
            subsets.append(tuple(sorted(int(q) for q in parts)))
    return Partition(n, tuple(subsets), strategy)
