"""Circuits, bitstrings, architectures, and Haar-random gate sampling.

Conventions fixed here and relied on everywhere else:
  * qubit indices are 0-based;
  * qubit 0 is the least significant bit of a basis index, so a BitString's
    packed word IS its basis index;
  * a 2-qubit gate matrix on the ordered pair (j, k) is indexed by
    2*bit_j + bit_k (first qubit = high bit of the 4-dim subspace).
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .paulis import PAULI_1Q, pauli_matrix
from .seeding import SeedSpec

MAX_QUBITS = 30

ALL_TO_ALL = "all-to-all"
BRICK1D_PERIODIC = "brick1d-periodic"
BRICK1D_OPEN = "brick1d-open"
GENERIC = "generic"


@dataclass(frozen=True)
class BitString:
    """An n-bit string packed into an int; qubit j lives at bit j."""

    n: int
    bits: int

    def __post_init__(self):
        if not 1 <= self.n <= 64:
            raise ValueError("BitString supports 1..64 bits")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits {self.bits} out of range for n={self.n}")

    @property
    def index(self) -> int:
        return self.bits

    def hamming_weight(self) -> int:
        return self.bits.bit_count()

    def dot(self, other: "BitString") -> int:
        """Parity of the bitwise AND, in {0, 1}."""
        if other.n != self.n:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def complement(self) -> "BitString":
        return BitString(self.n, self.bits ^ ((1 << self.n) - 1))

    def label(self) -> str:
        """Qubit-0-first string, e.g. BitString(3, 0b001) -> '100'."""
        return "".join(str((self.bits >> j) & 1) for j in range(self.n))


@dataclass(frozen=True)
class Gate:
    """A placed 2-qubit unitary: layer index, ordered qubit pair, 4x4 matrix."""

    layer: int
    qubits: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        j, k = self.qubits
        if j == k or j < 0 or k < 0:
            raise ValueError(f"invalid qubit pair {self.qubits}")
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("gate matrix must be 4x4")
        if unitarity_defect(m) > 1e-12:
            raise ValueError("gate matrix is not unitary to 1e-12")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class Circuit:
    n: int
    d: int
    gates: tuple[Gate, ...]
    architecture: str = GENERIC

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n:
                raise ValueError(f"gate on {g.qubits} out of range for n={self.n}")
            if not 0 <= g.layer < self.d:
                raise ValueError(f"gate layer {g.layer} outside 0..{self.d - 1}")
        validate_architecture(self)

    def layers(self) -> list[list[Gate]]:
        out: list[list[Gate]] = [[] for _ in range(self.d)]
        for g in self.gates:
            out[g.layer].append(g)
        return out


def validate_architecture(circuit: Circuit) -> None:
    """Enforce layer-size and qubit-coverage invariants for tagged architectures."""
    arch = circuit.architecture
    if arch == GENERIC:
        return
    for i, layer in enumerate(circuit.layers()):
        used = [q for g in layer for q in g.qubits]
        if len(set(used)) != len(used):
            raise ValueError(f"layer {i}: a qubit appears in two gates")
        if arch == ALL_TO_ALL or arch == BRICK1D_PERIODIC:
            if len(layer) != circuit.n // 2:
                raise ValueError(
                    f"layer {i}: expected {circuit.n // 2} gates, found {len(layer)}"
                )
        elif arch == BRICK1D_OPEN:
            if len(layer) not in (circuit.n // 2, circuit.n // 2 - 1):
                raise ValueError(f"layer {i}: wrong gate count for open brickwork")


def unitarity_defect(m: np.ndarray) -> float:
    """max-norm of U^dag U - I."""
    d = m.shape[-1]
    return float(np.max(np.abs(np.swapaxes(m.conj(), -1, -2) @ m - np.eye(d))))


def haar_unitary(dim: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed unitaries via Ginibre + QR with the phase fix.

    The columns of a complex-Gaussian matrix are orthonormalized and each is
    rescaled so the triangular factor has positive real diagonal. Without
    that rescaling the QR output is not Haar (numpy's sign convention biases
    the distribution), so the fix is not optional.
    """
    shape = (dim, dim) if size is None else (size, dim, dim)
    z = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (diag / np.abs(diag))[..., None, :]
    return q


def haar_u4(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """A 4x4 Haar unitary (or a stack of `size` of them)."""
    return haar_unitary(4, rng, size=size)


def pauli_conjugation_first_moment(
    label: str, samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Monte Carlo estimate of the Haar average of U P U^dag on U(4).

    The average is the identity for P = II and vanishes for every other
    2-qubit Pauli P; this estimator is used to check that fact empirically.
    """
    p = _check_two_qubit_label(label)
    if p == "II":
        return np.eye(4, dtype=complex)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pm = pauli_matrix(p)
    us = haar_u4(rng, size=samples)
    terms = us @ pm @ np.swapaxes(us.conj(), -1, -2)
    return terms.mean(axis=0)


def pauli_conjugation_moment(
    label: str, samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Monte Carlo estimate of the Haar average of (U(x)U)(P(x)P)(U(x)U)^dag on U(4).

    For P = II the result is the 16-dim identity exactly; otherwise the
    estimate converges to the uniform mixture (1/15) sum_{Q != II} Q(x)Q.
    """
    p = _check_two_qubit_label(label)
    if p == "II":
        return np.eye(16, dtype=complex)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pm = pauli_matrix(p)
    pp = np.kron(pm, pm)
    us = haar_u4(rng, size=samples)
    uu = np.einsum("sab,scd->sacbd", us, us).reshape(samples, 16, 16)
    terms = uu @ pp @ np.swapaxes(uu.conj(), -1, -2)
    return terms.mean(axis=0)


def _check_two_qubit_label(label: str) -> str:
    p = label.upper()
    if len(p) != 2 or any(ch not in PAULI_1Q for ch in p):
        raise ValueError(f"not a 2-qubit Pauli label: {label!r}")
    return p


def _check_even(n: int) -> None:
    if n < 2 or n % 2:
        raise ValueError(f"qubit count must be even and >= 2, got {n}")
    if n > 64:
        raise ValueError("qubit count above 64 is unsupported")


def gen_all_to_all(n: int, d: int, seed: SeedSpec) -> Circuit:
    """All-to-all circuit: each layer pairs the qubits by a fresh uniform
    permutation and places an independent Haar gate on every pair."""
    _check_even(n)
    if d < 1:
        raise ValueError("depth must be >= 1")
    rng = seed.stream()
    gates = []
    for layer in range(d):
        perm = rng.permutation(n)
        mats = haar_u4(rng, size=n // 2)
        for j in range(n // 2):
            gates.append(Gate(layer, (int(perm[2 * j]), int(perm[2 * j + 1])), mats[j]))
    return Circuit(n, d, tuple(gates), ALL_TO_ALL)


def gen_brick1d(n: int, d: int, seed: SeedSpec, periodic: bool = True) -> Circuit:
    """1D brickwork: even-bond layers (0,1),(2,3),... alternate with odd-bond
    layers (1,2),(3,4),...; the periodic closure (n-1,0) keeps every layer at
    n/2 gates."""
    _check_even(n)
    if d < 1:
        raise ValueError("depth must be >= 1")
    rng = seed.stream()
    gates = []
    for layer in range(d):
        if layer % 2 == 0:
            pairs = [(2 * j, 2 * j + 1) for j in range(n // 2)]
        else:
            pairs = [(2 * j + 1, (2 * j + 2) % n) for j in range(n // 2)]
            if not periodic:
                pairs = pairs[:-1]
        mats = haar_u4(rng, size=len(pairs))
        for m, (a, b) in zip(mats, pairs):
            gates.append(Gate(layer, (a, b), m))
    arch = BRICK1D_PERIODIC if periodic else BRICK1D_OPEN
    return Circuit(n, d, tuple(gates), arch)


# ---------------------------------------------------------------------------
# Line-oriented text serialization: header "n d architecture", then one line
# per gate "layer j k  m00re m00im ... m33re m33im" (row-major 4x4).

def write_circuit(circuit: Circuit, fh: io.TextIOBase) -> None:
    fh.write(f"{circuit.n} {circuit.d} {circuit.architecture}\n")
    for g in circuit.gates:
        flat = g.matrix.reshape(-1)
        nums = " ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in flat)
        fh.write(f"{g.layer} {g.qubits[0]} {g.qubits[1]} {nums}\n")


def read_circuit(fh: io.TextIOBase) -> Circuit:
    header = fh.readline().split()
    if len(header) != 3:
        raise ValueError("bad circuit header, expected 'n d architecture'")
    n, d, arch = int(header[0]), int(header[1]), header[2]
    gates = []
    for line in fh:
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3 + 32:
            raise ValueError(f"bad gate line with {len(parts)} fields")
        layer, j, k = int(parts[0]), int(parts[1]), int(parts[2])
        vals = np.array([float(x) for x in parts[3:]])
        m = (vals[0::2] + 1j * vals[1::2]).reshape(4, 4)
        gates.append(Gate(layer, (j, k), m))
    return Circuit(n, d, tuple(gates), arch)


def circuit_to_text(circuit: Circuit) -> str:
    buf = io.StringIO()
    write_circuit(circuit, buf)
    return buf.getvalue()


def circuit_from_text(text: str) -> Circuit:
    return read_circuit(io.StringIO(text))
