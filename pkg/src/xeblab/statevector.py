"""Dense statevector simulation.

Amplitudes are stored as one complex128 vector of length 2^n, indexed by the
packed bitstring (qubit 0 = least significant bit). Gate application works on
views reshaped to [2]*n, where qubit j corresponds to axis n-1-j.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import MAX_QUBITS, BitString, Circuit, Gate
from .paulis import pauli_action, pauli_pair_action


@dataclass
class StateVector:
    n: int
    amps: np.ndarray

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())


def new_zero_state(n: int) -> StateVector:
    """|0...0> on n qubits."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n must be in 1..{MAX_QUBITS} (memory bound), got {n}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def apply_matrix_4x4(amps: np.ndarray, m: np.ndarray, j: int, k: int, n: int) -> np.ndarray:
    """Apply a 4x4 unitary to qubits (j, k); pair index is 2*bit_j + bit_k."""
    psi = amps.reshape([2] * n)
    axj, axk = n - 1 - j, n - 1 - k
    moved = np.moveaxis(psi, (axj, axk), (0, 1))
    rest = moved.shape[2:]
    out = m @ moved.reshape(4, -1)
    out = np.moveaxis(out.reshape(2, 2, *rest), (0, 1), (axj, axk))
    return np.ascontiguousarray(out).reshape(-1)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    j, k = gate.qubits
    if max(j, k) >= state.n:
        raise IndexError(f"gate on {gate.qubits} out of range for n={state.n}")
    state.amps = apply_matrix_4x4(state.amps, gate.matrix, j, k, state.n)
    return state


def run_circuit(circuit: Circuit) -> StateVector:
    """U|0^n>, layers in order, within a layer ascending by first qubit.

    Gates within a layer act on disjoint pairs so the distribution does not
    depend on the within-layer order; fixing it makes runs bit-reproducible.
    """
    state = new_zero_state(circuit.n)
    for gate in sorted(circuit.gates, key=lambda g: (g.layer, g.qubits[0])):
        apply_gate(state, gate)
    return state


def output_distribution(state: StateVector) -> np.ndarray:
    """q(x) = |amps[x]|^2 as a length-2^n float array."""
    return np.abs(state.amps) ** 2


def sample_bitstrings(
    state: StateVector, count: int, rng: np.random.Generator
) -> list[BitString]:
    """count i.i.d. draws from the output distribution (cumsum + binary search)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    probs = output_distribution(state)
    cum = np.cumsum(probs)
    idx = np.searchsorted(cum, rng.random(count) * cum[-1], side="right")
    idx = np.minimum(idx, probs.size - 1)
    return [BitString(state.n, int(i)) for i in idx]


def apply_two_qubit_pauli_rotation(
    state: StateVector, j: int, k: int, alpha: str, beta: str, theta: float
) -> StateVector:
    """exp(-i theta sigma_j^alpha sigma_k^beta) = cos(theta) I - i sin(theta) P."""
    if j == k:
        raise ValueError("rotation needs two distinct qubits")
    if max(j, k) >= state.n or min(j, k) < 0:
        raise IndexError(f"qubits ({j}, {k}) out of range for n={state.n}")
    src, coef = pauli_pair_action(alpha, beta, j, k, state.n)
    psi = state.amps
    state.amps = np.cos(theta) * psi - (1j * np.sin(theta)) * (coef * psi[src])
    return state


def apply_single_qubit_pauli_rotation(
    state: StateVector, j: int, alpha: str, theta: float
) -> StateVector:
    """exp(-i theta sigma_j^alpha)."""
    if not 0 <= j < state.n:
        raise IndexError(f"qubit {j} out of range for n={state.n}")
    src, coef = pauli_action(alpha, j, state.n)
    psi = state.amps
    state.amps = np.cos(theta) * psi - (1j * np.sin(theta)) * (coef * psi[src])
    return state
