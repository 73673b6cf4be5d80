"""Pauli matrices and their action on packed basis indices.

A Pauli string acts on a computational-basis state as a signed bit
permutation: X flips the target bit, Z contributes (-1)^bit, and
Y does both with a +/-i phase. `pauli_action` exposes that form so
statevector kernels can apply Pauli products as one gather + one
multiply instead of a matrix product.
"""
from __future__ import annotations

import numpy as np

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

AXES = ("x", "y", "z")

TWO_QUBIT_LABELS = tuple(a + b for a in "IXYZ" for b in "IXYZ")


def pauli_matrix(label: str) -> np.ndarray:
    """Kron product for a Pauli label like "ZI" or "XYZ" (leftmost = qubit 0)."""
    m = np.array([[1.0 + 0j]])
    # Leftmost letter is qubit 0 = least significant bit, so it goes last in the kron.
    for ch in label.upper():
        m = np.kron(PAULI_1Q[ch], m)
    return m


def pauli_action(axis: str, qubit: int, dim_bits: int) -> tuple[np.ndarray, np.ndarray]:
    """Signed-permutation form of a single Pauli on `qubit` of a `dim_bits` register.

    Returns (src, coef) with (P psi)[y] = coef[y] * psi[src[y]].
    """
    idx = np.arange(1 << dim_bits)
    bit = (idx >> qubit) & 1
    a = axis.lower()
    if a == "x":
        return idx ^ (1 << qubit), np.ones(idx.size, dtype=complex)
    if a == "y":
        # <y|sigma_y|src>: src = y^mask, amplitude i(-1)^{src bit} = i(-1)^{1-bit(y)}
        return idx ^ (1 << qubit), np.where(bit == 1, 1j, -1j).astype(complex)
    if a == "z":
        return idx, np.where(bit == 1, -1.0, 1.0).astype(complex)
    raise ValueError(f"unknown Pauli axis {axis!r}")


def pauli_pair_action(
    alpha: str, beta: str, j: int, k: int, dim_bits: int
) -> tuple[np.ndarray, np.ndarray]:
    """Signed-permutation form of sigma_j^alpha sigma_k^beta."""
    src_j, c_j = pauli_action(alpha, j, dim_bits)
    src_k, c_k = pauli_action(beta, k, dim_bits)
    # Two distinct qubits commute; compose the gathers.
    src = src_j[src_k]
    coef = c_k * c_j[src_k]
    return src, coef
