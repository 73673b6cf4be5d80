"""Trotterized Monte Carlo simulation of white-noise two-qubit circuits.

One trajectory applies, per timestep and per ordered qubit pair j<k, the nine
exact rotations exp(-i theta sigma_j^a sigma_k^b) with independent Gaussian
angles theta ~ N(0, J_eff dt / n). Variants:

  full      all pairs, J_eff = J;
  disjoint  n/K-qubit contiguous blocks; cross-block pairs are skipped and
            intra-block angles are amplified by A (default sqrt(K));
  onedesign additionally applies per-qubit rotations with angle variance
            mu*dt after each two-qubit sweep.

The sweep order is fixed (pairs lexicographic, axes xx,xy,...,zz; qubits
ascending for the single-qubit pass) and each trajectory consumes one
standard-normal block of shape (steps, noise_per_step) from its own derived
stream, so results are reproducible for any batching of trajectories.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .circuits import BitString
from .errors import ResourceGuardError
from .paulis import PAULI_1Q
from .seeding import SeedSpec
from .statevector import StateVector, new_zero_state
from .xebstats import EnsembleStat, aggregate

MAX_MC_QUBITS = 14
MAX_STEPS = 10_000_000
NOISE_TAG = "brownian-noise"

_AXES = ("x", "y", "z")
_PAIR_PAULIS = [
    np.kron(PAULI_1Q[a.upper()], PAULI_1Q[b.upper()]) for a, b in product(_AXES, _AXES)
]
_EYE4 = np.eye(4, dtype=complex)
_EYE2 = np.eye(2, dtype=complex)
_SINGLE_PAULIS = [PAULI_1Q[a.upper()] for a in _AXES]


@dataclass(frozen=True)
class BrownianConfig:
    """One white-noise trajectory ensemble."""

    n: int
    J: float = 1.0
    T: float = 0.1
    dt: float = 1e-3
    variant: str = "full"
    K: int | None = None
    amplification: float | None = None
    mu: float | None = None
    trajectories: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least 2 qubits")
        if self.dt <= 0 or self.T < 0:
            raise ValueError("need dt > 0 and T >= 0")
        if self.J < 0:
            raise ValueError("J must be >= 0")
        if self.variant not in ("full", "disjoint", "onedesign"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "disjoint":
            if self.K is None or not 1 <= self.K <= self.n or self.n % self.K:
                raise ValueError("disjoint variant needs K dividing n")
        if self.variant == "onedesign" and (self.mu is None or self.mu < 0):
            raise ValueError("onedesign variant needs mu >= 0")
        if self.trajectories < 1:
            raise ValueError("trajectories must be >= 1")

    @property
    def steps(self) -> int:
        return round(self.T / self.dt)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(j, k) for j in range(self.n) for k in range(j + 1, self.n)]

    @property
    def amplification_value(self) -> float:
        if self.variant != "disjoint":
            return 1.0
        return math.sqrt(self.K) if self.amplification is None else self.amplification

    @property
    def subset_of(self) -> np.ndarray:
        """Block id per qubit for the disjoint variant (contiguous blocks)."""
        m = self.n // self.K
        return np.arange(self.n) // m

    @property
    def noise_per_step(self) -> int:
        n2 = 9 * len(self.pairs)
        return n2 + 3 * self.n if self.variant == "onedesign" else n2

    def guard(self) -> None:
        if self.n > MAX_MC_QUBITS:
            raise ResourceGuardError(
                f"trajectory simulation capped at n={MAX_MC_QUBITS}, got n={self.n}"
            )
        if self.steps > MAX_STEPS:
            raise ResourceGuardError(f"step count {self.steps} exceeds {MAX_STEPS}")

    def trajectory_stream(self, index: int) -> np.random.Generator:
        return SeedSpec(self.seed, index, NOISE_TAG).stream()


def draw_step_angles(cfg: BrownianConfig, rng: np.random.Generator) -> np.ndarray:
    """Applied rotation angles for one step of the config's own circuit.

    Consumes one standard-normal block of size noise_per_step and scales it:
    two-qubit angles get std sqrt(J_eff dt / n) with cross-block entries
    zeroed for the disjoint variant; onedesign single-qubit angles get std
    sqrt(mu dt).
    """
    g = rng.normal(size=cfg.noise_per_step)
    return _scale_angles(cfg, g, own_circuit=True)


def _two_qubit_scales(cfg: BrownianConfig, own_circuit: bool) -> np.ndarray:
    base = math.sqrt(cfg.J * cfg.dt / cfg.n)
    scales = np.full(9 * len(cfg.pairs), base)
    if own_circuit and cfg.variant == "disjoint":
        sub = cfg.subset_of
        for ip, (j, k) in enumerate(cfg.pairs):
            if sub[j] == sub[k]:
                scales[9 * ip : 9 * ip + 9] *= cfg.amplification_value
            else:
                scales[9 * ip : 9 * ip + 9] = 0.0
    return scales


def _scale_angles(cfg: BrownianConfig, g: np.ndarray, own_circuit: bool) -> np.ndarray:
    out = np.array(g, dtype=float, copy=True)
    n2 = 9 * len(cfg.pairs)
    out[..., :n2] = out[..., :n2] * _two_qubit_scales(cfg, own_circuit)
    if cfg.variant == "onedesign":
        out[..., n2:] = out[..., n2:] * math.sqrt(cfg.mu * cfg.dt)
    return out


def _pair_rotation_matrices(theta: np.ndarray) -> np.ndarray:
    """Compose the nine rotations of one pair into a single (B, 4, 4) unitary.

    theta has shape (B, 9); the product is taken in application order, so the
    result equals applying the nine exact rotations sequentially.
    """
    cos = np.cos(theta)
    msin = -1j * np.sin(theta)
    mats = cos[:, 0, None, None] * _EYE4 + msin[:, 0, None, None] * _PAIR_PAULIS[0]
    for i in range(1, 9):
        r = cos[:, i, None, None] * _EYE4 + msin[:, i, None, None] * _PAIR_PAULIS[i]
        mats = r @ mats
    return mats


def _single_rotation_matrices(theta: np.ndarray) -> np.ndarray:
    cos = np.cos(theta)
    msin = -1j * np.sin(theta)
    mats = cos[:, 0, None, None] * _EYE2 + msin[:, 0, None, None] * _SINGLE_PAULIS[0]
    for i in range(1, 3):
        r = cos[:, i, None, None] * _EYE2 + msin[:, i, None, None] * _SINGLE_PAULIS[i]
        mats = r @ mats
    return mats


def _apply_batched(states: np.ndarray, mats: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Apply per-trajectory small unitaries to (B, 2^n) states on `qubits`."""
    b = states.shape[0]
    dim = mats.shape[-1]
    psi = states.reshape(b, *[2] * n)
    axes = tuple(1 + n - 1 - q for q in qubits)
    moved = np.moveaxis(psi, axes, range(1, len(qubits) + 1))
    rest = moved.shape[len(qubits) + 1 :]
    out = np.matmul(mats, moved.reshape(b, dim, -1))
    out = np.moveaxis(out.reshape(b, *([2] * len(qubits)), *rest), range(1, len(qubits) + 1), axes)
    return np.ascontiguousarray(out).reshape(b, -1)


def _evolve_batch(
    cfg: BrownianConfig, normals: np.ndarray, own_circuit: bool = True
) -> np.ndarray:
    """Evolve a batch of |0..0> states through all steps; normals has shape
    (B, steps, noise_per_step)."""
    b = normals.shape[0]
    states = np.zeros((b, 1 << cfg.n), dtype=complex)
    states[:, 0] = 1.0
    pairs = cfg.pairs
    scales2 = _two_qubit_scales(cfg, own_circuit)
    n2 = 9 * len(pairs)
    for t in range(cfg.steps):
        block = normals[:, t, :]
        theta2 = block[:, :n2] * scales2
        for ip, (j, k) in enumerate(pairs):
            th = theta2[:, 9 * ip : 9 * ip + 9]
            if not np.any(th):
                continue
            states = _apply_batched(states, _pair_rotation_matrices(th), (j, k), cfg.n)
        if cfg.variant == "onedesign":
            theta1 = block[:, n2:] * math.sqrt(cfg.mu * cfg.dt)
            for q in range(cfg.n):
                th = theta1[:, 3 * q : 3 * q + 3]
                states = _apply_batched(states, _single_rotation_matrices(th), (q,), cfg.n)
    return states


def brownian_step(
    state: StateVector,
    cfg: BrownianConfig,
    rng: np.random.Generator | None = None,
    angles: np.ndarray | None = None,
) -> StateVector:
    """Advance one timestep. Pass `angles` (shape (noise_per_step,)) to pin
    the rotations, e.g. zeros for an identity step."""
    if angles is None:
        if rng is None:
            raise ValueError("need either rng or explicit angles")
        angles = draw_step_angles(cfg, rng)
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (cfg.noise_per_step,):
        raise ValueError(f"angles must have shape ({cfg.noise_per_step},)")
    states = state.amps.reshape(1, -1)
    n2 = 9 * len(cfg.pairs)
    for ip, (j, k) in enumerate(cfg.pairs):
        th = angles[None, 9 * ip : 9 * ip + 9]
        if not np.any(th):
            continue
        states = _apply_batched(states, _pair_rotation_matrices(th), (j, k), cfg.n)
    if cfg.variant == "onedesign":
        for q in range(cfg.n):
            th = angles[None, n2 + 3 * q : n2 + 3 * q + 3]
            states = _apply_batched(states, _single_rotation_matrices(th), (q,), cfg.n)
    state.amps = states.reshape(-1)
    return state


def simulate_trajectory(cfg: BrownianConfig, index: int = 0) -> StateVector:
    """One realization of the evolved |0..0> state, deterministic in
    (cfg.seed, index)."""
    cfg.guard()
    if cfg.steps == 0:
        return new_zero_state(cfg.n)
    normals = cfg.trajectory_stream(index).normal(
        size=(1, cfg.steps, cfg.noise_per_step)
    )
    return StateVector(cfg.n, _evolve_batch(cfg, normals)[0])


def _batch_indices(cfg: BrownianConfig, max_bytes: int = 192_000_000) -> list[np.ndarray]:
    per_traj = max(cfg.steps, 1) * cfg.noise_per_step * 8
    chunk = max(1, min(cfg.trajectories, max_bytes // max(per_traj, 1)))
    idx = np.arange(cfg.trajectories)
    return [idx[i : i + chunk] for i in range(0, cfg.trajectories, chunk)]


def _resolve_target(cfg: BrownianConfig, x, hx) -> int:
    if (x is None) == (hx is None):
        raise ValueError("give exactly one of x or hx")
    if hx is not None:
        if not 0 <= hx <= cfg.n:
            raise ValueError(f"hx must be in 0..{cfg.n}")
        return (1 << hx) - 1
    return x.bits if isinstance(x, BitString) else int(x)


def trajectory_probs(cfg: BrownianConfig, x=0, hx=None) -> np.ndarray:
    """Per-trajectory output probability q(x), one entry per trajectory."""
    cfg.guard()
    target = _resolve_target(cfg, x, hx)
    out = np.empty(cfg.trajectories)
    if cfg.steps == 0:
        out[:] = 1.0 if target == 0 else 0.0
        return out
    for idx in _batch_indices(cfg):
        normals = np.stack(
            [
                cfg.trajectory_stream(int(i)).normal(size=(cfg.steps, cfg.noise_per_step))
                for i in idx
            ]
        )
        states = _evolve_batch(cfg, normals)
        out[idx] = np.abs(states[:, target]) ** 2
    return out


def estimate_moment(cfg: BrownianConfig, k: int, x=None, hx=None) -> EnsembleStat:
    """Monte Carlo estimate of E[q(x)^k] with one standard error."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if cfg.trajectories < 100:
        raise ValueError("need at least 100 trajectories for a moment estimate")
    if x is None and hx is None:
        x = 0
    probs = trajectory_probs(cfg, x=x, hx=hx)
    return aggregate(f"q^{k}", probs**k)


def estimate_overlap(cfg: BrownianConfig, x=0) -> EnsembleStat:
    """Monte Carlo estimate of E[q_U(x) q_V(x)] for the disjoint variant.

    U (all couplings) and V (amplified intra-block couplings) share the same
    per-trajectory noise block; U additionally consumes the cross-block
    entries, which are zeroed in V.
    """
    if cfg.variant != "disjoint":
        raise ValueError("overlap estimation needs the disjoint variant")
    cfg.guard()
    target = _resolve_target(cfg, x, None)
    out = np.empty(cfg.trajectories)
    if cfg.steps == 0:
        out[:] = 1.0 if target == 0 else 0.0
    else:
        for idx in _batch_indices(cfg):
            normals = np.stack(
                [
                    cfg.trajectory_stream(int(i)).normal(
                        size=(cfg.steps, cfg.noise_per_step)
                    )
                    for i in idx
                ]
            )
            states_u = _evolve_batch(cfg, normals, own_circuit=False)
            states_v = _evolve_batch(cfg, normals, own_circuit=True)
            out[idx] = (
                np.abs(states_u[:, target]) ** 2 * np.abs(states_v[:, target]) ** 2
            )
    return aggregate("q_u*q_v", out)
