"""Gate-quality metrics: target unitaries, dynamical-frame phases,
state-averaged fidelity, and leakage out of the tripod subspace."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

TRACE_TOL = 1e-6


@dataclass(frozen=True)
class GateTarget:
    """Geometric-gate unitary on the qubit pair: a rotation by gamma0 about the
    axis set by (alpha, beta), times the accompanying overall phase."""

    u_g01: np.ndarray
    n_vec: np.ndarray
    alpha: float
    beta: float
    gamma0: float

    def __post_init__(self):
        self.u_g01.setflags(write=False)
        self.n_vec.setflags(write=False)
        dev = np.max(np.abs(self.u_g01 @ self.u_g01.conj().T - np.eye(2)))
        if dev > 1e-12:
            raise ValueError("target matrix is not unitary")
        if abs(np.linalg.norm(self.n_vec) - 1.0) > 1e-12:
            raise ValueError("rotation axis must be a unit vector")


@dataclass(frozen=True)
class FidelityReport:
    fbar: float
    error: float
    leakage: float
    per_state: tuple[float, ...]


def target_unitary(alpha: float, beta: float, gamma0: float) -> GateTarget:
    """exp(-i gamma0/2) * exp(-i gamma0/2 n.sigma) with
    n = (sin 2a cos b, sin 2a sin b, cos 2a)."""
    n_vec = np.array(
        [np.sin(2 * alpha) * np.cos(beta), np.sin(2 * alpha) * np.sin(beta), np.cos(2 * alpha)]
    )
    n_dot_sigma = sum(c * p for c, p in zip(n_vec, PAULIS))
    half = gamma0 / 2.0
    rot = np.cos(half) * np.eye(2, dtype=complex) - 1j * np.sin(half) * n_dot_sigma
    return GateTarget(
        u_g01=np.exp(-1j * half) * rot, n_vec=n_vec, alpha=alpha, beta=beta, gamma0=gamma0
    )


def frame_unitary(energies, t_total: float, chirp_integrals=(0.0, 0.0)) -> np.ndarray:
    """Diagonal dynamical-phase unitary of the two qubit levels over the full
    window: exp(-i [eps_k t_total + integral of the drive-induced shift])."""
    phases = np.asarray(energies, dtype=float) * t_total + np.asarray(chirp_integrals, dtype=float)
    return np.diag(np.exp(-1j * phases))


def axial_qubit_states() -> list[np.ndarray]:
    """The six axial Bloch-sphere pure states as 2x2 density matrices,
    ordered +x, -x, +y, -y, +z, -z."""
    out = []
    for pauli in PAULIS:
        for sign in (1.0, -1.0):
            out.append(0.5 * (np.eye(2, dtype=complex) + sign * pauli))
    return out


def axial_state_vectors(qubit_indices: tuple[int, int], n_levels: int) -> list[np.ndarray]:
    """The same six states as normalized vectors embedded in the full space."""
    i0, i1 = qubit_indices
    vecs2 = [
        np.array([1.0, 1.0]) / np.sqrt(2),
        np.array([1.0, -1.0]) / np.sqrt(2),
        np.array([1.0, 1.0j]) / np.sqrt(2),
        np.array([1.0, -1.0j]) / np.sqrt(2),
        np.array([1.0, 0.0]),
        np.array([0.0, 1.0]),
    ]
    out = []
    for v in vecs2:
        full = np.zeros(n_levels, dtype=complex)
        full[i0], full[i1] = v[0], v[1]
        out.append(full)
    return out


def axial_states(qubit_indices: tuple[int, int], n_levels: int) -> list[np.ndarray]:
    """The six axial states as density matrices embedded in the full space."""
    return [np.outer(v, v.conj()) for v in axial_state_vectors(qubit_indices, n_levels)]


def _embed_qubit_operator(op2: np.ndarray, qubit_indices, n_levels: int) -> np.ndarray:
    full = np.zeros((n_levels, n_levels), dtype=complex)
    full[np.ix_(qubit_indices, qubit_indices)] = op2
    return full


def averaged_fidelity(
    finals: list[np.ndarray],
    target: GateTarget,
    frame: np.ndarray,
    qubit_indices: tuple[int, int],
    tripod_indices: tuple[int, ...],
) -> FidelityReport:
    """State-averaged gate fidelity over the six axial initial states.

    The comparison unitary is the frame phase times the target, embedded as
    zero outside the qubit block, so any population that left the qubit
    subspace is penalized automatically. ``finals`` must follow the axial
    ordering of :func:`axial_states` and be lab-frame density matrices.
    """
    if len(finals) != 6:
        raise ValueError("exactly six axial final states expected")
    n_levels = finals[0].shape[0]
    u_q = frame @ target.u_g01
    overlaps = []
    leak_total = 0.0
    for rho2, rho_final in zip(axial_qubit_states(), finals):
        trace = float(np.trace(rho_final).real)
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"final state trace deviates by {abs(trace - 1.0):.2e}")
        ideal = _embed_qubit_operator(u_q @ rho2 @ u_q.conj().T, qubit_indices, n_levels)
        overlaps.append(float(np.trace(ideal @ rho_final).real))
        pops = np.diag(rho_final).real
        leak_total += 1.0 - float(np.sum(pops[list(tripod_indices)]))
    fbar = float(np.mean(overlaps))
    return FidelityReport(
        fbar=fbar,
        error=1.0 - fbar,
        leakage=leak_total / 6.0,
        per_state=tuple(overlaps),
    )


def leakage(finals: list[np.ndarray], tripod_indices: tuple[int, ...]) -> float:
    """State-averaged population left outside the tripod subspace."""
    total = 0.0
    for rho in finals:
        pops = np.diag(rho).real
        total += 1.0 - float(np.sum(pops[list(tripod_indices)]))
    return total / len(finals)
