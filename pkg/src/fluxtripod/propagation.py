"""Time evolution of the driven circuit.

Three modes: closed-system lab frame (Schrodinger), open-system lab frame
(Lindblad, full density matrix), and the ideal four-level resonant model.

Lab-frame propagation works internally in the interaction picture of the bare
level energies: the state picks up only the drive-induced dynamics while the
carrier phases enter analytically, which keeps step sizes tied to the drive
rather than to absolute level energies. Sampled states are transformed back to
the lab frame, so every returned quantity is lab frame. The diagonal dephasing
operator and single-element collapse operators commute with that transformation
up to phases that cancel inside each dissipator term.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from fluxtripod.circuit import SpectrumData
from fluxtripod.noise import DissipatorSet
from fluxtripod.pulses import DriveSignal, GateParams, adiabatic_envelopes, satd_envelopes

TWOPI = 2.0 * np.pi

MODES = ("closed_lab", "open_lab", "closed_rwa")
DEFAULT_REL_TOL_CLOSED = 1e-10
DEFAULT_REL_TOL_OPEN = 1e-8
DEFAULT_ABS_TOL = 1e-12
CARRIER_STEP_DIVISOR = 20
MIN_SAMPLES = 401


class PropagationError(RuntimeError):
    """Integration failed; carries the time reached when it gave up."""

    def __init__(self, message: str, t_reached: float):
        super().__init__(message)
        self.t_reached = t_reached


@dataclass(frozen=True)
class EvolutionSpec:
    """What to evolve and how accurately.

    Lab modes need ``spectrum`` + ``signal``; the resonant four-level mode
    needs ``rwa_params`` (evolved on the interior window [0, t_g] in the basis
    order 0, 1, a, e). ``dissipators`` applies to open_lab only.
    """

    mode: str
    spectrum: SpectrumData | None = None
    signal: DriveSignal | None = None
    rwa_params: GateParams | None = None
    dissipators: DissipatorSet | None = None
    rel_tol: float | None = None
    abs_tol: float = DEFAULT_ABS_TOL
    max_step: float | None = None
    samples: int = MIN_SAMPLES

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.mode.endswith("_lab"):
            if self.spectrum is None or self.signal is None:
                raise ValueError("lab modes need spectrum and signal")
        elif self.rwa_params is None:
            raise ValueError("closed_rwa needs rwa_params")
        if self.mode != "open_lab" and self.dissipators is not None:
            raise ValueError("dissipators are supported in open_lab mode only")
        if self.rel_tol is None:
            default = DEFAULT_REL_TOL_OPEN if self.mode == "open_lab" else DEFAULT_REL_TOL_CLOSED
            object.__setattr__(self, "rel_tol", default)
        for name in ("rel_tol", "abs_tol"):
            if not 0 < getattr(self, name) <= 1e-3:
                raise ValueError(f"{name} must lie in (0, 1e-3]")
        if self.max_step is None:
            object.__setattr__(self, "max_step", self._default_max_step())
        elif self.mode.endswith("_lab") and self.max_step > self._carrier_cap() * (1 + 1e-12):
            raise ValueError("max_step exceeds a twentieth of the shortest carrier period")
        if self.samples < MIN_SAMPLES:
            raise ValueError(f"need at least {MIN_SAMPLES} sample points")

    def _carrier_cap(self) -> float:
        return (TWOPI / float(np.max(self.signal.carriers))) / CARRIER_STEP_DIVISOR

    def _default_max_step(self) -> float:
        if self.mode.endswith("_lab"):
            return self._carrier_cap()
        return self.rwa_params.t_g / MIN_SAMPLES

    @property
    def t_total(self) -> float:
        if self.mode.endswith("_lab"):
            return self.signal.t_total
        return self.rwa_params.t_g

    @property
    def n_levels(self) -> int:
        return self.spectrum.levels if self.mode.endswith("_lab") else 4


@dataclass(frozen=True)
class Trajectory:
    """Sampled lab-frame evolution; ``states`` holds state vectors (closed) or
    density matrices (open) at ``times``; the last sample is ``final_state``."""

    times: np.ndarray
    states: np.ndarray
    is_open: bool
    rel_tol: float

    def __post_init__(self):
        self.times.setflags(write=False)
        self.states.setflags(write=False)
        tol = 10.0 * self.rel_tol
        if self.is_open:
            traces = np.einsum("tkk->t", self.states).real
            if np.max(np.abs(traces - 1.0)) > tol:
                raise PropagationError("trace drifted beyond 10 * rel_tol", float(self.times[-1]))
            herm = np.max(np.abs(self.states - np.conj(np.swapaxes(self.states, -1, -2))))
            if herm > tol:
                raise PropagationError("density matrix lost Hermiticity", float(self.times[-1]))
        else:
            norms = np.linalg.norm(self.states, axis=1)
            if np.max(np.abs(norms - 1.0)) > tol:
                raise PropagationError("norm drifted beyond 10 * rel_tol", float(self.times[-1]))

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def populations(self) -> np.ndarray:
        if self.is_open:
            return np.einsum("tkk->tk", self.states).real
        return np.abs(self.states) ** 2


def trajectory_to_csv(
    traj: Trajectory,
    path,
    coherences: tuple[tuple[int, int], ...] = (),
    header_comment: str = "",
) -> None:
    """Write sampled level populations and selected coherences (open mode)."""
    pops = traj.populations()
    n = pops.shape[1]
    columns = ["t_ns"] + [f"pop_{k}" for k in range(n)]
    for k, l in coherences:
        columns += [f"re_rho_{k}_{l}", f"im_rho_{k}_{l}"]
    with open(path, "w", newline="") as fh:
        for line in header_comment.splitlines():
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for i, t in enumerate(traj.times):
            row = [repr(float(t))] + [repr(float(p)) for p in pops[i]]
            for k, l in coherences:
                val = traj.states[i, k, l] if traj.is_open else traj.states[i, k] * np.conj(
                    traj.states[i, l]
                )
                row += [repr(float(val.real)), repr(float(val.imag))]
            fh.write(",".join(row) + "\n")


def rwa_hamiltonian(params: GateParams, t: float) -> np.ndarray:
    """Resonant four-level Hamiltonian (basis 0, 1, a, e) at interior time t."""
    env_fn = satd_envelopes if params.protocol == "satd" else adiabatic_envelopes
    env = env_fn(t, params)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 3] = 0.5 * env[0]
    h[1, 3] = 0.5 * env[1]
    h[2, 3] = 0.5 * env[2]
    return h + h.conj().T


def hamiltonian_at(espec: EvolutionSpec, t: float) -> np.ndarray:
    """Full lab-frame Hamiltonian (or the resonant model) at time t, rad/ns."""
    if not 0 <= t <= espec.t_total:
        raise ValueError("t outside the protocol window")
    if espec.mode == "closed_rwa":
        return rwa_hamiltonian(espec.rwa_params, t)
    spectrum = espec.spectrum
    return np.diag(spectrum.energies).astype(complex) + espec.signal.voltage(t) * np.asarray(
        spectrum.charge_elems
    )


def _solve(espec: EvolutionSpec, y0: np.ndarray, rhs):
    t_eval = np.linspace(0.0, espec.t_total, espec.samples)
    sol = solve_ivp(
        rhs,
        (0.0, espec.t_total),
        y0.ravel(),
        method="RK45",
        rtol=espec.rel_tol,
        atol=espec.abs_tol,
        max_step=espec.max_step,
        t_eval=t_eval,
        dense_output=False,
    )
    if not sol.success:
        reached = float(sol.t[-1]) if sol.t.size else 0.0
        raise PropagationError(f"integrator stopped: {sol.message}", reached)
    return sol.t, sol.y


def _closed_rhs(espec: EvolutionSpec):
    n = espec.n_levels
    if espec.mode == "closed_rwa":
        params = espec.rwa_params

        def rhs(t, y):
            h = rwa_hamiltonian(params, t)
            return (-1j * h @ y.reshape(n, -1)).ravel()

        return rhs

    energies = espec.spectrum.energies
    n_mat = np.asarray(espec.spectrum.charge_elems)
    voltage = espec.signal.voltage

    def rhs(t, y):
        phase = np.exp(1j * energies * t)
        psi = y.reshape(n, -1)
        rotated = n_mat @ (phase.conj()[:, None] * psi)
        return (-1j * voltage(t) * (phase[:, None] * rotated)).ravel()

    return rhs


def _to_lab_columns(espec: EvolutionSpec, times: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Undo the interaction picture for (S, n, m) column stacks (lab modes)."""
    if espec.mode == "closed_rwa":
        return states
    back = np.exp(-1j * np.outer(times, espec.spectrum.energies))
    return back[:, :, None] * states


def _propagate_columns(espec: EvolutionSpec, columns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-mode evolution of independent state-vector columns (n, m)."""
    rhs = _closed_rhs(espec)
    times, raw = _solve(espec, columns, rhs)
    states = raw.T.reshape(len(times), *columns.shape)
    states = _to_lab_columns(espec, times, states)
    drift = np.abs(np.linalg.norm(states, axis=1) - np.linalg.norm(columns, axis=0))
    if np.max(drift) > 10.0 * espec.rel_tol:
        raise PropagationError("column norms drifted beyond 10 * rel_tol", float(times[-1]))
    return times, states


def propagate(espec: EvolutionSpec, initial: np.ndarray) -> Trajectory:
    """Evolve one initial condition across the protocol window.

    Closed modes take a normalized state vector; open mode takes a unit-trace
    Hermitian density matrix. Raises :class:`PropagationError` when the
    stepper fails or the trajectory violates its conservation tolerances.
    """
    initial = np.asarray(initial, dtype=complex)
    n = espec.n_levels
    if espec.mode == "open_lab":
        if initial.shape != (n, n):
            raise ValueError("open mode needs an (n, n) density matrix")
        if abs(np.trace(initial).real - 1.0) > 1e-9:
            raise ValueError("initial density matrix must have unit trace")
        if np.max(np.abs(initial - initial.conj().T)) > 1e-9:
            raise ValueError("initial density matrix must be Hermitian")
        return _propagate_open_batch(espec, initial[None, :, :])[0]

    if initial.shape != (n,):
        raise ValueError(f"closed modes need a length-{n} state vector")
    if abs(np.linalg.norm(initial) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    times, states = _propagate_columns(espec, initial[:, None])
    return Trajectory(times=times, states=states[:, :, 0], is_open=False, rel_tol=espec.rel_tol)


def propagate_propagator(espec: EvolutionSpec) -> np.ndarray:
    """Final propagator of a closed-mode evolution (identity initial matrix).

    One adaptive solve over all basis columns; unitarity is certified through
    the per-column norm drift.
    """
    if espec.mode == "open_lab":
        raise ValueError("propagator evolution is a closed-mode operation")
    n = espec.n_levels
    _, states = _propagate_columns(espec, np.eye(n, dtype=complex))
    return states[-1]


def _propagate_open_batch(espec: EvolutionSpec, rhos: np.ndarray) -> list[Trajectory]:
    """Evolve a stack of density matrices through one adaptive solve."""
    n = espec.n_levels
    b = rhos.shape[0]
    energies = espec.spectrum.energies
    n_mat = np.asarray(espec.spectrum.charge_elems)
    voltage = espec.signal.voltage

    # single-element collapse operators sqrt(r)|l><k| aggregate into one rate
    # matrix: population flow r[l,k] rho_kk into each |l><l| plus a uniform
    # damping of row/column k by half the total outflow
    damp = np.zeros((n, n))
    flow = np.zeros((n, n))
    general: list[np.ndarray] = []
    if espec.dissipators is not None:
        z = np.real(np.diag(espec.dissipators.z_op))
        damp = -0.5 * np.subtract.outer(z, z) ** 2
        for op in espec.dissipators.collapse_ops:
            nz = np.argwhere(op != 0)
            if len(nz) == 1:
                l, k = nz[0]
                flow[l, k] += float(np.abs(op[l, k]) ** 2)
            else:
                general.append(np.asarray(op, dtype=complex))
    outflow = flow.sum(axis=0)
    damp = damp - 0.5 * (outflow[:, None] + outflow[None, :])
    has_flow = bool(np.any(flow))
    gen_dag = [op.conj().T for op in general]
    gen_sq = [op.conj().T @ op for op in general]
    diag_idx = np.arange(n)

    def rhs(t, y):
        rho = y.reshape(b, n, n)
        phase = np.exp(1j * energies * t)
        h_rot = voltage(t) * ((phase[:, None] * n_mat) * phase.conj()[None, :])
        out = -1j * (h_rot @ rho - rho @ h_rot)
        out += damp[None, :, :] * rho
        if has_flow:
            pops = rho[:, diag_idx, diag_idx].real
            out[:, diag_idx, diag_idx] += pops @ flow.T
        for op, op_dag, op_sq in zip(general, gen_dag, gen_sq):
            out += op @ rho @ op_dag - 0.5 * (op_sq @ rho + rho @ op_sq)
        return out.ravel()

    times, raw = _solve(espec, rhos, rhs)
    states = raw.T.reshape(len(times), b, n, n)
    back = np.exp(-1j * np.outer(times, energies))
    states = back[:, None, :, None] * states * back.conj()[:, None, None, :]
    return [
        Trajectory(times=times, states=states[:, i], is_open=True, rel_tol=espec.rel_tol)
        for i in range(b)
    ]


def _propagate_one_open(args):
    espec, rho = args
    return propagate(espec, rho).final_state


def propagate_six_axial(
    espec: EvolutionSpec,
    qubit_indices: tuple[int, int],
    workers: int = 0,
) -> list[np.ndarray]:
    """Final lab-frame density matrices for the six axial qubit initial states
    (order +x, -x, +y, -y, +z, -z embedded at ``qubit_indices``).

    The six evolutions are independent; with ``workers > 1`` open-mode points
    run in a process pool, otherwise the six share one adaptive solve
    (identical equations, conservative joint step control).
    """
    from fluxtripod.scoring import axial_state_vectors

    vectors = axial_state_vectors(qubit_indices, espec.n_levels)
    if espec.mode != "open_lab":
        _, states = _propagate_columns(espec, np.stack(vectors, axis=1))
        finals = states[-1]
        return [np.outer(finals[:, i], finals[:, i].conj()) for i in range(6)]
    rhos = [np.outer(v, v.conj()) for v in vectors]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, 6)) as pool:
            return list(pool.map(_propagate_one_open, [(espec, r) for r in rhos]))
    trajs = _propagate_open_batch(espec, np.stack(rhos))
    return [t.final_state for t in trajs]
