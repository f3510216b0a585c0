"""Scenario files: the single entry point tying circuit, tripod, gate, noise
and cavity choices together, plus the one-point simulation pipeline.

Scenarios are JSON with unit-suffixed keys (GHz, ns, Phi_0, kelvin); every
internal quantity is converted to angular rad/ns on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fluxtripod import circuit as circ
from fluxtripod import noise as noisemod
from fluxtripod import power as powermod
from fluxtripod import pulses, scoring
from fluxtripod.cavity import CavitySpec
from fluxtripod.propagation import EvolutionSpec, propagate_six_axial

TWOPI = 2.0 * np.pi

PROTOCOL_CHOICES = ("adiabatic", "satd", "satd_chirped", "direct", "direct_chirped")
SWEEP_AXES = ("t_g_ns", "omega0_scaled", "v_rms")


@dataclass(frozen=True)
class Scenario:
    """Fully resolved run description (internal units)."""

    circuit: circ.CircuitSpec
    basis_size: int
    levels: int
    tripod_indices: tuple[int, int, int, int]
    protocol: str
    alpha: float
    beta: float
    gamma0: float
    t_g: float
    t_ramp: float | None
    omega0: float | None  # None -> power-optimal at each t_g
    chi: float
    noise: noisemod.NoiseModel | None
    cavity: CavitySpec | None
    sweep_axis: str | None
    sweep_values: tuple[float, ...]
    rel_tol: float | None
    stark_samples: int

    def __post_init__(self):
        if self.protocol not in PROTOCOL_CHOICES:
            raise ValueError(f"protocol must be one of {PROTOCOL_CHOICES}")
        if self.sweep_axis is not None:
            if self.sweep_axis not in SWEEP_AXES:
                raise ValueError(f"sweep axis must be one of {SWEEP_AXES}")
            if len(self.sweep_values) == 0:
                raise ValueError("sweep values must be nonempty")
            if any(v <= 0 for v in self.sweep_values):
                raise ValueError("sweep values must be positive")

    def resolved_dict(self) -> dict:
        """Round-trippable config echo (external units)."""
        out = {
            "circuit": {
                "e_c_ghz": self.circuit.e_c_ghz,
                "e_j_ghz": self.circuit.e_j_ghz,
                "e_l_ghz": self.circuit.e_l_ghz,
                "flux_phi0": self.circuit.flux_phi0,
                "basis_size": self.basis_size,
                "levels": self.levels,
            },
            "tripod": {
                "idx0": self.tripod_indices[0],
                "idx1": self.tripod_indices[1],
                "idx_a": self.tripod_indices[2],
                "idx_e": self.tripod_indices[3],
            },
            "gate": {
                "protocol": self.protocol,
                "alpha_rad": self.alpha,
                "beta_rad": self.beta,
                "gamma0_rad": self.gamma0,
                "t_g_ns": self.t_g,
                "t_ramp_ns": self.t_ramp,
                "omega0_ghz": None if self.omega0 is None else self.omega0 / TWOPI,
                "chi_rad": self.chi,
            },
            "solver": {"rel_tol": self.rel_tol, "stark_samples": self.stark_samples},
        }
        if self.noise is not None:
            out["noise"] = {
                "a_flux_phi0": self.noise.a_flux,
                "d_factor": self.noise.d_factor,
                "q_diel": self.noise.q_diel,
                "temperature_k": self.noise.temperature,
                "all_decay_channels": self.noise.all_decay_channels,
            }
        if self.cavity is not None:
            out["cavity"] = {
                "omega_cav_ghz": self.cavity.omega_cav / TWOPI,
                "kappa_ghz": self.cavity.kappa / TWOPI,
                "g_ghz": self.cavity.g / TWOPI,
                "n_th": self.cavity.n_th,
                "n_cav_max": self.cavity.n_cav_max,
            }
        if self.sweep_axis is not None:
            out["sweep"] = {"axis": self.sweep_axis, "values": list(self.sweep_values)}
        return out


def scenario_from_dict(raw: dict) -> Scenario:
    c = raw["circuit"]
    spec = circ.CircuitSpec(
        e_c_ghz=float(c["e_c_ghz"]),
        e_j_ghz=float(c["e_j_ghz"]),
        e_l_ghz=float(c["e_l_ghz"]),
        flux_phi0=float(c["flux_phi0"]),
    )
    trip = raw["tripod"]
    gate = raw.get("gate", {})
    noise_raw = raw.get("noise")
    noise = None
    if noise_raw is not None:
        noise = noisemod.NoiseModel(
            a_flux=float(noise_raw.get("a_flux_phi0", 3e-6)),
            d_factor=float(noise_raw.get("d_factor", noisemod.DEFAULT_D_FACTOR)),
            q_diel=(None if noise_raw.get("q_diel") is None else float(noise_raw["q_diel"])),
            temperature=float(noise_raw.get("temperature_k", 0.0)),
            all_decay_channels=bool(noise_raw.get("all_decay_channels", False)),
        )
    cavity_raw = raw.get("cavity")
    cavity = None
    if cavity_raw is not None:
        cavity = CavitySpec(
            omega_cav=TWOPI * float(cavity_raw["omega_cav_ghz"]),
            kappa=TWOPI * float(cavity_raw["kappa_ghz"]),
            g=TWOPI * float(cavity_raw["g_ghz"]),
            n_th=float(cavity_raw.get("n_th", 0.0)),
            n_cav_max=float(cavity_raw.get("n_cav_max", 0.05)),
        )
    sweep_raw = raw.get("sweep")
    omega0_ghz = gate.get("omega0_ghz")
    solver = raw.get("solver", {})
    return Scenario(
        circuit=spec,
        basis_size=int(c.get("basis_size", circ.DEFAULT_BASIS_SIZE)),
        levels=int(c.get("levels", circ.DEFAULT_LEVELS)),
        tripod_indices=(
            int(trip["idx0"]),
            int(trip["idx1"]),
            int(trip["idx_a"]),
            int(trip["idx_e"]),
        ),
        protocol=gate.get("protocol", "satd_chirped"),
        alpha=float(gate.get("alpha_rad", np.pi / 4)),
        beta=float(gate.get("beta_rad", 0.0)),
        gamma0=float(gate.get("gamma0_rad", np.pi)),
        t_g=float(gate.get("t_g_ns", 100.0)),
        t_ramp=(None if gate.get("t_ramp_ns") is None else float(gate["t_ramp_ns"])),
        omega0=(None if omega0_ghz is None else TWOPI * float(omega0_ghz)),
        chi=float(gate.get("chi_rad", np.pi)),
        noise=noise,
        cavity=cavity,
        sweep_axis=(None if sweep_raw is None else sweep_raw["axis"]),
        sweep_values=tuple(float(v) for v in (sweep_raw or {}).get("values", ())),
        rel_tol=(None if solver.get("rel_tol") is None else float(solver["rel_tol"])),
        stark_samples=int(solver.get("stark_samples", pulses.DEFAULT_STARK_SAMPLES)),
    )


def load_scenario(path: str | Path) -> Scenario:
    return scenario_from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# one-point pipeline
# ---------------------------------------------------------------------------

_OPTIMAL_SCALE_CACHE: dict = {}


def optimal_omega0(t_g: float) -> float:
    """Power-optimal pulse scale for a given gate time (scale-invariant, cached)."""
    if "scale" not in _OPTIMAL_SCALE_CACHE:
        _OPTIMAL_SCALE_CACHE["scale"] = powermod.optimize_omega0(1.0) / TWOPI
    return TWOPI * _OPTIMAL_SCALE_CACHE["scale"] / t_g


@dataclass
class PreparedSystem:
    """Diagonalized circuit shared across sweep points."""

    spectrum: circ.SpectrumData
    trip: circ.TripodAssignment


def prepare_system(scn: Scenario) -> PreparedSystem:
    spectrum = circ.diagonalize(scn.circuit, scn.basis_size, scn.levels)
    trip = circ.assign_tripod(spectrum, scn.tripod_indices)
    return PreparedSystem(spectrum=spectrum, trip=trip)


def build_scenario_drive(scn: Scenario, system: PreparedSystem, t_g: float | None = None):
    """Drive signal + level-shift table for the scenario's protocol at gate time t_g."""
    t_g = scn.t_g if t_g is None else t_g
    chirped = scn.protocol.endswith("_chirped")
    if scn.protocol.startswith("direct"):
        signal, table = pulses.direct_drive_pulse(
            system.spectrum,
            system.trip,
            chi=scn.chi,
            t_g=t_g,
            chirped=chirped,
            samples=scn.stark_samples,
        )
        params = None
    else:
        omega0 = scn.omega0 if scn.omega0 is not None else optimal_omega0(t_g)
        params = pulses.GateParams(
            alpha=scn.alpha,
            beta=scn.beta,
            gamma0=scn.gamma0,
            omega0=omega0,
            t_g=t_g,
            t_ramp=(None if scn.t_ramp is None else scn.t_ramp),
            protocol=("adiabatic" if scn.protocol == "adiabatic" else "satd"),
            chirped=chirped,
        )
        signal, table = pulses.build_tripod_drive(
            system.spectrum, system.trip, params, samples=scn.stark_samples
        )
    return signal, table, params


def simulate_point(
    scn: Scenario,
    system: PreparedSystem | None = None,
    t_g: float | None = None,
    workers: int = 0,
) -> dict:
    """Run one gate simulation and score it; returns a flat record."""
    if system is None:
        system = prepare_system(scn)
    t_g = scn.t_g if t_g is None else t_g
    spectrum, trip = system.spectrum, system.trip
    signal, table, params = build_scenario_drive(scn, system, t_g)

    dissipators = None
    if scn.noise is not None:
        decay_pairs = noisemod.decay_channel_pairs(
            spectrum, scn.noise, (trip.idx_e, scn.noise.reference_level)
        )
        dissipators = noisemod.build_dissipators(spectrum, scn.noise, t_g, decay_pairs)

    mode = "open_lab" if dissipators is not None else "closed_lab"
    espec = EvolutionSpec(
        mode=mode,
        spectrum=spectrum,
        signal=signal,
        dissipators=dissipators,
        rel_tol=scn.rel_tol,
    )
    finals = propagate_six_axial(espec, trip.qubit_indices, workers=workers)

    if scn.protocol.startswith("direct"):
        target = scoring.target_unitary(np.pi / 4, 0.0, scn.chi)
    else:
        target = scoring.target_unitary(scn.alpha, scn.beta, scn.gamma0)
    chirp_ints = (0.0, 0.0)
    if table is not None:
        chirp_ints = (table.integral(trip.idx0), table.integral(trip.idx1))
    frame = scoring.frame_unitary(
        (spectrum.energies[trip.idx0], spectrum.energies[trip.idx1]),
        signal.t_total,
        chirp_ints,
    )
    report = scoring.averaged_fidelity(
        finals, target, frame, trip.qubit_indices, trip.tripod_indices
    )

    v_rms = powermod.v_rms_direct(signal)
    record = {
        "protocol": scn.protocol,
        "t_g_ns": t_g,
        "fbar": report.fbar,
        "error": report.error,
        "leakage": report.leakage,
        "v_rms": v_rms,
        "per_state": list(report.per_state),
        "mode": mode,
    }
    if params is not None:
        record["omega0_ghz"] = params.omega0 / TWOPI
        record["omega_rms_scaled"] = (
            powermod.omega_rms(t_g, params.omega0) * t_g / TWOPI
        )
    if scn.cavity is not None:
        record["n_cav"] = v_rms**2 / (2.0 * scn.cavity.g**2)
        record["n_cav_budget"] = scn.cavity.n_cav_max
    return record
