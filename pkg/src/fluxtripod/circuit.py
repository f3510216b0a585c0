"""Fluxonium quantization: spectra, charge/phase matrix elements, flux dispersions.

The circuit Hamiltonian is ``4 E_C n^2 - E_J cos(phi - 2 pi Phi_ext/Phi_0)
+ E_L phi^2 / 2``, diagonalized in the harmonic-oscillator basis of the
(E_C, E_L) LC mode where ``n`` and ``phi`` have closed tridiagonal forms.

Unit conventions: circuit energies enter as ordinary frequencies in GHz
(E/h); all returned energies and dispersions are angular (rad/ns).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TWOPI = 2.0 * np.pi

DEFAULT_BASIS_SIZE = 300
DEFAULT_LEVELS = 18

#: eigenvalue stability demanded when the basis grows by CONVERGENCE_STEP states
CONVERGENCE_TOL = 1e-9  # rad/ns
CONVERGENCE_STEP = 50
DEGENERACY_TOL = 1e-9  # rad/ns, tripod prerequisite
DRIVE_FREQ_SEPARATION = TWOPI * 1e-3  # rad/ns; 1 MHz crosstalk-degeneracy floor
DEFAULT_DELTA_FLUX = 1e-5  # Phi_0 units, central-difference stencil


class ConvergenceError(RuntimeError):
    """Eigensolver failed to converge in the allotted basis sizes."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class LevelCrossingError(RuntimeError):
    """Eigenvalue ordering changed inside a finite-difference stencil."""


@dataclass(frozen=True)
class CircuitSpec:
    """Fluxonium device parameters.

    Parameters
    ----------
    e_c_ghz:
        charging energy E_C/h in GHz
    e_j_ghz:
        Josephson energy E_J/h in GHz
    e_l_ghz:
        inductive energy E_L/h in GHz
    flux_phi0:
        external flux bias in units of the flux quantum
    """

    e_c_ghz: float
    e_j_ghz: float
    e_l_ghz: float
    flux_phi0: float

    def __post_init__(self):
        for name in ("e_c_ghz", "e_j_ghz", "e_l_ghz"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not np.isfinite(self.flux_phi0):
            raise ValueError("flux_phi0 must be finite")

    def replace_flux(self, flux_phi0: float) -> "CircuitSpec":
        return CircuitSpec(self.e_c_ghz, self.e_j_ghz, self.e_l_ghz, flux_phi0)


@dataclass(frozen=True)
class SpectrumData:
    """Eigendata of the fluxonium restricted to the lowest ``levels`` states.

    ``energies`` are angular frequencies (rad/ns) sorted ascending;
    ``charge_elems``/``phase_elems`` are Hermitian matrices in the eigenbasis;
    ``flux_dispersion`` holds d(energy)/d(flux) in rad/ns per Phi_0.
    """

    spec: CircuitSpec
    levels: int
    basis_size: int
    energies: np.ndarray
    charge_elems: np.ndarray
    phase_elems: np.ndarray
    flux_dispersion: np.ndarray
    convergence_residual: float
    commutator_defect: float

    def __post_init__(self):
        for arr in (self.energies, self.charge_elems, self.phase_elems, self.flux_dispersion):
            arr.setflags(write=False)

    def transition(self, lower: int, upper: int) -> float:
        """Transition angular frequency ``energies[upper] - energies[lower]``."""
        return float(self.energies[upper] - self.energies[lower])


@dataclass(frozen=True)
class TripodAssignment:
    """Level indices of the tripod {|0>, |1>, |a>, |e>} and the resonant drive tones."""

    idx0: int
    idx1: int
    idx_a: int
    idx_e: int
    omega_0e: float
    omega_1e: float
    omega_ae: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def ground_indices(self) -> tuple[int, int, int]:
        return (self.idx0, self.idx1, self.idx_a)

    @property
    def qubit_indices(self) -> tuple[int, int]:
        return (self.idx0, self.idx1)

    @property
    def tripod_indices(self) -> tuple[int, int, int, int]:
        return (self.idx0, self.idx1, self.idx_a, self.idx_e)

    @property
    def drive_freqs(self) -> tuple[float, float, float]:
        return (self.omega_0e, self.omega_1e, self.omega_ae)


def _lc_operators(spec: CircuitSpec, basis_size: int):
    """phi and the real antisymmetric part of n (n = 1j * n_imag) in the HO basis."""
    phi_zp = (2.0 * spec.e_c_ghz / spec.e_l_ghz) ** 0.25
    n_zp = 1.0 / (2.0 * phi_zp)
    lad = np.sqrt(np.arange(1.0, basis_size))
    phi = np.zeros((basis_size, basis_size))
    n_imag = np.zeros((basis_size, basis_size))
    idx = np.arange(basis_size - 1)
    phi[idx, idx + 1] = phi_zp * lad
    phi[idx + 1, idx] = phi_zp * lad
    n_imag[idx + 1, idx] = n_zp * lad
    n_imag[idx, idx + 1] = -n_zp * lad
    return phi, n_imag


def _eigensystem(spec: CircuitSpec, basis_size: int, levels: int):
    """Lowest eigenpairs in GHz units, gauge-fixed to deterministic real vectors."""
    phi, n_imag = _lc_operators(spec, basis_size)
    lam, w = np.linalg.eigh(phi)
    cos_phi = (w * np.cos(lam - TWOPI * spec.flux_phi0)) @ w.T
    hamiltonian = (
        4.0 * spec.e_c_ghz * (-n_imag @ n_imag)
        - spec.e_j_ghz * cos_phi
        + 0.5 * spec.e_l_ghz * (phi @ phi)
    )
    evals, evecs = np.linalg.eigh(hamiltonian)
    evals = evals[:levels]
    evecs = evecs[:, :levels].copy()
    # gauge: largest-magnitude component of each eigenvector real and positive
    for i in range(levels):
        pivot = int(np.argmax(np.abs(evecs[:, i])))
        if evecs[pivot, i] < 0:
            evecs[:, i] = -evecs[:, i]
    return evals, evecs, phi, n_imag


def _energies_only(spec: CircuitSpec, basis_size: int, levels: int) -> np.ndarray:
    evals, _, _, _ = _eigensystem(spec, basis_size, levels)
    return TWOPI * evals


def diagonalize(
    spec: CircuitSpec,
    basis_size: int = DEFAULT_BASIS_SIZE,
    levels: int = DEFAULT_LEVELS,
    delta_flux: float = DEFAULT_DELTA_FLUX,
) -> SpectrumData:
    """Diagonalize the fluxonium and assemble :class:`SpectrumData`.

    Convergence is certified by growing the basis by ``CONVERGENCE_STEP`` states
    and demanding eigenvalue stability below ``CONVERGENCE_TOL``; on failure the
    basis is doubled once before giving up. Raises :class:`ConvergenceError`
    or ``ValueError`` for a degenerate retained spectrum.
    """
    if levels < 4:
        raise ValueError("levels must be at least 4 (tripod prerequisite)")
    if basis_size < 4 * levels:
        raise ValueError("basis_size must be at least 4 * levels")

    size = basis_size
    for attempt in range(2):
        evals, evecs, phi, n_imag = _eigensystem(spec, size, levels)
        evals_bigger = _energies_only(spec, size + CONVERGENCE_STEP, levels) / TWOPI
        residual = TWOPI * float(np.max(np.abs(evals - evals_bigger)))
        if residual < CONVERGENCE_TOL:
            break
        if attempt == 1:
            raise ConvergenceError(
                f"eigenvalues not converged at basis_size={size} "
                f"(residual {residual:.3e} rad/ns)",
                residual,
            )
        size = 2 * basis_size

    energies = TWOPI * evals
    gaps = np.diff(energies)
    if np.any(gaps < DEGENERACY_TOL):
        k = int(np.argmin(gaps))
        raise ValueError(
            f"levels {k} and {k + 1} are degenerate within {DEGENERACY_TOL} rad/ns; "
            "a nondegenerate spectrum is required"
        )

    charge_elems = (evecs.T @ (1j * n_imag) @ evecs).astype(complex)
    phase_elems = (evecs.T @ phi @ evecs).astype(complex)
    # canonical-commutator diagnostic in the full working basis
    comm = phi @ (1j * n_imag) - (1j * n_imag) @ phi
    defect = float(np.max(np.abs(np.einsum("bk,bc,ck->k", evecs, comm, evecs) - 1j)))
    dispersion = _dispersion_all(spec, size, levels, delta_flux, energies)
    return SpectrumData(
        spec=spec,
        levels=levels,
        basis_size=size,
        energies=energies,
        charge_elems=charge_elems,
        phase_elems=phase_elems,
        flux_dispersion=dispersion,
        convergence_residual=residual,
        commutator_defect=defect,
    )


def _dispersion_all(
    spec: CircuitSpec,
    basis_size: int,
    levels: int,
    delta_flux: float,
    energies_center: np.ndarray,
) -> np.ndarray:
    """Dispersions of all retained levels; levels whose ordering is unstable
    inside the stencil (crossings near symmetric flux points) come back NaN."""
    e_plus = _energies_only(spec.replace_flux(spec.flux_phi0 + delta_flux), basis_size, levels)
    e_minus = _energies_only(spec.replace_flux(spec.flux_phi0 - delta_flux), basis_size, levels)
    disp = (e_plus - e_minus) / (2.0 * delta_flux)
    unstable = _crossing_mask(energies_center, e_plus, e_minus)
    disp[unstable] = np.nan
    return disp


def _crossing_mask(center, plus, minus) -> np.ndarray:
    # ordering-based tracking: a swap inside the stencil shows up as a level
    # moving by more than half its gap to a neighbor
    mask = np.zeros(len(center), dtype=bool)
    gaps = np.diff(center)
    for shifted in (plus, minus):
        moved = np.abs(shifted - center)
        mask[:-1] |= moved[:-1] > 0.5 * gaps
        mask[1:] |= moved[1:] > 0.5 * gaps
    return mask


def flux_dispersion(
    spec: CircuitSpec,
    level: int,
    delta_flux: float = DEFAULT_DELTA_FLUX,
    basis_size: int = DEFAULT_BASIS_SIZE,
    levels: int = DEFAULT_LEVELS,
) -> float:
    """Central-difference d(energy_level)/d(flux) in rad/ns per Phi_0."""
    if not 0 < delta_flux <= 1e-3:
        raise ValueError("delta_flux must lie in (0, 1e-3]")
    if level >= levels:
        raise ValueError("level index beyond retained count")
    center = _energies_only(spec, basis_size, levels)
    plus = _energies_only(spec.replace_flux(spec.flux_phi0 + delta_flux), basis_size, levels)
    minus = _energies_only(spec.replace_flux(spec.flux_phi0 - delta_flux), basis_size, levels)
    if _crossing_mask(center, plus, minus)[level]:
        raise LevelCrossingError(
            f"eigenvalue ordering of level {level} is not stable across the "
            f"+/-{delta_flux} Phi_0 stencil"
        )
    return float((plus[level] - minus[level]) / (2.0 * delta_flux))


def assign_tripod(spectrum: SpectrumData, indices: tuple[int, int, int, int]) -> TripodAssignment:
    """Validate a candidate tripod {idx0, idx1, idx_a, idx_e} and derive drive tones.

    Checks: four distinct valid indices, pairwise-distinct drive frequencies
    (no crosstalk degeneracy within 2 pi x 1 MHz) and nonvanishing charge
    elements on all three driven transitions. Emits diagnostics, it does not
    optimize anything.
    """
    idx0, idx1, idx_a, idx_e = (int(i) for i in indices)
    if len({idx0, idx1, idx_a, idx_e}) != 4:
        raise ValueError("tripod indices must be four distinct levels")
    if max(idx0, idx1, idx_a, idx_e) >= spectrum.levels or min(idx0, idx1, idx_a, idx_e) < 0:
        raise ValueError("tripod index beyond retained levels")

    freqs = {}
    for name, idx in (("omega_0e", idx0), ("omega_1e", idx1), ("omega_ae", idx_a)):
        f = spectrum.energies[idx_e] - spectrum.energies[idx]
        if f <= 0:
            raise ValueError(f"{name}: |e> must lie above the tripod ground levels")
        freqs[name] = float(f)

    vals = list(freqs.values())
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(vals[i] - vals[j]) < DRIVE_FREQ_SEPARATION:
                raise ValueError(
                    "drive frequencies degenerate within 2 pi x 1 MHz; "
                    "crosstalk would not be addressable"
                )

    n = spectrum.charge_elems
    elems = {
        "n_0e": abs(n[idx0, idx_e]),
        "n_1e": abs(n[idx1, idx_e]),
        "n_ae": abs(n[idx_a, idx_e]),
    }
    for name, mag in elems.items():
        if mag < 1e-8:
            raise ValueError(f"|{name}| vanishes; transition cannot be driven")

    mags = np.array(list(elems.values()))
    diagnostics = {
        "n_01": abs(n[idx0, idx1]),
        **elems,
        "qubit_isolation": abs(n[idx0, idx1]) / mags.min(),
        "drive_elem_spread": float(mags.max() / mags.min()),
        "drive_freqs_ghz": tuple(v / TWOPI for v in vals),
    }
    return TripodAssignment(
        idx0=idx0,
        idx1=idx1,
        idx_a=idx_a,
        idx_e=idx_e,
        omega_0e=freqs["omega_0e"],
        omega_1e=freqs["omega_1e"],
        omega_ae=freqs["omega_ae"],
        diagnostics=diagnostics,
    )


def load_circuit(path: str | Path) -> tuple[CircuitSpec, int, int]:
    """Read a flat key-value circuit config: e_c_ghz, e_j_ghz, e_l_ghz,
    flux_phi0 and optional basis_size / levels."""
    raw = json.loads(Path(path).read_text())
    spec = CircuitSpec(
        e_c_ghz=float(raw["e_c_ghz"]),
        e_j_ghz=float(raw["e_j_ghz"]),
        e_l_ghz=float(raw["e_l_ghz"]),
        flux_phi0=float(raw["flux_phi0"]),
    )
    return (
        spec,
        int(raw.get("basis_size", DEFAULT_BASIS_SIZE)),
        int(raw.get("levels", DEFAULT_LEVELS)),
    )


def spectrum_to_csv(spectrum: SpectrumData, path: str | Path, header_comment: str = "") -> None:
    """Export eigendata, one row per (k, l) pair."""
    with open(path, "w", newline="") as fh:
        if header_comment:
            for line in header_comment.splitlines():
                fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["k", "l", "energy_k_radns", "re_n_kl", "im_n_kl", "re_phi_kl", "im_phi_kl"])
        for k in range(spectrum.levels):
            for l in range(spectrum.levels):
                writer.writerow(
                    [
                        k,
                        l,
                        repr(float(spectrum.energies[k])),
                        repr(float(spectrum.charge_elems[k, l].real)),
                        repr(float(spectrum.charge_elems[k, l].imag)),
                        repr(float(spectrum.phase_elems[k, l].real)),
                        repr(float(spectrum.phase_elems[k, l].imag)),
                    ]
                )
