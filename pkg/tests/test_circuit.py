import numpy as np
import pytest

from fluxtripod.circuit import (
    CircuitSpec,
    LevelCrossingError,
    assign_tripod,
    diagonalize,
    flux_dispersion,
    spectrum_to_csv,
)
from tests.conftest import PAPER_CIRCUIT, PAPER_TRIPOD_INDICES

TWOPI = 2 * np.pi


class TestDiagonalize:
    def test_published_matrix_elements(self, paper_spectrum):
        n = np.abs(paper_spectrum.charge_elems)
        i0, i1, ia, ie = PAPER_TRIPOD_INDICES
        assert n[i0, i1] == pytest.approx(0.02, abs=0.005)
        assert n[i0, ie] == pytest.approx(0.27, abs=0.005)
        assert n[i1, ie] == pytest.approx(0.46, abs=0.005)
        assert n[ia, ie] == pytest.approx(0.16, abs=0.005)

    def test_lc_limit_spectrum_evenly_spaced(self):
        # without the Josephson term the circuit is a plain LC oscillator
        spec = CircuitSpec(e_c_ghz=2.0, e_j_ghz=1e-12, e_l_ghz=0.5, flux_phi0=0.0)
        sd = diagonalize(spec, basis_size=200, levels=6)
        gaps = np.diff(sd.energies)
        expected = TWOPI * np.sqrt(8 * 2.0 * 0.5)
        assert np.allclose(gaps, expected, rtol=1e-8)

    def test_lc_limit_charge_elements(self):
        spec = CircuitSpec(e_c_ghz=2.0, e_j_ghz=1e-12, e_l_ghz=0.5, flux_phi0=0.0)
        sd = diagonalize(spec, basis_size=200, levels=6)
        n01 = abs(sd.charge_elems[0, 1])
        assert n01 == pytest.approx((0.5 / (32 * 2.0)) ** 0.25, rel=1e-8)
        for k in range(4):
            assert abs(sd.charge_elems[k, k + 2]) < 1e-10

    def test_hermiticity(self, paper_spectrum):
        n = paper_spectrum.charge_elems
        phi = paper_spectrum.phase_elems
        scale = np.max(np.abs(n))
        assert np.max(np.abs(n - n.conj().T)) < 1e-10 * scale
        assert np.max(np.abs(phi - phi.conj().T)) < 1e-10 * np.max(np.abs(phi))

    def test_commutator_identity(self, paper_spectrum):
        # <k|[phi, n]|k> = i up to basis truncation, evaluated in the full basis
        assert paper_spectrum.commutator_defect < 1e-6

    def test_gauge_determinism(self):
        a = diagonalize(PAPER_CIRCUIT)
        b = diagonalize(PAPER_CIRCUIT)
        assert np.array_equal(a.energies, b.energies)
        assert np.array_equal(a.charge_elems, b.charge_elems)
        assert np.array_equal(a.phase_elems, b.phase_elems)

    def test_convergence_certificate(self, paper_spectrum):
        assert paper_spectrum.convergence_residual < 1e-9

    def test_nonconvergence_carries_residual(self):
        from fluxtripod.circuit import ConvergenceError

        # a widely spread mode cannot converge in a tiny oscillator basis
        cramped = CircuitSpec(2.0, 9.19, 0.001, 0.17)
        with pytest.raises(ConvergenceError) as err:
            diagonalize(cramped, basis_size=16, levels=4)
        assert err.value.residual > 0

    def test_preconditions(self):
        with pytest.raises(ValueError):
            diagonalize(PAPER_CIRCUIT, basis_size=40, levels=18)
        with pytest.raises(ValueError):
            diagonalize(PAPER_CIRCUIT, levels=3)
        with pytest.raises(ValueError):
            CircuitSpec(e_c_ghz=-1.0, e_j_ghz=1.0, e_l_ghz=1.0, flux_phi0=0.0)


class TestFluxDispersion:
    def test_antisymmetric_about_half_flux(self):
        # the spectrum is symmetric under flux reflection about Phi_0/2, so the
        # qubit-splitting derivative changes sign across the sweet spot
        eps = 0.02
        above = CircuitSpec(2.0, 9.19, 0.063, 0.5 + eps)
        below = CircuitSpec(2.0, 9.19, 0.063, 0.5 - eps)
        d_above = flux_dispersion(above, 1) - flux_dispersion(above, 0)
        d_below = flux_dispersion(below, 1) - flux_dispersion(below, 0)
        assert d_above == pytest.approx(-d_below, rel=1e-4)
        assert d_above != 0.0

    def test_richardson_scaling(self):
        # halving the stencil shrinks the truncation error about fourfold
        lvl = 1
        coarse = flux_dispersion(PAPER_CIRCUIT, lvl, delta_flux=8e-4)
        mid = flux_dispersion(PAPER_CIRCUIT, lvl, delta_flux=4e-4)
        fine = flux_dispersion(PAPER_CIRCUIT, lvl, delta_flux=1e-5)
        err_coarse = abs(coarse - fine)
        err_mid = abs(mid - fine)
        assert err_mid < err_coarse
        assert err_mid == pytest.approx(err_coarse / 4.0, rel=0.35)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            flux_dispersion(PAPER_CIRCUIT, 1, delta_flux=2e-3)
        with pytest.raises(ValueError):
            flux_dispersion(PAPER_CIRCUIT, 99)


class TestAssignTripod:
    def test_paper_assignment(self, paper_spectrum, paper_tripod):
        freqs = np.array(paper_tripod.drive_freqs) / TWOPI
        assert np.all(freqs > 1.0)  # GHz scale
        assert len(np.unique(np.round(freqs, 6))) == 3

    def test_duplicate_indices_rejected(self, paper_spectrum):
        with pytest.raises(ValueError):
            assign_tripod(paper_spectrum, (0, 0, 2, 5))

    def test_parity_forbidden_element_rejected(self):
        # at zero flux the potential is symmetric and same-parity levels are
        # not charge-coupled; the (1, 3) pair is forbidden
        spec = CircuitSpec(2.0, 9.19, 0.063, 0.0)
        sd = diagonalize(spec)
        assert abs(sd.charge_elems[1, 3]) < 1e-8
        with pytest.raises(ValueError, match="vanishes"):
            assign_tripod(sd, (1, 0, 2, 3))


def test_spectrum_csv_roundtrip(tmp_path, paper_spectrum):
    path = tmp_path / "spectrum.csv"
    spectrum_to_csv(paper_spectrum, path, header_comment="config: {}")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config")
    assert lines[1].split(",")[0] == "k"
    assert len(lines) == 2 + paper_spectrum.levels**2
    # first data row carries the ground-state energy
    first = lines[2].split(",")
    assert float(first[2]) == pytest.approx(float(paper_spectrum.energies[0]))
