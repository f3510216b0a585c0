import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from fluxtripod.cavity import (
    CavityCoherenceReport,
    CavitySpec,
    cavity_coherence_times,
    cavity_drive,
    photons_to_vrms,
    vrms_to_photons,
)
from fluxtripod.power import optimize_omega0
from fluxtripod.pulses import GateParams, build_tripod_drive, direct_drive_pulse

TWOPI = 2 * np.pi

PAPER_CAVITY = CavitySpec(
    omega_cav=TWOPI * 2.0, kappa=TWOPI * 1e-5, g=TWOPI * 0.25, n_th=0.05, n_cav_max=0.05
)


class SummedSignal:
    """Duck-typed drive summing two signals (for the superposition check)."""

    def __init__(self, a, b):
        self.a, self.b = a, b
        self.t_total = min(a.t_total, b.t_total)
        self.carriers = np.concatenate([a.carriers, b.carriers])

    def voltage(self, t):
        return self.a.voltage(t) + self.b.voltage(t)


@pytest.fixture(scope="module")
def dd_signal(paper_spectrum, paper_tripod):
    signal, _ = direct_drive_pulse(paper_spectrum, paper_tripod, np.pi, 60.0, chirped=False)
    return signal


class TestCavityDrive:
    def test_matches_analytic_derivatives(self, dd_signal):
        # the windowed tone has closed-form derivatives; kappa = 0 for clarity
        cav = CavitySpec(omega_cav=TWOPI * 2.0, kappa=0.0, g=TWOPI * 0.25)
        ts, u = cavity_drive(dd_signal, cav)
        omega = float(dd_signal.carriers[0])
        t_g = dd_signal.t_total
        amp = np.abs(dd_signal.envelopes(0.123)[0] / (1 - np.cos(TWOPI * 0.123 / t_g)))
        phase_off = np.angle(dd_signal.envelopes(0.123)[0])

        def v_exact(t):
            return amp * (1 - np.cos(TWOPI * t / t_g)) * np.cos(omega * t + phase_off)

        def v_dd2(t):
            w = TWOPI / t_g
            a = amp * (1 - np.cos(w * t))
            da = amp * w * np.sin(w * t)
            d2a = amp * w**2 * np.cos(w * t)
            c = np.cos(omega * t + phase_off)
            s = np.sin(omega * t + phase_off)
            return d2a * c - 2 * da * omega * s - a * omega**2 * c

        mid = (ts > 10) & (ts < 50)
        expect = -(v_dd2(ts[mid]) + cav.omega_cav**2 * v_exact(ts[mid])) / (
            2 * cav.g * cav.omega_cav
        )
        # fourth-order stencil truncation at dt = period/40 sits near 1e-6 |u|
        assert np.allclose(u[mid], expect, rtol=0, atol=3e-6 * np.max(np.abs(u)))

    def test_linearity(self, dd_signal, paper_spectrum, paper_tripod):
        cav = PAPER_CAVITY
        double, _ = direct_drive_pulse(
            paper_spectrum, paper_tripod, 2 * np.pi, 60.0, chirped=False
        )
        ts, u1 = cavity_drive(dd_signal, cav)
        _, u2 = cavity_drive(double, cav)
        assert np.allclose(u2, 2 * u1, atol=1e-10 * np.max(np.abs(u1)))
        summed = SummedSignal(dd_signal, double)
        _, u3 = cavity_drive(summed, cav)
        assert np.allclose(u3, 3 * u1, atol=1e-9 * np.max(np.abs(u1)))

    def test_grid_validation(self, dd_signal):
        period = TWOPI / float(dd_signal.carriers[0])
        with pytest.raises(ValueError, match="fortieth"):
            cavity_drive(dd_signal, PAPER_CAVITY, grid_dt=period / 10)

    def test_round_trip_recovers_voltage(self, paper_spectrum, paper_tripod):
        """Driving the damped oscillator with u(t) must reproduce V(t)."""
        t_g = 60.0
        params = GateParams(
            alpha=np.pi / 4,
            beta=0.0,
            gamma0=np.pi,
            omega0=optimize_omega0(t_g),
            t_g=t_g,
            chirped=True,
        )
        signal, _ = build_tripod_drive(paper_spectrum, paper_tripod, params)
        cav = PAPER_CAVITY
        ts, u = cavity_drive(signal, cav)

        def rhs(t, y):
            x, v = y
            drive = np.interp(t, ts, u)
            acc = -(cav.omega_cav**2 + cav.kappa**2 / 4) * x - cav.kappa * v
            acc -= np.sqrt(2.0) * cav.omega_cav * drive
            return [v, acc]

        sol = solve_ivp(
            rhs,
            (0.0, signal.t_total),
            [0.0, 0.0],
            rtol=1e-10,
            atol=1e-12,
            max_step=0.005,
            t_eval=ts[:: 4],
        )
        recovered = np.sqrt(2.0) * cav.g * sol.y[0]
        v_true = signal.voltage(sol.t)
        mask = sol.t > params.t_ramp
        rms_err = np.sqrt(np.mean((recovered[mask] - v_true[mask]) ** 2))
        rms_v = np.sqrt(np.mean(v_true[mask] ** 2))
        assert rms_err < 0.01 * rms_v


class TestPhotonBudget:
    def test_budget_to_voltage(self):
        g = TWOPI * 0.25
        assert photons_to_vrms(0.05, g) == pytest.approx(g * np.sqrt(0.1))
        assert vrms_to_photons(0.0, g) == 0.0
        assert vrms_to_photons(photons_to_vrms(0.05, g), g) == pytest.approx(0.05)

    def test_validation(self):
        with pytest.raises(ValueError):
            vrms_to_photons(1.0, -2.0)
        with pytest.raises(ValueError):
            CavitySpec(omega_cav=1.0, kappa=0.0, g=1.0, n_th=1.5)


class TestCoherenceTimes:
    def test_paper_point_values(self, paper_spectrum, paper_tripod):
        report = cavity_coherence_times(paper_spectrum, paper_tripod, PAPER_CAVITY)
        assert isinstance(report, CavityCoherenceReport)
        # photon shot-noise dephasing
        assert report.t2_cav_s == pytest.approx(0.32e-3, rel=0.03)
        # qubit-transition relaxation through the co-rotating branch of the
        # detuning; regression of this implementation
        assert report.t1_cav_qubit_s == pytest.approx(0.894, rel=0.02)
        # the counter-rotating branch of the strongest drive transition
        assert report.purcell_s["1e"]["plus"] == pytest.approx(0.153, rel=0.02)

    def test_kappa_zero_never_decays(self, paper_spectrum, paper_tripod):
        cav = CavitySpec(omega_cav=TWOPI * 2.0, kappa=0.0, g=TWOPI * 0.25, n_th=0.05)
        report = cavity_coherence_times(paper_spectrum, paper_tripod, cav)
        assert math.isinf(report.t1_cav_qubit_s)
        assert math.isinf(report.t2_cav_s)

    def test_no_thermal_photons_no_dephasing(self, paper_spectrum, paper_tripod):
        cav = CavitySpec(omega_cav=TWOPI * 2.0, kappa=TWOPI * 1e-5, g=TWOPI * 0.25, n_th=0.0)
        report = cavity_coherence_times(paper_spectrum, paper_tripod, cav)
        assert math.isinf(report.t2_cav_s)

    def test_dispersive_warning_for_strong_coupling(self, paper_spectrum, paper_tripod):
        cav = CavitySpec(omega_cav=TWOPI * 2.0, kappa=TWOPI * 1e-5, g=TWOPI * 20.0)
        report = cavity_coherence_times(paper_spectrum, paper_tripod, cav)
        assert len(report.dispersive_warnings) > 0
