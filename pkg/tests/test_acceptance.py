"""Acceptance suite: every release criterion at its stated tolerance.

Each check prints one `ACCEPTANCE <PASS|FAIL>` line (run with `pytest -s`).
The assertions are strict; known shortfalls are documented in the project
notes rather than loosened here.
"""

import dataclasses
import time

import numpy as np
import pytest

from fluxtripod import power as powermod
from fluxtripod.cavity import CavitySpec, cavity_coherence_times
from fluxtripod.circuit import assign_tripod, diagonalize
from fluxtripod.noise import (
    NoiseModel,
    dephasing_time,
    effective_dephasing_table,
    t1_dielectric,
)
from fluxtripod.propagation import EvolutionSpec, propagate_six_axial
from fluxtripod.pulses import GateParams
from fluxtripod.scenario import (
    build_scenario_drive,
    load_scenario,
    prepare_system,
    simulate_point,
)
from fluxtripod.scoring import averaged_fidelity, target_unitary
from tests.conftest import PAPER_CIRCUIT, PAPER_TRIPOD_INDICES

TWOPI = 2 * np.pi
SCENARIO_PATH = "scenarios/paper_x_gate.json"
WORKERS = 2


def report(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'} - {name}: {detail}", flush=True)


@pytest.fixture(scope="module")
def scenario():
    return load_scenario(SCENARIO_PATH)


@pytest.fixture(scope="module")
def system(scenario):
    return prepare_system(scenario)


@pytest.fixture(scope="module")
def headline_record(scenario, system):
    start = time.perf_counter()
    record = simulate_point(scenario, system, workers=WORKERS)
    record["runtime_s"] = time.perf_counter() - start
    return record


def test_matrix_elements(system):
    start = time.perf_counter()
    spectrum = diagonalize(PAPER_CIRCUIT)
    runtime = time.perf_counter() - start
    n = np.abs(spectrum.charge_elems)
    i0, i1, ia, ie = PAPER_TRIPOD_INDICES
    values = {
        "n_01": (n[i0, i1], 0.02),
        "n_0e": (n[i0, ie], 0.27),
        "n_1e": (n[i1, ie], 0.46),
        "n_ae": (n[ia, ie], 0.16),
    }
    ok = all(abs(v - t) <= 0.005 for v, t in values.values()) and runtime < 10.0
    report(
        "matrix elements",
        ok,
        ", ".join(f"{k}={v:.4f} (target {t})" for k, (v, t) in values.items())
        + f", runtime {runtime:.1f} s",
    )
    for key, (val, target) in values.items():
        assert val == pytest.approx(target, abs=0.005), key
    assert runtime < 10.0


def test_power_optimum():
    start = time.perf_counter()
    t_g = 1.0
    omega0 = powermod.optimize_omega0(t_g)
    scale = omega0 * t_g / TWOPI
    rms_scaled = powermod.omega_rms(t_g, omega0) * t_g / TWOPI
    qsl_ok = all(
        powermod.omega_rms(t_g, TWOPI * s) * t_g > TWOPI
        for s in np.linspace(0.5, 4.0, 15)
    )
    runtime = time.perf_counter() - start
    ok = abs(scale - 1.135) <= 0.005 and abs(rms_scaled - 1.92) <= 0.01 and qsl_ok
    ok = ok and runtime < 5.0
    report(
        "power optimum",
        ok,
        f"omega0*tg/2pi={scale:.4f}, rms*tg/2pi={rms_scaled:.4f}, "
        f"qsl>{2 * np.pi:.3f} everywhere={qsl_ok}, runtime {runtime:.1f} s",
    )
    assert scale == pytest.approx(1.135, abs=0.005)
    assert rms_scaled == pytest.approx(1.92, abs=0.01)
    assert qsl_ok and runtime < 5.0


def test_rwa_exactness_oracle():
    """The accelerated protocol is exact in the resonant four-level model for
    every (t_g, omega0) and for rotations about x, z and the diagonal axis."""
    start = time.perf_counter()
    gates = {
        "x": (np.pi / 4, 0.0, np.pi),
        "z": (0.0, 0.0, np.pi),
        "hadamard-axis": (np.pi / 8, 0.0, np.pi),
    }
    t_gs = np.linspace(20.0, 220.0, 5)
    scales = np.linspace(0.6, 3.0, 5)
    worst = 0.0
    for alpha, beta, gamma0 in gates.values():
        for t_g in t_gs:
            for s in scales:
                params = GateParams(
                    alpha=alpha,
                    beta=beta,
                    gamma0=gamma0,
                    omega0=TWOPI * s / t_g,
                    t_g=t_g,
                )
                espec = EvolutionSpec(mode="closed_rwa", rwa_params=params)
                finals = propagate_six_axial(espec, (0, 1))
                target = target_unitary(alpha, beta, gamma0)
                rep = averaged_fidelity(
                    finals, target, np.eye(2, dtype=complex), (0, 1), (0, 1, 2, 3)
                )
                worst = max(worst, rep.error)
    runtime = time.perf_counter() - start
    ok = worst < 1e-6 and runtime < 30.0
    report(
        "ideal-model exactness",
        ok,
        f"worst error {worst:.2e} over 75 grid points, runtime {runtime:.1f} s",
    )
    assert worst < 1e-6
    assert runtime < 30.0


def test_closed_form_voltages(system):
    c_satd = powermod.satd_voltage_coefficient(system.spectrum, system.trip)
    c_dd = powermod.dd_voltage_coefficient(system.spectrum, system.trip)
    t_g = 100.0
    params = GateParams(
        alpha=np.pi / 4,
        beta=0.0,
        gamma0=np.pi,
        omega0=powermod.optimize_omega0(t_g),
        t_g=t_g,
    )
    from fluxtripod.pulses import build_tripod_drive, direct_drive_pulse

    satd_signal, _ = build_tripod_drive(system.spectrum, system.trip, params)
    dd_signal, _ = direct_drive_pulse(system.spectrum, system.trip, np.pi, t_g, chirped=False)
    v_satd = powermod.v_rms_direct(satd_signal) * t_g
    v_dd = powermod.v_rms_direct(dd_signal) * t_g
    ratio = c_dd / c_satd
    checks = {
        "satd closed": abs(c_satd - 42.1) / 42.1 <= 0.02,
        "dd closed": abs(c_dd - 136.0) / 136.0 <= 0.02,
        "satd quadrature": abs(v_satd - 42.1) / 42.1 <= 0.02,
        "dd quadrature": abs(v_dd - 136.0) / 136.0 <= 0.02,
        "ratio": abs(ratio - 3.2) <= 0.1,
    }
    report(
        "closed-form voltages",
        all(checks.values()),
        f"satd {c_satd:.2f}/{v_satd:.2f}, dd {c_dd:.2f}/{v_dd:.2f}, ratio {ratio:.3f}",
    )
    assert all(checks.values()), checks


def test_noise_tables_free_induction(system):
    model = NoiseModel(a_flux=3e-6)
    i0, i1, ia, ie = PAPER_TRIPOD_INDICES
    targets = {
        ("01"): ((i0, i1), 7.03),
        ("a1"): ((ia, i1), 6.97),
        ("e1"): ((ie, i1), 53.43),
        ("a0"): ((ia, i0), 3.50),
        ("e0"): ((ie, i0), 8.09),
        ("ae"): ((ia, ie), 6.16),
    }
    values = {
        name: dephasing_time(system.spectrum, model, k, l)
        for name, ((k, l), _) in targets.items()
    }
    ok = all(
        abs(values[name] - t) / t <= 0.03 for name, (_, t) in targets.items()
    )
    report(
        "free-induction dephasing table",
        ok,
        ", ".join(f"{n}={values[n]:.2f}us" for n in targets),
    )
    for name, (_, t) in targets.items():
        assert values[name] == pytest.approx(t, rel=0.03), name


def test_noise_tables_effective(system):
    """Published effective pair times for the surrogate dissipator.

    The reference-pair entries follow from the calibration identity; the three
    non-reference pairs are asserted at the published values.
    """
    model = NoiseModel(a_flux=3e-6)
    table = effective_dephasing_table(system.spectrum, model)
    i0, i1, ia, ie = PAPER_TRIPOD_INDICES
    ref_targets = {"01": ((i0, i1), 7.03), "a1": ((ia, i1), 6.97), "e1": ((ie, i1), 53.43)}
    pair_targets = {"a0": ((ia, i0), 1.75), "e0": ((ie, i0), 17.31), "ae": ((ia, ie), 3.76)}
    values = {}
    for name, ((k, l), _) in {**ref_targets, **pair_targets}.items():
        values[name] = table[(min(k, l), max(k, l))][0]
    ok = all(
        abs(values[n] - t) / t <= 0.03 for n, (_, t) in {**ref_targets, **pair_targets}.items()
    )
    report(
        "effective dephasing table",
        ok,
        ", ".join(f"{n}={values[n]:.2f}us" for n in values)
        + " (targets 7.03/6.97/53.43/1.75/17.31/3.76)",
    )
    for name, (_, t) in {**ref_targets, **pair_targets}.items():
        assert values[name] == pytest.approx(t, rel=0.03), name


def test_noise_tables_relaxation(system):
    i1, ie = PAPER_TRIPOD_INDICES[1], PAPER_TRIPOD_INDICES[3]
    targets = {5e5: 11.9, 1e6: 23.8, 2e6: 47.6, 1e7: 238.0}
    values = {}
    for q, t in targets.items():
        values[q] = t1_dielectric(system.spectrum, NoiseModel(q_diel=q), ie, i1)[0]
    ok = all(abs(values[q] - t) / t <= 0.03 for q, t in targets.items())
    report(
        "dielectric relaxation table",
        ok,
        ", ".join(f"Q={q:.0e}: {values[q]:.1f}us" for q in targets),
    )
    for q, t in targets.items():
        assert values[q] == pytest.approx(t, rel=0.03), q


def test_headline_fidelity(headline_record):
    err = headline_record["error"]
    runtime = headline_record["runtime_s"]
    ok = 3e-4 <= err <= 9e-4 and runtime < 120.0
    report(
        "headline fidelity",
        ok,
        f"error {err:.3e} (band [3e-4, 9e-4]), fbar {headline_record['fbar']:.5f}, "
        f"leakage {headline_record['leakage']:.2e}, runtime {runtime:.0f} s",
    )
    assert runtime < 120.0
    assert 3e-4 <= err <= 9e-4


def test_open_system_invariants(scenario, system):
    """Trace, Hermiticity and positivity of the open-system evolution."""
    from fluxtripod.noise import build_dissipators
    from fluxtripod.propagation import _propagate_open_batch
    from fluxtripod.scoring import axial_states

    signal, _, _ = build_scenario_drive(scenario, system)
    dset = build_dissipators(
        system.spectrum, scenario.noise, scenario.t_g, ((system.trip.idx_e, 0),)
    )
    espec = EvolutionSpec(
        mode="open_lab", spectrum=system.spectrum, signal=signal, dissipators=dset
    )
    rhos = axial_states(system.trip.qubit_indices, system.spectrum.levels)[:2]
    trajs = _propagate_open_batch(espec, np.stack(rhos))
    worst_trace = 0.0
    worst_herm = 0.0
    worst_eig = 0.0
    for traj in trajs:
        traces = np.einsum("tkk->t", traj.states).real
        worst_trace = max(worst_trace, float(np.max(np.abs(traces - 1.0))))
        herm = np.max(np.abs(traj.states - np.conj(np.swapaxes(traj.states, -1, -2))))
        worst_herm = max(worst_herm, float(herm))
        worst_eig = min(worst_eig, float(np.min(np.linalg.eigvalsh(traj.final_state))))
    ok = worst_trace < 1e-7 and worst_herm < 1e-7 and worst_eig > -1e-6
    report(
        "open-system invariants",
        ok,
        f"trace drift {worst_trace:.1e}, hermiticity {worst_herm:.1e}, "
        f"min eigenvalue {worst_eig:.1e}",
    )
    assert worst_trace < 1e-7
    assert worst_herm < 1e-7
    assert worst_eig > -1e-6


def test_chirp_benefit(scenario, system):
    """Closed-system comparison: chirping buys at least a tenfold error
    reduction at moderate-to-long gate times, with leakage subdominant."""
    results = {}
    for t_g in (150.0, 200.0):
        for protocol in ("satd_chirped", "satd"):
            scn = dataclasses.replace(
                scenario, protocol=protocol, noise=None, sweep_axis=None, sweep_values=()
            )
            rec = simulate_point(scn, system, t_g=t_g)
            results[(t_g, protocol)] = rec
    ok = True
    details = []
    for t_g in (150.0, 200.0):
        chirped = results[(t_g, "satd_chirped")]
        plain = results[(t_g, "satd")]
        gain = plain["error"] / chirped["error"]
        details.append(
            f"t_g={t_g:.0f}: plain {plain['error']:.2e}, chirped {chirped['error']:.2e} "
            f"(gain {gain:.0f}x), leakage {chirped['leakage']:.1e}"
        )
        ok = ok and gain >= 10.0 and chirped["leakage"] < chirped["error"]
    report("chirp benefit", ok, "; ".join(details))
    for t_g in (150.0, 200.0):
        assert results[(t_g, "satd")]["error"] / results[(t_g, "satd_chirped")]["error"] >= 10.0
        assert results[(t_g, "satd_chirped")]["leakage"] < results[(t_g, "satd_chirped")]["error"]


def test_dephasing_regime_ratio(scenario, system):
    """Fixed-voltage comparison deep in the dephasing-dominated regime."""
    noise = NoiseModel(a_flux=3e-6, q_diel=None)
    comp = powermod.compare_dd_satd(system.spectrum, system.trip)
    t_satd = 250.0
    v_fixed = comp["satd_coeff"] / t_satd
    t_dd = comp["dd_coeff"] / v_fixed

    errors = {}
    for protocol, t_g in (
        ("satd_chirped", t_satd),
        ("satd_chirped", 354.0),
        ("satd_chirped", 500.0),
        ("direct_chirped", t_dd),
    ):
        scn = dataclasses.replace(
            scenario, protocol=protocol, noise=noise, sweep_axis=None, sweep_values=()
        )
        rec = simulate_point(scn, system, t_g=t_g, workers=WORKERS)
        errors[(protocol, t_g)] = rec["error"]

    zeta = errors[("direct_chirped", t_dd)] / errors[("satd_chirped", t_satd)]
    satd_ts = np.array([t_satd, 354.0, 500.0])
    satd_errs = np.array([errors[("satd_chirped", t)] for t in satd_ts])
    slope = np.polyfit(np.log(satd_ts), np.log(satd_errs), 1)[0]
    ok = abs(zeta - 5.3) / 5.3 <= 0.15 and abs(slope - 2.0) <= 0.2
    report(
        "dephasing-regime ratio",
        ok,
        f"zeta={zeta:.2f} (target 5.3+-15%), scaling exponent {slope:.2f}, "
        f"t_dd={t_dd:.0f} ns paired with t_satd={t_satd:.0f} ns",
    )
    assert zeta == pytest.approx(5.3, rel=0.15)
    assert slope == pytest.approx(2.0, abs=0.2)


def test_cavity_round_trip_and_coherence(scenario, system):
    from scipy.integrate import solve_ivp

    from fluxtripod.cavity import cavity_drive

    signal, _, params = build_scenario_drive(
        dataclasses.replace(scenario, t_g=60.0), system, t_g=60.0
    )
    cav = scenario.cavity
    ts, u = cavity_drive(signal, cav)

    def rhs(t, y):
        x, v = y
        drive = np.interp(t, ts, u)
        return [
            v,
            -(cav.omega_cav**2 + cav.kappa**2 / 4) * x
            - cav.kappa * v
            - np.sqrt(2.0) * cav.omega_cav * drive,
        ]

    sol = solve_ivp(
        rhs,
        (0.0, signal.t_total),
        [0.0, 0.0],
        rtol=1e-10,
        atol=1e-12,
        max_step=0.005,
        t_eval=ts[::4],
    )
    recovered = np.sqrt(2.0) * cav.g * sol.y[0]
    v_true = signal.voltage(sol.t)
    mask = sol.t > params.t_ramp
    rms_err = float(
        np.sqrt(np.mean((recovered[mask] - v_true[mask]) ** 2) / np.mean(v_true[mask] ** 2))
    )

    coh = cavity_coherence_times(system.spectrum, system.trip, cav)
    t1_s = coh.t1_cav_qubit_s
    t2_ms = coh.t2_cav_s * 1e3
    round_ok = rms_err < 0.01
    t2_ok = abs(t2_ms - 0.32) / 0.32 <= 0.03
    t1_ok = abs(t1_s - 0.15) / 0.15 <= 0.03
    report(
        "cavity round trip + coherence",
        round_ok and t2_ok and t1_ok,
        f"round-trip RMS {rms_err:.2%}, T2 {t2_ms:.3f} ms, T1(qubit) {t1_s:.3f} s "
        "(targets <1%, 0.32 ms, 0.15 s)",
    )
    assert round_ok
    assert t2_ok
    assert t1_ok
