"""Command-line scenario runner.

Subcommands: ``spectrum``, ``pulses``, ``power``, ``simulate``, ``sweep``,
``cavity``. Every artifact embeds the fully resolved configuration as a
``# config: {...}`` header comment so runs are reproducible from their
outputs alone; bodies are byte-identical across reruns of the same scenario
(timestamps only appear behind ``--timestamp``). The pipeline uses no random
numbers anywhere, so ``--seedless`` is accepted and always true.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from fluxtripod import power as powermod
from fluxtripod import scenario as scen
from fluxtripod.cavity import cavity_coherence_times, cavity_drive, vrms_to_photons
from fluxtripod.circuit import spectrum_to_csv

TWOPI = 2.0 * np.pi

REPORT_SCHEMA = "fluxtripod-report/1"


def _config_header(scn: scen.Scenario, timestamp: bool) -> str:
    lines = ["config: " + json.dumps(scn.resolved_dict(), sort_keys=True)]
    if timestamp:
        lines.append("generated: " + datetime.now(timezone.utc).isoformat())
    return "\n".join(lines)


def _write_csv(path: Path, header_comment: str, columns: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        for line in header_comment.splitlines():
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(scn_obj: scen.Scenario, out: Path, args) -> int:
    system = scen.prepare_system(scn_obj)
    spectrum_to_csv(system.spectrum, out / "spectrum.csv", _config_header(scn_obj, args.timestamp))
    summary = {
        "schema": REPORT_SCHEMA,
        "config": scn_obj.resolved_dict(),
        "diagnostics": {k: _jsonable(v) for k, v in system.trip.diagnostics.items()},
        "drive_freqs_ghz": [f / TWOPI for f in system.trip.drive_freqs],
        "convergence_residual_radns": system.spectrum.convergence_residual,
        "commutator_defect": system.spectrum.commutator_defect,
    }
    if args.convergence_sweep:
        summary["levels_sweep"] = _levels_convergence(scn_obj, system)
    _write_json(out / "spectrum_summary.json", summary)
    if scn_obj.noise is not None:
        from fluxtripod.noise import rate_ledger_to_csv

        i0, i1, ia, ie = scn_obj.tripod_indices
        rate_ledger_to_csv(
            system.spectrum,
            scn_obj.noise,
            out / "noise_rates.csv",
            pairs=((i0, i1), (ia, i1), (ie, i1), (ia, i0), (ie, i0), (ia, ie)),
            decay_pairs=((ie, i1),) if scn_obj.noise.q_diel is not None else (),
            header_comment=_config_header(scn_obj, args.timestamp),
        )
    return 0


def _levels_convergence(scn_obj: scen.Scenario, system) -> list[dict]:
    """Drift of the tripod-level energies and drive elements as the retained
    level count grows; the simulation answer should be insensitive to it."""
    from fluxtripod.circuit import diagonalize

    base = system.spectrum
    idx = list(scn_obj.tripod_indices)
    rows = []
    for extra in (2, 4):
        bigger = diagonalize(scn_obj.circuit, scn_obj.basis_size, scn_obj.levels + extra)
        rows.append(
            {
                "levels": scn_obj.levels + extra,
                "max_energy_drift_radns": float(
                    np.max(np.abs(bigger.energies[idx] - base.energies[idx]))
                ),
                "max_drive_elem_drift": float(
                    np.max(
                        np.abs(
                            np.abs(bigger.charge_elems[idx][:, idx])
                            - np.abs(base.charge_elems[idx][:, idx])
                        )
                    )
                ),
            }
        )
    return rows


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return float(v)
    if isinstance(v, tuple):
        return list(v)
    return v


def cmd_pulses(scn_obj: scen.Scenario, out: Path, args) -> int:
    system = scen.prepare_system(scn_obj)
    signal, table, _ = scen.build_scenario_drive(scn_obj, system)
    ts = np.linspace(0.0, signal.t_total, 2001)
    env = signal.envelopes(ts).T  # (nt, ntones)
    freqs = signal.instantaneous_freqs(ts) / TWOPI
    volts = signal.voltage(ts)
    columns = ["t_ns"]
    for label in signal.labels:
        columns += [f"re_v_{label}", f"im_v_{label}"]
    columns += [f"freq_{label}_ghz" for label in signal.labels] + ["v_lab"]
    rows = []
    for i, t in enumerate(ts):
        row = [float(t)]
        for j in range(signal.n_tones):
            row += [float(env[i, j].real), float(env[i, j].imag)]
        row += [float(freqs[i, j]) for j in range(signal.n_tones)]
        row.append(float(volts[i]))
        rows.append(row)
    _write_csv(out / "pulses.csv", _config_header(scn_obj, args.timestamp), columns, rows)

    # spectrum of the full lab voltage
    period = TWOPI / float(np.max(signal.carriers))
    dt = period / 20.0
    n = int(np.ceil(signal.t_total / dt)) + 1
    tfine = np.linspace(0.0, signal.t_total, n)
    v = signal.voltage(tfine)
    amps = np.abs(np.fft.rfft(v)) * (tfine[1] - tfine[0])
    fs = np.fft.rfftfreq(n, d=tfine[1] - tfine[0])
    keep = fs <= 1.25 * float(np.max(signal.carriers)) / TWOPI
    _write_csv(
        out / "pulse_spectrum.csv",
        _config_header(scn_obj, args.timestamp),
        ["f_ghz", "abs_v"],
        zip(fs[keep].tolist(), amps[keep].tolist()),
    )
    if table is not None:
        _write_csv(
            out / "stark_shifts.csv",
            _config_header(scn_obj, args.timestamp),
            ["t_ns"] + [f"shift_level{k}_radns" for k in table.shift_levels],
            ([float(t)] + [float(x) for x in row] for t, row in zip(table.times, table.shifts)),
        )
    return 0


def cmd_power(scn_obj: scen.Scenario, out: Path, args) -> int:
    system = scen.prepare_system(scn_obj)
    scales = np.linspace(0.5, 4.0, 71)
    rows = []
    for s in scales:
        rows.append([float(s), float(powermod.omega_rms(1.0, TWOPI * s) / TWOPI)])
    _write_csv(
        out / "power_scan.csv",
        _config_header(scn_obj, args.timestamp),
        ["omega0_tg_over_2pi", "omega_rms_tg_over_2pi"],
        rows,
    )
    omega0_opt = powermod.optimize_omega0(scn_obj.t_g)
    scale_opt = omega0_opt * scn_obj.t_g / TWOPI
    report = {
        "schema": REPORT_SCHEMA,
        "config": scn_obj.resolved_dict(),
        "optimal_omega0_tg_over_2pi": scale_opt,
        "optimal_omega_rms_tg_over_2pi": powermod.omega_rms(scn_obj.t_g, omega0_opt)
        * scn_obj.t_g
        / TWOPI,
        "qsl_cost_over_2pi": powermod.QSL_COST / TWOPI,
        "double_swap_cost_over_2pi": powermod.DOUBLE_SWAP_COST / TWOPI,
        "comparison": powermod.compare_dd_satd(
            system.spectrum, system.trip, chi=scn_obj.chi, alpha=scn_obj.alpha, t_g=scn_obj.t_g
        ),
    }
    if scn_obj.cavity is not None:
        report["photon_constrained"] = powermod.photon_constrained_min_tg(
            system.spectrum,
            system.trip,
            scn_obj.cavity.g,
            scn_obj.cavity.n_cav_max,
            chi=scn_obj.chi,
            alpha=scn_obj.alpha,
        )
    _write_json(out / "power.json", report)
    return 0


def cmd_simulate(scn_obj: scen.Scenario, out: Path, args) -> int:
    system = scen.prepare_system(scn_obj)
    record = scen.simulate_point(scn_obj, system, workers=args.workers)
    record["schema"] = REPORT_SCHEMA
    record["config"] = scn_obj.resolved_dict()
    _write_json(out / "report.json", record)
    print(
        f"protocol={record['protocol']} t_g={record['t_g_ns']} ns "
        f"error={record['error']:.3e} leakage={record['leakage']:.3e}"
    )
    return 0


# sweep worker state (initialized per process via fork-safe initializer)
_WORKER = {}


def _sweep_init(scn_dict):
    scn_obj = scen.scenario_from_dict(scn_dict)
    _WORKER["scn"] = scn_obj
    _WORKER["system"] = scen.prepare_system(scn_obj)


def _sweep_point(task):
    index, axis, value, protocol, t_g = task
    scn_obj = _WORKER["scn"]
    system = _WORKER["system"]
    try:
        run_scn = dataclasses.replace(scn_obj, protocol=protocol, sweep_axis=None, sweep_values=())
        if axis == "omega0_scaled":
            run_scn = dataclasses.replace(run_scn, omega0=TWOPI * value / t_g)
        record = scen.simulate_point(run_scn, system, t_g=t_g)
        record["failure"] = ""
    except Exception as exc:  # per-point failures stay in-row
        record = {"protocol": protocol, "t_g_ns": t_g, "failure": f"{type(exc).__name__}: {exc}"}
    record["index"] = index
    record["axis"] = axis
    record["axis_value"] = value
    return record


def _sweep_tasks(scn_obj: scen.Scenario, system) -> list[tuple]:
    tasks = []
    index = 0
    if scn_obj.sweep_axis == "v_rms":
        # fixed-voltage comparison: pair the accelerated and direct protocols
        comp = powermod.compare_dd_satd(
            system.spectrum, system.trip, chi=scn_obj.chi, alpha=scn_obj.alpha
        )
        for v in scn_obj.sweep_values:
            tasks.append((index, "v_rms", v, "satd_chirped", comp["satd_coeff"] / v))
            index += 1
            tasks.append((index, "v_rms", v, "direct_chirped", comp["dd_coeff"] / v))
            index += 1
    elif scn_obj.sweep_axis == "omega0_scaled":
        for v in scn_obj.sweep_values:
            tasks.append((index, "omega0_scaled", v, scn_obj.protocol, scn_obj.t_g))
            index += 1
    else:
        for v in scn_obj.sweep_values:
            tasks.append((index, "t_g_ns", v, scn_obj.protocol, v))
            index += 1
    return tasks


SWEEP_COLUMNS = [
    "index",
    "axis",
    "axis_value",
    "protocol",
    "t_g_ns",
    "fbar",
    "error",
    "leakage",
    "v_rms",
    "omega_rms_scaled",
    "n_cav",
    "failure",
]


def sweep_runner(scn_obj: scen.Scenario, workers: int = 0) -> list[dict]:
    """Execute every sweep point; failures are recorded per row, order is by index."""
    if scn_obj.sweep_axis is None:
        raise ValueError("scenario has no sweep axis")
    system = scen.prepare_system(scn_obj)
    tasks = _sweep_tasks(scn_obj, system)
    if workers and workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_sweep_init, initargs=(scn_obj.resolved_dict(),)
        ) as pool:
            records = list(pool.map(_sweep_point, tasks))
    else:
        _sweep_init(scn_obj.resolved_dict())
        records = [_sweep_point(t) for t in tasks]
    records.sort(key=lambda r: r["index"])
    return records


def cmd_sweep(scn_obj: scen.Scenario, out: Path, args) -> int:
    records = sweep_runner(scn_obj, workers=args.workers)
    rows = [[r.get(c, "") for c in SWEEP_COLUMNS] for r in records]
    _write_csv(out / "sweep.csv", _config_header(scn_obj, args.timestamp), SWEEP_COLUMNS, rows)
    failures = [r for r in records if r.get("failure")]
    print(f"{len(records)} points, {len(failures)} failures -> {out / 'sweep.csv'}")
    return 0


def cmd_cavity(scn_obj: scen.Scenario, out: Path, args) -> int:
    if scn_obj.cavity is None:
        print("scenario has no cavity section", file=sys.stderr)
        return 2
    system = scen.prepare_system(scn_obj)
    signal, _, _ = scen.build_scenario_drive(scn_obj, system)
    ts, u = cavity_drive(signal, scn_obj.cavity)
    _write_csv(
        out / "cavity_drive.csv",
        _config_header(scn_obj, args.timestamp),
        ["t_ns", "u"],
        zip(ts.tolist(), u.tolist()),
    )
    v_rms = powermod.v_rms_direct(signal)
    coh = cavity_coherence_times(system.spectrum, system.trip, scn_obj.cavity)
    report = {
        "schema": REPORT_SCHEMA,
        "config": scn_obj.resolved_dict(),
        "v_rms": v_rms,
        "n_cav": vrms_to_photons(v_rms, scn_obj.cavity.g),
        "n_cav_budget": scn_obj.cavity.n_cav_max,
        "within_budget": bool(
            vrms_to_photons(v_rms, scn_obj.cavity.g) <= scn_obj.cavity.n_cav_max
        ),
        "purcell_s": {
            k: {b: v for b, v in entry.items()} for k, entry in coh.purcell_s.items()
        },
        "t1_cav_qubit_s": coh.t1_cav_qubit_s,
        "t2_cav_s": coh.t2_cav_s,
        "dispersive_warnings": list(coh.dispersive_warnings),
    }
    _write_json(out / "cavity_report.json", report)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

COMMANDS = {
    "spectrum": cmd_spectrum,
    "pulses": cmd_pulses,
    "power": cmd_power,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "cavity": cmd_cavity,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxtripod", description="accelerated tripod-gate pulse synthesis and simulation"
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--scenario", required=True, help="scenario JSON path")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--workers", type=int, default=0, help="parallel workers for sweeps")
    parser.add_argument("--levels", type=int, default=None, help="override retained levels")
    parser.add_argument("--rel-tol", type=float, default=None, help="override integrator rel_tol")
    parser.add_argument("--protocol", default=None, choices=scen.PROTOCOL_CHOICES)
    parser.add_argument(
        "--seedless",
        action="store_true",
        help="assert the run uses no randomness (always true; flag kept for pipelines)",
    )
    parser.add_argument(
        "--timestamp", action="store_true", help="stamp artifacts with generation time"
    )
    parser.add_argument(
        "--convergence-sweep",
        action="store_true",
        help="spectrum command: report drift of tripod eigendata as levels grow",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scn_obj = scen.load_scenario(args.scenario)
    except (OSError, KeyError, ValueError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    overrides = {}
    if args.levels is not None:
        overrides["levels"] = args.levels
    if args.rel_tol is not None:
        overrides["rel_tol"] = args.rel_tol
    if args.protocol is not None:
        overrides["protocol"] = args.protocol
    if overrides:
        scn_obj = dataclasses.replace(scn_obj, **overrides)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        return COMMANDS[args.command](scn_obj, out, args)
    except Exception as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
