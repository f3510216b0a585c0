"""Figure recipes over the simulation CLI's CSV artifacts.

Each recipe validates its input schema, draws one figure, and returns the
decorations it computed (extrema, peaks) so callers and tests can check them.
Rendering is a pure function of the CSV content: no timestamps, fixed styling.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

DPI = 150
SAVE_KW = {"dpi": DPI, "metadata": {"Software": "figrecipes"}}

#: scaled power-cost landmarks drawn on the power-cost figure
REFERENCE_COST = 2.0  # square-pulse protocols, omega_rms * t_g / 2pi
OPTIMUM_SCALE = 1.135
OPTIMUM_COST = 1.92


class SchemaError(RuntimeError):
    """An input CSV is missing, empty, or lacks a required column."""


@dataclass(frozen=True)
class FigureRecipe:
    """One renderable figure: id, input CSV paths, output path, styling."""

    figure_id: str
    inputs: tuple[Path, ...]
    output: Path
    options: dict = field(default_factory=dict)


def read_artifact(path: Path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Load a CLI CSV (comment headers stripped) and enforce its schema."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file does not exist: {path}")
    with open(path) as fh:
        rows = [line for line in fh if not line.startswith("#")]
    if not rows:
        raise SchemaError(f"empty artifact: {path}")
    reader = csv.DictReader(rows)
    columns = reader.fieldnames or []
    for name in required:
        if name not in columns:
            raise SchemaError(f"column '{name}' missing from {path}")
    data: dict[str, list] = {name: [] for name in columns}
    for row in reader:
        for name in columns:
            data[name].append(row[name])
    if not data[required[0]]:
        raise SchemaError(f"no data rows in {path}")
    out = {}
    for name, values in data.items():
        try:
            out[name] = np.array([float(v) for v in values])
        except ValueError:
            out[name] = np.array(values)
    return out


def _tone_labels(columns) -> list[str]:
    return [c[len("re_v_") :] for c in columns if c.startswith("re_v_")]


def render_power_cost(recipe: FigureRecipe) -> dict:
    data = read_artifact(recipe.inputs[0], ("omega0_tg_over_2pi", "omega_rms_tg_over_2pi"))
    x, y = data["omega0_tg_over_2pi"], data["omega_rms_tg_over_2pi"]
    k = int(np.argmin(y))
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(x, y, color="tab:orange", label="accelerated protocol")
    ax.axhline(REFERENCE_COST, color="tab:red", ls="-", lw=1, label="square-pulse reference")
    ax.axhline(OPTIMUM_COST, color="gray", ls=":", lw=0.8)
    ax.axvline(OPTIMUM_SCALE, color="gray", ls=":", lw=0.8)
    ax.plot([x[k]], [y[k]], "ko", ms=4)
    ax.annotate(
        f"minimum {y[k]:.3g} @ {x[k]:.3g}",
        xy=(x[k], y[k]),
        xytext=(x[k] + 0.25, y[k] + 0.25),
        fontsize=8,
        arrowprops={"arrowstyle": "->", "lw": 0.7},
    )
    ax.set_xlabel(r"$\Omega_0 t_g / 2\pi$")
    ax.set_ylabel(r"$\tilde\Omega_{\rm RMS}\, t_g / 2\pi$")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(recipe.output, **SAVE_KW)
    plt.close(fig)
    return {"minimum_x": float(x[k]), "minimum_y": float(y[k])}


def render_pulse_envelopes(recipe: FigureRecipe) -> dict:
    data = read_artifact(recipe.inputs[0], ("t_ns",))
    labels = _tone_labels(data.keys())
    if not labels:
        raise SchemaError(f"column 're_v_*' missing from {recipe.inputs[0]}")
    fig, ax = plt.subplots(figsize=(5, 3.2))
    for label in labels:
        amp = np.hypot(data[f"re_v_{label}"], data[f"im_v_{label}"])
        ax.plot(data["t_ns"], amp, label=label)
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("|tone amplitude| (rad/ns)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(recipe.output, **SAVE_KW)
    plt.close(fig)
    return {"tones": labels}


def render_pulse_chirps(recipe: FigureRecipe) -> dict:
    data = read_artifact(recipe.inputs[0], ("t_ns",))
    labels = _tone_labels(data.keys())
    freq_cols = [f"freq_{label}_ghz" for label in labels]
    for col in freq_cols:
        if col not in data:
            raise SchemaError(f"column '{col}' missing from {recipe.inputs[0]}")
    fig, ax = plt.subplots(figsize=(5, 3.2))
    peak = 0.0
    for label, col in zip(labels, freq_cols):
        shift_mhz = (data[col] - data[col][0]) * 1e3
        peak = max(peak, float(np.max(np.abs(shift_mhz))))
        ax.plot(data["t_ns"], shift_mhz, label=label)
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("carrier shift (MHz)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(recipe.output, **SAVE_KW)
    plt.close(fig)
    return {"tones": labels, "peak_shift_mhz": peak}


def render_pulse_spectrum(recipe: FigureRecipe) -> dict:
    data = read_artifact(recipe.inputs[0], ("f_ghz", "abs_v"))
    f, amp = data["f_ghz"], data["abs_v"]
    floor = np.median(amp)
    peaks = []
    for i in range(1, len(f) - 1):
        if amp[i] > amp[i - 1] and amp[i] >= amp[i + 1] and amp[i] > 20 * floor:
            peaks.append((float(f[i]), float(amp[i])))
    peaks.sort(key=lambda p: -p[1])
    kept = sorted(peaks[:3])
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(f, amp, lw=0.8)
    for fp, ap in kept:
        ax.annotate(f"{fp:.2f} GHz", xy=(fp, ap), xytext=(fp, ap * 1.1), fontsize=7, ha="center")
    ax.set_xlabel("f (GHz)")
    ax.set_ylabel(r"$|\bar V(f)|$")
    ax.set_yscale("log")
    fig.tight_layout()
    fig.savefig(recipe.output, **SAVE_KW)
    plt.close(fig)
    return {"peaks_ghz": [p[0] for p in kept]}


SWEEP_REQUIRED = ("axis_value", "protocol", "t_g_ns", "error", "leakage")


def render_error_vs_time(recipe: FigureRecipe) -> dict:
    """Log-log gate error against gate time, one curve per input sweep; the
    last input's leakage is overlaid dashed when requested."""
    fig, ax = plt.subplots(figsize=(5, 3.4))
    curves = []
    for path in recipe.inputs:
        data = read_artifact(path, SWEEP_REQUIRED)
        protocol = str(data["protocol"][0])
        ax.plot(data["t_g_ns"], data["error"], marker="o", ms=3, label=protocol)
        curves.append(protocol)
    if recipe.options.get("leakage_overlay", True):
        ax.plot(
            data["t_g_ns"],
            data["leakage"],
            ls="--",
            color="gray",
            label=f"leakage ({curves[-1]})",
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"$t_g$ (ns)")
    ax.set_ylabel(r"$1 - \bar F$")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(recipe.output, **SAVE_KW)
    plt.close(fig)
    return {"curves": curves}


def render_fixed_voltage_comparison(recipe: FigureRecipe) -> dict:
    """Paired fixed-voltage rows on dual gate-time axes, with optional
    vertical photon-budget lines (positions on the accelerated axis)."""
    data = read_artifact(recipe.inputs[0], SWEEP_REQUIRED)
    protocols = np.asarray(data["protocol"])
    sel_satd = protocols == "satd_chirped"
    sel_dd = protocols == "direct_chirped"
    if not np.any(sel_satd) or not np.any(sel_dd):
        raise SchemaError("fixed-voltage sweep must carry paired satd_chirped/direct_chirped rows")
    t_satd = data["t_g_ns"][sel_satd]
    t_dd = data["t_g_ns"][sel_dd]
    ratio = float(np.mean(t_dd / t_satd))
    order = np.argsort(t_satd)
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(t_satd[order], data["error"][sel_satd][order], "o-", ms=3, label="accelerated")
    ax.plot(t_satd[order], data["error"][sel_dd][order], "s-", ms=3, label="direct (paired)")
    for t_line in recipe.options.get("photon_tg_lines", ()):
        ax.axvline(float(t_line), color="purple", lw=1.0, ls="-")
    top = ax.secondary_xaxis(
        "top", functions=(lambda x: x * ratio, lambda x: x / ratio)
    )
    top.set_xlabel(f"direct-drive $t_g$ (ns), x{ratio:.2f}")
    ax.set_xlabel(r"accelerated $t_g$ (ns)")
    ax.set_ylabel(r"$1 - \bar F$")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(recipe.output, **SAVE_KW)
    plt.close(fig)
    return {"time_ratio": ratio}


RECIPES = {
    "power-cost": (render_power_cost, 1),
    "pulse-envelopes": (render_pulse_envelopes, 1),
    "pulse-chirps": (render_pulse_chirps, 1),
    "pulse-spectrum": (render_pulse_spectrum, 1),
    "error-vs-time": (render_error_vs_time, None),  # any number of sweeps
    "fixed-voltage": (render_fixed_voltage_comparison, 1),
}

#: compact aliases matching the result-figure numbering used in reports
ALIASES = {
    "5": "power-cost",
    "7a": "pulse-envelopes",
    "7b": "pulse-chirps",
    "7c": "pulse-spectrum",
    "8": "error-vs-time",
    "10a": "error-vs-time",
    "10b": "fixed-voltage",
}


def render(recipe: FigureRecipe) -> dict:
    """Render one figure; returns the computed decorations."""
    name = ALIASES.get(recipe.figure_id, recipe.figure_id)
    if name not in RECIPES:
        raise ValueError(f"unknown figure id '{recipe.figure_id}'")
    fn, n_inputs = RECIPES[name]
    if n_inputs is not None and len(recipe.inputs) != n_inputs:
        raise ValueError(f"figure '{name}' needs exactly {n_inputs} input(s)")
    if not recipe.inputs:
        raise ValueError("at least one input CSV required")
    return fn(recipe)
