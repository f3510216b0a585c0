"""Dissipator construction: a constant-rate Lindblad surrogate for 1/f flux
noise calibrated against Gaussian free-induction decay, and dielectric-loss
relaxation.

The dephasing operator is diagonal, ``Z = sum_k sgn_k sqrt(2 Gamma_k) |k><k|``
with the sign of each level's flux dispersion and ``Gamma_k = t_g / T_k^2``
where ``T_k`` is the free-induction dephasing time of the (k, reference)
coherence. With that choice the surrogate reproduces the Gaussian decay
``exp[-(t_g/T_k)^2]`` of every reference coherence exactly at t = t_g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from fluxtripod.circuit import SpectrumData

TWOPI = 2.0 * np.pi

#: default measurement-time x infrared-cutoff product for the 1/f model
DEFAULT_D_FACTOR = TWOPI * 1e-5
#: k_B / hbar in rad/ns per kelvin
KB_OVER_HBAR = 0.1309192
NS_PER_US = 1e3


@dataclass(frozen=True)
class NoiseModel:
    """Flux-noise amplitude (Phi_0 units), 1/f cutoff product, optional
    dielectric quality factor and temperature (kelvin), and the reference
    level used to calibrate the Lindblad rates. ``all_decay_channels``
    installs relaxation on every downward transition instead of only the
    dominant excited-state channel."""

    a_flux: float = 3e-6
    d_factor: float = DEFAULT_D_FACTOR
    q_diel: float | None = None
    temperature: float = 0.0
    reference_level: int = 0
    all_decay_channels: bool = False

    def __post_init__(self):
        if self.a_flux < 0:
            raise ValueError("a_flux must be nonnegative")
        if not 0 < self.d_factor < 1:
            raise ValueError("d_factor must lie in (0, 1)")
        if self.q_diel is not None and self.q_diel <= 0:
            raise ValueError("q_diel must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be nonnegative")


@dataclass(frozen=True)
class DissipatorSet:
    """Dephasing operator (diagonal, rad/ns^1/2), relaxation collapse
    operators, and the rate ledger backing them."""

    z_op: np.ndarray
    collapse_ops: tuple[np.ndarray, ...]
    rates: dict = field(default_factory=dict)

    def __post_init__(self):
        self.z_op.setflags(write=False)
        for op in self.collapse_ops:
            op.setflags(write=False)


def dephasing_time(spectrum: SpectrumData, model: NoiseModel, k: int, l: int) -> float:
    """Free-induction dephasing time of the (k, l) coherence in microseconds.

    ``1/T = a_flux * |d(eps_k - eps_l)/dflux| * sqrt(|ln(d_factor)|)``;
    returns ``math.inf`` when the dispersions coincide.
    """
    if k == l:
        raise ValueError("dephasing_time needs two distinct levels")
    disp = spectrum.flux_dispersion
    rate = model.a_flux * abs(disp[k] - disp[l]) * math.sqrt(abs(math.log(model.d_factor)))
    if rate == 0.0:
        return math.inf
    return (1.0 / rate) / NS_PER_US


def lindblad_rates(spectrum: SpectrumData, model: NoiseModel, t_g: float):
    """Surrogate dephasing rates Gamma_k (1/ns) and the diagonal operator Z.

    The reference level carries Gamma = 0; every other level gets
    ``Gamma_k = t_g / T_k^2`` with T_k its free-induction time against the
    reference. Signs follow each level's own flux dispersion.
    """
    if t_g <= 0:
        raise ValueError("t_g must be positive")
    ref = model.reference_level
    n = spectrum.levels
    gammas = np.zeros(n)
    for k in range(n):
        if k == ref:
            continue
        t_phi_ns = dephasing_time(spectrum, model, k, ref) * NS_PER_US
        if math.isinf(t_phi_ns):
            continue
        gammas[k] = t_g / t_phi_ns**2
    signs = np.sign(spectrum.flux_dispersion)
    z_diag = signs * np.sqrt(2.0 * gammas)
    return gammas, np.diag(z_diag.astype(complex))


def effective_dephasing_table(spectrum: SpectrumData, model: NoiseModel) -> dict:
    """Pairwise coherence-decay times implied by the surrogate, as
    {(k, l): (t_eff_us, t_free_us, regime)} over the retained levels.

    ``t_eff`` follows from the surrogate's decay rate of rho_kl,
    ``|sgn_k / T_k,ref - sgn_l / T_l,ref|`` inverted; pairs containing the
    reference level reproduce free induction exactly. ``regime`` flags whether
    the surrogate over- or underestimates the free-induction dephasing.
    """
    ref = model.reference_level
    disp = spectrum.flux_dispersion
    table = {}
    inv_ref_times = np.zeros(spectrum.levels)
    for k in range(spectrum.levels):
        if k == ref:
            continue
        inv_ref_times[k] = 1.0 / dephasing_time(spectrum, model, k, ref)
    for k in range(spectrum.levels):
        for l in range(k + 1, spectrum.levels):
            inv_eff = abs(
                np.sign(disp[k]) * inv_ref_times[k] - np.sign(disp[l]) * inv_ref_times[l]
            )
            t_eff = math.inf if inv_eff == 0.0 else 1.0 / inv_eff
            t_free = dephasing_time(spectrum, model, k, l)
            if math.isinf(t_eff) or math.isinf(t_free):
                regime = "exact" if t_eff == t_free else ("over" if t_eff < t_free else "under")
            else:
                ratio = t_eff / t_free
                regime = "exact" if abs(ratio - 1.0) < 1e-9 else ("over" if ratio < 1 else "under")
            table[(k, l)] = (t_eff, t_free, regime)
    return table


def t1_dielectric(spectrum: SpectrumData, model: NoiseModel, k: int, l: int):
    """Dielectric-loss relaxation |k> -> |l>: time in microseconds plus the
    collapse operator sqrt(rate) |l><k|.

    Rate = omega^2 / (8 E_C Q) * [coth(omega/(2 k_B T)) + 1] * |phi_lk|^2 with
    omega the transition frequency; the thermal bracket is 2 at T = 0.
    Returns (inf, zero operator) for a vanishing phase matrix element.
    """
    if model.q_diel is None:
        raise ValueError("model.q_diel must be set for dielectric relaxation")
    omega = spectrum.energies[k] - spectrum.energies[l]
    if omega <= 0:
        raise ValueError("need energies[k] > energies[l] for a decay operator")
    phi_lk = abs(spectrum.phase_elems[l, k])
    e_c_ang = TWOPI * spectrum.spec.e_c_ghz
    if model.temperature > 0:
        thermal = 1.0 / math.tanh(omega / (2.0 * KB_OVER_HBAR * model.temperature)) + 1.0
    else:
        thermal = 2.0
    rate = (omega * omega / (8.0 * e_c_ang * model.q_diel)) * thermal * phi_lk**2
    op = np.zeros((spectrum.levels, spectrum.levels), dtype=complex)
    if rate == 0.0:
        return math.inf, op
    op[l, k] = math.sqrt(rate)
    return (1.0 / rate) / NS_PER_US, op


def rate_ledger_to_csv(
    spectrum: SpectrumData,
    model: NoiseModel,
    path,
    pairs: tuple[tuple[int, int], ...],
    decay_pairs: tuple[tuple[int, int], ...] = (),
    header_comment: str = "",
) -> None:
    """Export free-induction vs surrogate pair times (and optional relaxation
    rows) in a two-column table layout."""
    table = effective_dephasing_table(spectrum, model)
    with open(path, "w", newline="") as fh:
        for line in header_comment.splitlines():
            fh.write(f"# {line}\n")
        fh.write("kind,k,l,t_free_us,t_eff_us,regime\n")
        for k, l in pairs:
            t_eff, t_free, regime = table[(min(k, l), max(k, l))]
            fh.write(f"dephasing,{k},{l},{t_free!r},{t_eff!r},{regime}\n")
        if model.q_diel is not None:
            for upper, lower in decay_pairs:
                t1_us, _ = t1_dielectric(spectrum, model, upper, lower)
                fh.write(f"relaxation,{upper},{lower},{t1_us!r},,\n")


def decay_channel_pairs(
    spectrum: SpectrumData, model: NoiseModel, dominant: tuple[int, int]
) -> tuple[tuple[int, int], ...]:
    """Relaxation channels to install: the dominant one, or every downward
    transition among the retained levels when the model asks for all."""
    if model.q_diel is None:
        return ()
    if not model.all_decay_channels:
        return (dominant,)
    pairs = []
    for upper in range(spectrum.levels):
        for lower in range(upper):
            pairs.append((upper, lower))
    return tuple(pairs)


def build_dissipators(
    spectrum: SpectrumData,
    model: NoiseModel,
    t_g: float,
    decay_pairs: tuple[tuple[int, int], ...] = (),
) -> DissipatorSet:
    """Assemble the dephasing operator and the requested relaxation channels.

    ``decay_pairs`` lists (upper, lower) transitions to install; by default the
    caller passes only the dominant excited-state channel.
    """
    gammas, z_op = lindblad_rates(spectrum, model, t_g)
    rates = {
        "gamma_k": gammas,
        "t_phi_ref_us": [
            dephasing_time(spectrum, model, k, model.reference_level)
            if k != model.reference_level
            else math.inf
            for k in range(spectrum.levels)
        ],
    }
    collapse = []
    if model.q_diel is not None:
        t1_entries = {}
        for upper, lower in decay_pairs:
            t1_us, op = t1_dielectric(spectrum, model, upper, lower)
            if math.isfinite(t1_us):
                collapse.append(op)
            t1_entries[(upper, lower)] = t1_us
        rates["t1_us"] = t1_entries
    return DissipatorSet(z_op=z_op, collapse_ops=tuple(collapse), rates=rates)
