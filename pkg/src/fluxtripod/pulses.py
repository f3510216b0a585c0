"""Drive-waveform synthesis for the tripod gate.

Produces the uncorrected adiabatic pulses, their accelerated (SATD) correction,
smooth turn-on/turn-off ramps, drive-induced level-shift tables, the resulting
carrier-frequency chirps, and the direct-drive comparison pulse. A complete
drive is packaged as a :class:`DriveSignal` that evaluates the real lab-frame
voltage ``V(t) = sum_j Re[ V_j(t) exp(i phi_j(t)) ]``.

All pulse-scale quantities (``omega0``, envelopes) are angular rad/ns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from fluxtripod.circuit import SpectrumData, TripodAssignment

TWOPI = 2.0 * np.pi

DEFAULT_STARK_SAMPLES = 2000
DEFAULT_MIN_DETUNING = TWOPI * 1e-3  # rad/ns; 1 MHz perturbative floor
DEFAULT_RAMP_FRACTION = 0.01

PROTOCOLS = ("adiabatic", "satd")


# ---------------------------------------------------------------------------
# smooth schedule
# ---------------------------------------------------------------------------

def quintic_ramp(x):
    """Monotone quintic with flat endpoints: 0 at x=0, 1 at x=1/2."""
    u = 2.0 * np.asarray(x, dtype=float)
    return ((6.0 * u - 15.0) * u + 10.0) * u**3


def quintic_ramp_d1(x):
    u = 2.0 * np.asarray(x, dtype=float)
    return 60.0 * u**2 * (u - 1.0) ** 2


def quintic_ramp_d2(x):
    u = 2.0 * np.asarray(x, dtype=float)
    return 240.0 * u * (u - 1.0) * (2.0 * u - 1.0)


def schedule_theta(t, t_g: float):
    """Mixing angle theta(t) with analytic first and second derivatives.

    Rises 0 -> pi/2 over [0, t_g/2] and mirrors back to 0 at t_g, with
    theta' = theta'' = 0 at 0, t_g/2 and t_g. Raises for t outside [0, t_g].
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > t_g):
        raise ValueError("schedule time outside [0, t_g]")
    x = t / t_g
    second = x > 0.5
    xs = np.where(second, x - 0.5, x)
    sign = np.where(second, -1.0, 1.0)
    base = np.where(second, np.pi / 2.0, 0.0)
    theta = base + sign * 0.5 * np.pi * quintic_ramp(xs)
    dtheta = sign * 0.5 * np.pi * quintic_ramp_d1(xs) / t_g
    d2theta = sign * 0.5 * np.pi * quintic_ramp_d2(xs) / t_g**2
    if theta.ndim == 0:
        return float(theta), float(dtheta), float(d2theta)
    return theta, dtheta, d2theta


# ---------------------------------------------------------------------------
# gate parameters and bare envelopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GateParams:
    """Tripod-gate pulse parameters.

    ``alpha``, ``beta``, ``gamma0`` are the gate angles, ``omega0`` the
    uncorrected gap scale (rad/ns), ``t_g`` the interior protocol time and
    ``t_ramp`` the turn-on/turn-off duration (both ns).
    """

    alpha: float
    beta: float
    gamma0: float
    omega0: float
    t_g: float
    t_ramp: float | None = None
    protocol: str = "satd"
    chirped: bool = True

    def __post_init__(self):
        if self.t_g <= 0:
            raise ValueError("t_g must be positive")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if self.t_ramp is None:
            object.__setattr__(self, "t_ramp", DEFAULT_RAMP_FRACTION * self.t_g)
        if not 0 < self.t_ramp < self.t_g / 4:
            raise ValueError("t_ramp must lie in (0, t_g/4)")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"protocol must be one of {PROTOCOLS}")

    @property
    def t_total(self) -> float:
        return self.t_g + 2.0 * self.t_ramp


def _gamma_phase(t, p: GateParams):
    """Relative-phase step gamma(t) = gamma0 * Theta(t - t_g/2), interior time."""
    return np.where(np.asarray(t, dtype=float) > p.t_g / 2.0, p.gamma0, 0.0)


def adiabatic_envelopes(t, p: GateParams):
    """Uncorrected pulse triple (Omega_0e, Omega_1e, Omega_ae) at interior time t."""
    theta, _, _ = schedule_theta(t, p.t_g)
    sin_t, cos_t = np.sin(theta), np.cos(theta)
    return _assemble_envelopes(sin_t, cos_t, t, p)


def satd_envelopes(t, p: GateParams):
    """Accelerated pulse triple at interior time t.

    The in-phase component acquires ``4 cos(theta) theta'' / (omega0^2 + 4 theta'^2)``
    and the auxiliary tone the mirrored correction; both vanish wherever
    theta'' does, so corrected and uncorrected pulses agree at 0, t_g/2, t_g.
    """
    theta, dtheta, d2theta = schedule_theta(t, p.t_g)
    corr = 4.0 * d2theta / (p.omega0**2 + 4.0 * dtheta**2)
    in_phase = np.sin(theta) + np.cos(theta) * corr
    aux = np.cos(theta) - np.sin(theta) * corr
    return _assemble_envelopes(in_phase, aux, t, p)


def _assemble_envelopes(in_phase, aux, t, p: GateParams):
    gamma = _gamma_phase(t, p)
    om_0e = p.omega0 * np.cos(p.alpha) * in_phase * np.ones_like(gamma, dtype=complex)
    om_1e = p.omega0 * np.sin(p.alpha) * np.exp(1j * p.beta) * in_phase * np.ones_like(gamma)
    om_ae = p.omega0 * np.exp(1j * gamma) * aux
    return np.stack([om_0e, om_1e, om_ae])


def envelopes_via_dressing(t, p: GateParams):
    """Accelerated envelopes built through the dressed-angle route instead of
    the closed form: rotate the schedule by nu = arctan(2 theta'/omega0), which
    maps (theta, omega0) to a tilted angle and a time-dependent gap. The
    envelope scale is twice the instantaneous gap. Cross-check only."""
    theta, dtheta, d2theta = schedule_theta(t, p.t_g)
    nu = np.arctan2(2.0 * dtheta, p.omega0)
    dnu = 2.0 * d2theta * p.omega0 / (p.omega0**2 + 4.0 * dtheta**2)
    # theta' / tan(nu) == omega0 / 2 identically for this dressing
    theta_tilde = theta + np.arctan2(dnu, p.omega0 / 2.0)
    gap = np.sqrt(dnu**2 + (p.omega0 / 2.0) ** 2)
    scale = 2.0 * gap
    gamma = _gamma_phase(t, p)
    return np.stack(
        [
            scale * np.cos(p.alpha) * np.sin(theta_tilde) + 0j,
            scale * np.sin(p.alpha) * np.exp(1j * p.beta) * np.sin(theta_tilde),
            scale * np.exp(1j * gamma) * np.cos(theta_tilde),
        ]
    )


# ---------------------------------------------------------------------------
# ramps
# ---------------------------------------------------------------------------

class RampedEnvelopes:
    """Piecewise envelopes over [0, t_total]: the auxiliary tone turns on and
    off through the quintic ramp while the qubit tones stay off; the interior
    runs the protocol on the shifted clock t - t_ramp.

    The turn-off ramp keeps the relative-phase factor exp(i gamma0) the
    auxiliary tone acquired at mid-protocol, otherwise the voltage would jump
    at the interior/ramp boundary.
    """

    def __init__(self, params: GateParams):
        self.params = params
        self.t_total = params.t_total

    def __call__(self, t):
        p = self.params
        t_arr = np.asarray(t, dtype=float)
        scalar = t_arr.ndim == 0
        t_arr = np.atleast_1d(t_arr)
        if np.any(t_arr < 0.0) or np.any(t_arr > self.t_total):
            raise ValueError("time outside [0, t_total]")
        out = np.zeros((3, t_arr.size), dtype=complex)

        rise = t_arr < p.t_ramp
        fall = t_arr > p.t_g + p.t_ramp
        interior = ~(rise | fall)
        if np.any(rise):
            out[2, rise] = p.omega0 * quintic_ramp(t_arr[rise] / (2.0 * p.t_ramp))
        if np.any(fall):
            out[2, fall] = (
                p.omega0
                * np.exp(1j * p.gamma0)
                * (1.0 - quintic_ramp((t_arr[fall] - p.t_ramp - p.t_g) / (2.0 * p.t_ramp)))
            )
        if np.any(interior):
            inner = t_arr[interior] - p.t_ramp
            env = (satd_envelopes if p.protocol == "satd" else adiabatic_envelopes)(inner, p)
            out[:, interior] = env.reshape(3, -1)
        return out[:, 0] if scalar else out


    def scalar(self, t: float):
        """Allocation-free single-time evaluation (propagation hot path)."""
        p = self.params
        if t < p.t_ramp:
            u = t / p.t_ramp  # quintic argument times two
            aux = p.omega0 * (((6.0 * u - 15.0) * u + 10.0) * u**3)
            return 0.0j, 0.0j, complex(aux)
        if t > p.t_g + p.t_ramp:
            u = (t - p.t_ramp - p.t_g) / p.t_ramp
            aux = p.omega0 * (1.0 - ((6.0 * u - 15.0) * u + 10.0) * u**3)
            return 0.0j, 0.0j, aux * complex(math.cos(p.gamma0), math.sin(p.gamma0))
        ti = t - p.t_ramp
        x = ti / p.t_g
        if x <= 0.5:
            u, sign = 2.0 * x, 1.0
        else:
            u, sign = 2.0 * (x - 0.5), -1.0
        half_pi = 0.5 * math.pi
        pval = ((6.0 * u - 15.0) * u + 10.0) * u**3
        theta = half_pi * pval if sign > 0 else half_pi * (1.0 - pval)
        d1 = sign * half_pi * 60.0 * u * u * (u - 1.0) ** 2 / p.t_g
        d2 = sign * half_pi * 240.0 * u * (u - 1.0) * (2.0 * u - 1.0) / p.t_g**2
        sin_t, cos_t = math.sin(theta), math.cos(theta)
        if p.protocol == "satd":
            corr = 4.0 * d2 / (p.omega0**2 + 4.0 * d1**2)
            in_phase = sin_t + cos_t * corr
            aux = cos_t - sin_t * corr
        else:
            in_phase, aux = sin_t, cos_t
        gamma = p.gamma0 if ti > p.t_g / 2.0 else 0.0
        return (
            p.omega0 * math.cos(p.alpha) * in_phase + 0.0j,
            p.omega0
            * math.sin(p.alpha)
            * in_phase
            * complex(math.cos(p.beta), math.sin(p.beta)),
            p.omega0 * aux * complex(math.cos(gamma), math.sin(gamma)),
        )


def apply_ramps(params: GateParams) -> RampedEnvelopes:
    """Envelope functions over [0, t_g + 2 t_ramp] with smooth turn-on/off."""
    return RampedEnvelopes(params)


# ---------------------------------------------------------------------------
# drive-induced level shifts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StarkTerm:
    level: int
    partner: int
    tone: int
    sigma: int
    detuning: float


@dataclass(frozen=True)
class StarkShiftTable:
    """Sampled second-order level shifts delta_eps_k(t) for ``shift_levels``.

    ``shifts[i, k]`` is the shift of ``shift_levels[k]`` at ``times[i]`` in
    rad/ns; ``ledger`` records every included (level, partner, tone, sigma)
    term with its detuning, ``warnings`` the near-resonant exclusions.
    """

    times: np.ndarray
    shifts: np.ndarray
    shift_levels: tuple[int, ...]
    ledger: tuple[StarkTerm, ...]
    warnings: tuple[StarkTerm, ...]

    def __post_init__(self):
        self.times.setflags(write=False)
        self.shifts.setflags(write=False)

    def column(self, level: int) -> np.ndarray:
        return self.shifts[:, self.shift_levels.index(level)]

    def integral(self, level: int) -> float:
        """Accumulated phase contribution of one level's shift over the window."""
        return float(np.trapezoid(self.column(level), self.times))


def stark_coefficients(
    spectrum: SpectrumData,
    carriers: np.ndarray,
    shift_levels: tuple[int, ...],
    min_detuning: float = DEFAULT_MIN_DETUNING,
):
    """Per-tone quadratic-response coefficients C[k, j] so that
    delta_eps_k(t) = sum_j C[k, j] |V_j(t)|^2.

    The shift of level k through partner l under tone j uses the detuning
    eps_k - eps_l + sigma * omega_j; the sign is fixed by the exact
    dressed-level limit of an isolated driven pair. Exactly resonant terms
    (the intended drives) are excluded; terms inside ``min_detuning`` are
    excluded and reported as warnings rather than summed.
    """
    if min_detuning <= 0:
        raise ValueError("min_detuning must be positive")
    energies = spectrum.energies
    n_abs2 = np.abs(spectrum.charge_elems) ** 2
    coeff = np.zeros((len(shift_levels), len(carriers)))
    ledger: list[StarkTerm] = []
    warnings: list[StarkTerm] = []
    for ik, k in enumerate(shift_levels):
        for j, omega_j in enumerate(carriers):
            total = 0.0
            for l in range(spectrum.levels):
                if n_abs2[k, l] == 0.0:
                    continue
                for sigma in (1, -1):
                    delta = energies[k] - energies[l] + sigma * omega_j
                    if delta == 0.0:
                        continue  # intended resonance
                    term = StarkTerm(k, l, j, sigma, float(delta))
                    if abs(delta) < min_detuning:
                        warnings.append(term)
                        continue
                    total += n_abs2[k, l] / (4.0 * delta)
                    ledger.append(term)
            coeff[ik, j] = total
    return coeff, tuple(ledger), tuple(warnings)


def stark_shift_row(
    spectrum: SpectrumData,
    trip: TripodAssignment,
    v_amps,
    min_detuning: float = DEFAULT_MIN_DETUNING,
) -> np.ndarray:
    """Shifts of the four tripod levels for one instantaneous set of tone
    amplitudes ``v_amps`` (voltage units, tone order 0e/1e/ae)."""
    coeff, _, _ = stark_coefficients(
        spectrum, np.asarray(trip.drive_freqs), trip.tripod_indices, min_detuning
    )
    return coeff @ (np.abs(np.asarray(v_amps)) ** 2)


def build_stark_table(
    spectrum: SpectrumData,
    trip: TripodAssignment,
    pulse: RampedEnvelopes,
    samples: int = DEFAULT_STARK_SAMPLES,
    min_detuning: float = DEFAULT_MIN_DETUNING,
) -> StarkShiftTable:
    """Tabulate the tripod-level shifts across the whole ramped protocol."""
    carriers = np.asarray(trip.drive_freqs)
    coeff, ledger, warn = stark_coefficients(
        spectrum, carriers, trip.tripod_indices, min_detuning
    )
    times = np.linspace(0.0, pulse.t_total, samples)
    omegas = pulse(times)  # (3, samples) coupling units
    n_drive = np.array(
        [
            spectrum.charge_elems[trip.idx0, trip.idx_e],
            spectrum.charge_elems[trip.idx1, trip.idx_e],
            spectrum.charge_elems[trip.idx_a, trip.idx_e],
        ]
    )
    v2 = (np.abs(omegas) / np.abs(n_drive)[:, None]) ** 2
    shifts = v2.T @ coeff.T
    return StarkShiftTable(
        times=times,
        shifts=shifts,
        shift_levels=trip.tripod_indices,
        ledger=ledger,
        warnings=warn,
    )


# ---------------------------------------------------------------------------
# chirp phases
# ---------------------------------------------------------------------------

class ChirpPhases:
    """Accumulated chirp phases on a uniform grid with C1 cubic interpolation.

    ``values[i, j]`` is the integral of the j-th tone's frequency correction up
    to ``t0 + i*h`` (starts at exactly zero); ``slopes`` holds the instantaneous
    corrections used as Hermite derivatives.
    """

    def __init__(self, times: np.ndarray, deltas: np.ndarray):
        h = times[1] - times[0]
        if not np.allclose(np.diff(times), h):
            raise ValueError("chirp grid must be uniform")
        self.h = float(h)
        self.t_total = float(times[-1])
        self.slopes = deltas
        values = np.zeros_like(deltas)
        values[1:] = np.cumsum(0.5 * h * (deltas[1:] + deltas[:-1]), axis=0)
        self.values = values

    @property
    def n_tones(self) -> int:
        return self.values.shape[1]

    def __call__(self, t):
        """Chirp phase (per tone) at scalar or array time t."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        idx = np.clip((t_arr / self.h).astype(int), 0, len(self.values) - 2)
        u = (t_arr - idx * self.h) / self.h
        y0, y1 = self.values[idx], self.values[idx + 1]
        m0, m1 = self.slopes[idx] * self.h, self.slopes[idx + 1] * self.h
        u = u[:, None]
        h00 = (1 + 2 * u) * (1 - u) ** 2
        h10 = u * (1 - u) ** 2
        h01 = u**2 * (3 - 2 * u)
        h11 = u**2 * (u - 1)
        out = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1
        return out[0] if np.ndim(t) == 0 else out

    def rate(self, t):
        """Instantaneous frequency correction (per tone), linearly interpolated."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        idx = np.clip((t_arr / self.h).astype(int), 0, len(self.values) - 2)
        u = ((t_arr - idx * self.h) / self.h)[:, None]
        out = (1 - u) * self.slopes[idx] + u * self.slopes[idx + 1]
        return out[0] if np.ndim(t) == 0 else out

    def scalar(self, t: float, tone: int) -> float:
        """Single-tone Hermite evaluation on plain floats (hot path)."""
        idx = int(t / self.h)
        if idx < 0:
            idx = 0
        elif idx > len(self.values) - 2:
            idx = len(self.values) - 2
        u = (t - idx * self.h) / self.h
        y0 = self.values[idx, tone]
        y1 = self.values[idx + 1, tone]
        m0 = self.slopes[idx, tone] * self.h
        m1 = self.slopes[idx + 1, tone] * self.h
        u2 = u * u
        u3 = u2 * u
        return (
            (1 + 2 * u) * (1 - u) ** 2 * y0
            + (u - 2 * u2 + u3) * m0
            + u2 * (3 - 2 * u) * y1
            + (u3 - u2) * m1
        )


def chirp_phases(table: StarkShiftTable, trip: TripodAssignment) -> ChirpPhases:
    """Per-tone accumulated phase corrections keeping each tone resonant with
    its shifted transition: the j-th carrier moves by the shift of the shared
    excited level minus the shift of the tone's ground level."""
    if len(table.times) < 200:
        raise ValueError("chirp grid must carry at least 200 samples")
    excited = table.column(trip.idx_e)
    deltas = np.stack(
        [
            excited - table.column(trip.idx0),
            excited - table.column(trip.idx1),
            excited - table.column(trip.idx_a),
        ],
        axis=1,
    )
    return ChirpPhases(table.times, deltas)


# ---------------------------------------------------------------------------
# the complete drive
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DriveSignal:
    """A multi-tone drive evaluable as the real lab-frame voltage.

    ``envelopes(t)`` returns the complex per-tone amplitudes in voltage units;
    each tone's total phase is ``carrier * t`` plus the tabulated chirp phase.
    """

    envelopes: Callable
    carriers: np.ndarray
    pairs: tuple[tuple[int, int], ...]
    t_total: float
    chirp: ChirpPhases | None = None
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        self.carriers.setflags(write=False)
        for t_edge in (0.0, self.t_total):
            if np.max(np.abs(self.envelopes(t_edge))) > 1e-9:
                raise ValueError("envelopes must vanish at the protocol edges")
        if self.chirp is not None and np.max(np.abs(self.chirp.values[0])) != 0.0:
            raise ValueError("chirp phase table must start at zero")

    @property
    def n_tones(self) -> int:
        return len(self.carriers)

    def tone_phases(self, t):
        """Accumulated carrier phases (per tone) at time t."""
        t_arr = np.asarray(t, dtype=float)
        base = np.multiply.outer(t_arr, self.carriers)
        if self.chirp is not None:
            base = base + self.chirp(t)
        return base

    def instantaneous_freqs(self, t):
        t_arr = np.asarray(t, dtype=float)
        base = np.broadcast_to(self.carriers, t_arr.shape + self.carriers.shape).copy()
        if self.chirp is not None:
            base = base + self.chirp.rate(t)
        return base

    def voltage(self, t):
        """Real control voltage V(t); accepts scalars or arrays."""
        if np.ndim(t) == 0 and hasattr(self.envelopes, "scalar"):
            return self._voltage_scalar(float(t))
        t_arr = np.asarray(t, dtype=float)
        env = self.envelopes(t_arr)  # (ntones,) or (ntones, n)
        phases = self.tone_phases(t_arr)
        if t_arr.ndim == 0:
            return float(np.sum(env * np.exp(1j * phases)).real)
        return np.sum(env * np.exp(1j * phases.T), axis=0).real

    def _voltage_scalar(self, t: float) -> float:
        env = self.envelopes.scalar(t)
        chirp = self.chirp
        total = 0.0
        for j in range(len(env)):
            e = env[j]
            if e == 0:
                continue
            phase = self.carriers[j] * t
            if chirp is not None:
                phase += chirp.scalar(t, j)
            total += (e * complex(math.cos(phase), math.sin(phase))).real
        return total


class ScaledEnvelopes:
    """Coupling envelopes divided by the complex drive matrix elements,
    yielding tone amplitudes in voltage units. Picklable for worker pools."""

    def __init__(self, pulse: RampedEnvelopes, n_drive: np.ndarray):
        self.pulse = pulse
        self.n_drive = n_drive
        self.t_total = pulse.t_total

    def __call__(self, t):
        env = self.pulse(t)
        if env.ndim == 1:
            return env / self.n_drive
        return env / self.n_drive[:, None]

    def scalar(self, t: float):
        raw = self.pulse.scalar(t)
        n = self.n_drive
        return (raw[0] / n[0], raw[1] / n[1], raw[2] / n[2])


class RaisedCosineEnvelope:
    """One-tone window (1 - cos(2 pi t / t_g)) scaled for a target Rabi area."""

    def __init__(self, chi: float, t_g: float, n_qubit: complex):
        self.amp = chi / (t_g * n_qubit)
        self.t_g = t_g

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        amp = self.amp * (1.0 - np.cos(TWOPI * t_arr / self.t_g))
        return amp[None, ...] if t_arr.ndim else np.array([amp])

    def scalar(self, t: float):
        return (self.amp * (1.0 - math.cos(TWOPI * t / self.t_g)),)


def build_tripod_drive(
    spectrum: SpectrumData,
    trip: TripodAssignment,
    params: GateParams,
    samples: int = DEFAULT_STARK_SAMPLES,
    min_detuning: float = DEFAULT_MIN_DETUNING,
) -> tuple[DriveSignal, StarkShiftTable | None]:
    """Assemble the full three-tone drive for the configured protocol.

    Tone amplitudes are the coupling envelopes divided by the complex drive
    matrix elements, so the effective couplings carry exactly the intended
    phases regardless of the eigenvector gauge.
    """
    pulse = apply_ramps(params)
    n_drive = np.array(
        [
            spectrum.charge_elems[trip.idx0, trip.idx_e],
            spectrum.charge_elems[trip.idx1, trip.idx_e],
            spectrum.charge_elems[trip.idx_a, trip.idx_e],
        ]
    )
    voltage_envelopes = ScaledEnvelopes(pulse, n_drive)
    table = None
    chirp = None
    if params.chirped:
        table = build_stark_table(spectrum, trip, pulse, samples, min_detuning)
        chirp = chirp_phases(table, trip)
    signal = DriveSignal(
        envelopes=voltage_envelopes,
        carriers=np.asarray(trip.drive_freqs),
        pairs=(
            (trip.idx0, trip.idx_e),
            (trip.idx1, trip.idx_e),
            (trip.idx_a, trip.idx_e),
        ),
        t_total=params.t_total,
        chirp=chirp,
        labels=("0e", "1e", "ae"),
    )
    return signal, table


def direct_drive_pulse(
    spectrum: SpectrumData,
    trip: TripodAssignment,
    chi: float,
    t_g: float,
    chirped: bool = True,
    samples: int = DEFAULT_STARK_SAMPLES,
    min_detuning: float = DEFAULT_MIN_DETUNING,
) -> tuple[DriveSignal, StarkShiftTable | None]:
    """Resonant one-tone qubit drive with a raised-cosine window of Rabi area chi.

    The tone envelope divides by the complex qubit matrix element, so a window
    of area chi rotates the qubit by chi about x. When chirped, the carrier
    tracks the shifted qubit splitting.
    """
    n_q = spectrum.charge_elems[trip.idx1, trip.idx0]
    if abs(n_q) == 0.0:
        raise ValueError("qubit matrix element vanishes; direct drive impossible")
    lower, upper = sorted((trip.idx0, trip.idx1), key=lambda i: spectrum.energies[i])
    carrier = spectrum.energies[upper] - spectrum.energies[lower]
    envelope = RaisedCosineEnvelope(chi, t_g, n_q)
    table = None
    chirp = None
    if chirped:
        coeff, ledger, warn = stark_coefficients(
            spectrum, np.array([carrier]), (lower, upper), min_detuning
        )
        times = np.linspace(0.0, t_g, samples)
        v2 = np.abs(envelope(times)[0]) ** 2
        shifts = np.outer(v2, coeff[:, 0])
        table = StarkShiftTable(
            times=times,
            shifts=shifts,
            shift_levels=(lower, upper),
            ledger=ledger,
            warnings=warn,
        )
        deltas = (table.column(upper) - table.column(lower))[:, None]
        chirp = ChirpPhases(times, deltas)
    signal = DriveSignal(
        envelopes=envelope,
        carriers=np.array([carrier]),
        pairs=((lower, upper),),
        t_total=t_g,
        chirp=chirp,
        labels=("01",),
    )
    return signal, table
