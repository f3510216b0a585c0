"""Pulse synthesis and lab-frame simulation of accelerated adiabatic tripod gates
in a multilevel fluxonium circuit.

The package is organized around a small pipeline:

``circuit``      quantize the fluxonium and expose spectra / matrix elements
``pulses``       synthesize drive waveforms (adiabatic, SATD, ramped, chirped, direct)
``power``        drive-power metrics and the power-optimal pulse scale
``noise``        Markovian dephasing surrogate and dielectric-loss T1
``propagation``  Schrodinger / Lindblad time evolution (lab frame and ideal RWA)
``scoring``      target unitaries, state-averaged fidelity, leakage
``cavity``       cavity-drive conversion, photon budgets, cavity-induced coherence
``scenario``     config files tying everything together
``cli``          command-line entry point

Internally all frequencies are angular (rad/ns), times are in ns and hbar = 1;
configuration files use ordinary frequencies in GHz with unit-suffixed keys.
"""

from fluxtripod.circuit import (
    CircuitSpec,
    SpectrumData,
    TripodAssignment,
    assign_tripod,
    diagonalize,
    flux_dispersion,
)
from fluxtripod.pulses import DriveSignal, GateParams, StarkShiftTable
from fluxtripod.scoring import FidelityReport, GateTarget

__all__ = [
    "CircuitSpec",
    "SpectrumData",
    "TripodAssignment",
    "assign_tripod",
    "diagonalize",
    "flux_dispersion",
    "DriveSignal",
    "GateParams",
    "StarkShiftTable",
    "FidelityReport",
    "GateTarget",
]

__version__ = "0.1.0"
