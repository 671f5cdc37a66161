"""Pulse-level model of a pair of fixed-frequency, capacitively coupled transmons."""

from .charge import charge_dispersion, charge_hamiltonian, fit_ej_ec, transmon_levels
from .model import TransmonParams, TransmonPairModel, build_pair_model, transmon_from_spectrum

__all__ = [
    "TransmonPairModel",
    "TransmonParams",
    "build_pair_model",
    "charge_dispersion",
    "charge_hamiltonian",
    "fit_ej_ec",
    "transmon_from_spectrum",
    "transmon_levels",
]
