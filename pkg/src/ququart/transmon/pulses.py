"""Drive-pulse envelopes and specifications.

Times are in ns and angular frequencies in rad/ns throughout.  A pulse's
complex phase sets its rotation axis: phase 0 drives +x, pi drives -x, and
+-pi/2 select the +-y axes (up to the calibration of the simulator's frame).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def gaussian_square(t: np.ndarray | float, tau_g: float, tau_s: float, sigma: float) -> np.ndarray:
    """Unit-amplitude flat-top envelope with lifted-Gaussian ramps.

    The Gaussian rise and fall are shifted and rescaled by
    ``chi = exp(-tau_g^2 / (2 sigma^2))`` so the envelope is exactly zero at
    ``t = 0`` and ``t = tau_s + 2*tau_g`` and exactly one on the plateau.
    """
    t = np.asarray(t, dtype=float)
    chi = math.exp(-0.5 * (tau_g / sigma) ** 2)
    total = tau_s + 2.0 * tau_g
    rise = (np.exp(-0.5 * ((t - tau_g) / sigma) ** 2) - chi) / (1.0 - chi)
    fall = (np.exp(-0.5 * ((t - tau_g - tau_s) / sigma) ** 2) - chi) / (1.0 - chi)
    out = np.ones_like(t)
    out = np.where(t <= tau_g, rise, out)
    out = np.where(t >= tau_g + tau_s, fall, out)
    out = np.where((t < 0.0) | (t > total), 0.0, out)
    return out


@dataclass(frozen=True)
class PulseSpec:
    """One microwave pulse on one transmon.

    ``amplitude`` is the peak drive strength (rad/ns, may be negative to flip
    the axis), ``carrier`` the drive frequency and ``detuning`` an additive
    carrier shift (used for the charge-dispersion offsets).  ``phase`` is the
    constant complex phase of the envelope.
    """

    amplitude: float
    tau_g: float
    tau_s: float
    sigma: float
    carrier: float
    phase: float = 0.0
    transmon: str = "control"
    detuning: float = 0.0

    def __post_init__(self) -> None:
        if self.tau_g <= 0 or self.tau_s < 0 or self.sigma <= 0:
            raise ValueError("pulse durations must be positive (tau_s may be zero)")
        if self.transmon not in ("control", "target"):
            raise ValueError(f"unknown transmon {self.transmon!r}")

    @property
    def duration(self) -> float:
        return self.tau_s + 2.0 * self.tau_g

    @property
    def drive_frequency(self) -> float:
        return self.carrier + self.detuning

    def envelope(self, t: np.ndarray | float) -> np.ndarray:
        """Real envelope (before the complex ``phase`` factor) at local time t."""
        return self.amplitude * gaussian_square(t, self.tau_g, self.tau_s, self.sigma)

    def envelope_area(self) -> float:
        """Integral of the unit-amplitude envelope; rotation angle per rad/ns."""
        chi = math.exp(-0.5 * (self.tau_g / self.sigma) ** 2)
        gauss = self.sigma * math.sqrt(2.0 * math.pi) * math.erf(
            self.tau_g / (self.sigma * math.sqrt(2.0))
        )
        ramp = (gauss - 2.0 * self.tau_g * chi) / (1.0 - chi)
        return ramp + self.tau_s
