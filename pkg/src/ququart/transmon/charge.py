"""Charge-basis transmon spectra.

All frequencies in this package are angular (rad/ns); divide by ``2*pi`` to
get GHz.  The charge basis truncates the Cooper-pair number to
``|n| <= n_cut``, which is plenty for the E_J/E_C ~ 70 devices modelled here
(tightening ``n_cut`` from 20 to 25 moves the first four levels by well under
one Hz).
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import root

from ..circuits import ConvergenceError

DEFAULT_N_CUT = 20


def charge_hamiltonian(ej: float, ec: float, ng: float = 0.0, n_cut: int = DEFAULT_N_CUT) -> np.ndarray:
    """Transmon Hamiltonian ``4 E_C (n - n_g)^2 - E_J cos(phi)`` in the charge basis.

    Returns a real symmetric matrix of dimension ``2*n_cut + 1``.
    """
    if ej <= 0 or ec <= 0:
        raise ValueError("ej and ec must be positive")
    n = np.arange(-n_cut, n_cut + 1, dtype=float)
    h = np.diag(4.0 * ec * (n - ng) ** 2)
    hop = np.full(2 * n_cut, -ej / 2.0)
    h += np.diag(hop, 1) + np.diag(hop, -1)
    return h


def transmon_levels(
    ej: float,
    ec: float,
    ng: float = 0.0,
    n_levels: int = 4,
    n_cut: int = DEFAULT_N_CUT,
) -> np.ndarray:
    """Lowest ``n_levels`` eigenenergies, referenced to the ground state."""
    w = np.linalg.eigvalsh(charge_hamiltonian(ej, ec, ng, n_cut))
    return w[:n_levels] - w[0]


def fit_ej_ec(omega: float, alpha: float, n_cut: int = DEFAULT_N_CUT) -> tuple[float, float]:
    """Solve for ``(E_J, E_C)`` reproducing a 0-1 frequency and anharmonicity.

    ``omega`` is the 0-1 transition frequency and ``alpha`` the anharmonicity
    ``(E_2 - E_1) - (E_1 - E_0)``, both at zero charge offset.  Seeds come
    from the asymptotic relations ``alpha ~ -E_C`` and
    ``omega ~ sqrt(8 E_J E_C) - E_C``.
    """
    if omega <= 0 or alpha >= 0:
        raise ValueError("expected omega > 0 and alpha < 0")
    ec0 = -alpha
    ej0 = (omega + ec0) ** 2 / (8.0 * ec0)

    def residual(p: np.ndarray) -> list[float]:
        ej, ec = p
        if ej <= 0 or ec <= 0:
            return [1e6, 1e6]
        e = transmon_levels(ej, ec, 0.0, 3, n_cut)
        return [e[1] - omega, (e[2] - e[1]) - e[1] - alpha]

    sol = root(residual, np.array([ej0, ec0]))
    if not sol.success:
        raise ConvergenceError(f"transmon parameter fit failed: {sol.message}")
    ej, ec = sol.x
    return float(ej), float(ec)


def charge_dispersion(
    ej: float,
    ec: float,
    n_transitions: int = 3,
    n_points: int = 101,
    n_cut: int = DEFAULT_N_CUT,
) -> np.ndarray:
    """Charge dispersion of the first ``n_transitions`` transition frequencies.

    The dispersion of transition ``n -> n+1`` is half the peak-to-peak spread
    of its frequency as the charge offset sweeps half a period,
    ``n_g in [0, 1/2]`` (the spectrum is symmetric about both endpoints).
    """
    ngs = np.linspace(0.0, 0.5, n_points)
    freqs = np.empty((n_points, n_transitions))
    for i, ng in enumerate(ngs):
        e = transmon_levels(ej, ec, ng, n_transitions + 1, n_cut)
        freqs[i] = np.diff(e)
    return (freqs.max(axis=0) - freqs.min(axis=0)) / 2.0
