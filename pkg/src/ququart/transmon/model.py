"""Four-level transmon pair: bare operators, static coupling, dressed frame."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..circuits import ConvergenceError
from .charge import charge_dispersion, fit_ej_ec

OVERLAP_THRESHOLD = 0.5


@dataclass(frozen=True)
class TransmonParams:
    """Single-transmon parameters (angular frequencies, rad/ns)."""

    omega: float
    alpha: float
    ej: float
    ec: float
    n_g: float = 0.0

    def __post_init__(self) -> None:
        if self.ej <= self.ec:
            raise ValueError("expected the transmon regime E_J > E_C")

    @property
    def epsilon(self) -> float:
        """Perturbative parameter ``sqrt(2 E_C / E_J)`` of the transmon expansion."""
        return math.sqrt(2.0 * self.ec / self.ej)


def transmon_from_spectrum(omega: float, alpha: float) -> TransmonParams:
    ej, ec = fit_ej_ec(omega, alpha)
    return TransmonParams(omega=omega, alpha=alpha, ej=ej, ec=ec)


def level_energies(params: TransmonParams, d: int = 4) -> np.ndarray:
    """Diagonal of the truncated transmon Hamiltonian, ground state at zero.

    Levels 0..2 are fixed by ``omega`` and ``alpha``; the third level picks up
    the next-order correction ``3*(omega + alpha - E_C*eps/8)``.
    """
    if d > 4:
        raise ValueError("the truncated model covers at most four levels")
    eps = params.epsilon
    e3 = 3.0 * (params.omega + params.alpha - params.ec * eps / 8.0)
    return np.array([0.0, params.omega, 2.0 * params.omega + params.alpha, e3])[:d]


def lowering_operator(params: TransmonParams, d: int = 4, include_03: bool = True) -> np.ndarray:
    """Charge-coupling lowering operator ``b`` in the transmon eigenbasis.

    Matrix elements carry the standard ``eps`` series; the anomalous (0, 3)
    element appears at first order in ``eps`` and can be omitted for drive
    operators treated in the rotating-wave approximation.
    """
    if d > 4:
        raise ValueError("the truncated model covers at most four levels")
    eps = params.epsilon
    b = np.zeros((4, 4))
    b[0, 1] = 1.0 - eps / 8.0 - 11.0 * eps**2 / 256.0
    b[1, 2] = math.sqrt(2.0) * (1.0 - eps / 4.0 - 73.0 * eps**2 / 512.0)
    b[2, 3] = math.sqrt(3.0) * (1.0 - 3.0 * eps / 8.0 - 79.0 * eps**2 / 256.0)
    if include_03:
        b[0, 3] = -math.sqrt(6.0) * eps / 16.0 - 5.0 * math.sqrt(6.0) * eps**2 / 128.0
    return b[:d, :d]


def quadrature_y(params: TransmonParams, d: int = 4) -> np.ndarray:
    """Hermitian coupling quadrature ``-1j * (b - b^dag)``."""
    b = lowering_operator(params, d)
    return -1j * (b - b.conj().T)


@dataclass(frozen=True)
class TransmonPairModel:
    """Dressed description of two statically coupled transmons.

    ``energies`` holds the dressed eigenvalues arranged by bare label
    ``[control, target]`` and ``v`` the bare->dressed basis change whose
    column ``d*c + t`` is the dressed state adiabatically connected to
    ``|c, t>``.
    """

    control: TransmonParams
    target: TransmonParams
    coupling: float
    d: int
    energies: np.ndarray
    v: np.ndarray

    @property
    def dim(self) -> int:
        return self.d * self.d

    @cached_property
    def flat_energies(self) -> np.ndarray:
        """Dressed energies flattened in bare-label (control-major) order."""
        return self.energies.reshape(-1)

    def dressed_operator(self, op_bare: np.ndarray) -> np.ndarray:
        """Conjugate a bare-basis operator into the dressed eigenbasis."""
        return self.v.conj().T @ op_bare @ self.v

    def drive_operator(self, which: str) -> np.ndarray:
        """Dressed lowering operator for a charge drive on one transmon.

        The (0, 3) two-photon element is dropped: with a carrier near the 0-1
        frequency it rotates at roughly twice the drive frequency and is
        discarded along with the other counter-rotating terms.
        """
        eye = np.eye(self.d)
        if which == "control":
            bare = np.kron(lowering_operator(self.control, self.d, include_03=False), eye)
        elif which == "target":
            bare = np.kron(eye, lowering_operator(self.target, self.d, include_03=False))
        else:
            raise ValueError(f"unknown transmon {which!r}")
        return self.dressed_operator(bare)

    def dressed_target_frequency(self, control_level: int = 0) -> float:
        """Target 0-1 frequency with the control resting in ``control_level``."""
        return float(self.energies[control_level, 1] - self.energies[control_level, 0])

    def dressed_control_frequency(self, target_level: int = 0) -> float:
        return float(self.energies[1, target_level] - self.energies[0, target_level])

    @cached_property
    def omega_bar_target(self) -> float:
        """Dressed target 0-1 frequency averaged over the control levels.

        This is the carrier used for all cross-resonance tones; averaging
        keeps the detuning to each control-conditioned transition small.
        """
        return float(np.mean([self.dressed_target_frequency(c) for c in range(self.d)]))

    @cached_property
    def omega_bar_control(self) -> float:
        """Dressed control 0-1 frequency averaged over the target levels."""
        return float(np.mean([self.dressed_control_frequency(t) for t in range(self.d)]))

    def target_shift(self, control_level: int) -> float:
        """Control-state-dependent shift of the target 0-1 frequency."""
        return self.dressed_target_frequency(control_level) - self.dressed_target_frequency(0)

    @cached_property
    def control_detunings(self) -> np.ndarray:
        """Charge-dispersion carrier offsets for control-transmon pulses."""
        return charge_dispersion(self.control.ej, self.control.ec, self.d - 1)

    @cached_property
    def target_detunings(self) -> np.ndarray:
        """Charge-dispersion carrier offsets for target-transmon pulses."""
        return charge_dispersion(self.target.ej, self.target.ec, self.d - 1)


def build_pair_model(
    control: TransmonParams,
    target: TransmonParams,
    coupling: float,
    d: int = 4,
) -> TransmonPairModel:
    """Diagonalise the static pair Hamiltonian and label the dressed states.

    The static Hamiltonian is ``H_c x 1 + 1 x H_t + J * y_c x y_t``.  Dressed
    eigenvectors are matched to bare product states by maximum-overlap
    assignment; the dispersive regime modelled here keeps every matched
    overlap far above one half, which is enforced.
    """
    eye = np.eye(d)
    h0 = (
        np.kron(np.diag(level_energies(control, d)), eye)
        + np.kron(eye, np.diag(level_energies(target, d)))
        + coupling * np.kron(quadrature_y(control, d), quadrature_y(target, d))
    )
    w, u = np.linalg.eigh(h0)
    overlap = np.abs(u) ** 2  # rows: bare index, cols: eigenvector index
    bare_idx, eig_idx = linear_sum_assignment(-overlap)
    order = np.empty(d * d, dtype=int)
    order[bare_idx] = eig_idx
    if np.any(overlap[np.arange(d * d), order] < OVERLAP_THRESHOLD):
        raise ConvergenceError("dressed-state labelling is ambiguous; coupling too strong")
    v = u[:, order]
    # Fix each column's global phase so its dominant component is real positive.
    for k in range(d * d):
        lead = np.argmax(np.abs(v[:, k]))
        phase = v[lead, k] / abs(v[lead, k])
        v[:, k] = v[:, k] / phase
    energies = w[order].reshape(d, d)
    return TransmonPairModel(
        control=control, target=target, coupling=coupling, d=d, energies=energies, v=v
    )
