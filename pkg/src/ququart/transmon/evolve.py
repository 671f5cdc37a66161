"""Schroedinger and Lindblad propagation in the interaction picture.

All propagators are expressed in the interaction picture of a diagonal frame
Hamiltonian: the caller supplies the frame ``energies`` (dressed pair
energies, or a single transmon's level energies) plus operators written in
that same basis, and every returned propagator/channel already has the frame
rotation removed.

Sequence helpers integrate every pulse on its own clock starting at t = 0.
Composing the resulting interaction-picture propagators re-aligns the
carrier's beat phase with every transition at the start of each pulse -- the
alignment a virtual phase update between pulses provides on hardware, where
each pulse is played relative to a software frame rather than a free-running
oscillator.  The single-pulse entry points accept an explicit ``t_start`` for
the cases where two tones must stay phase coherent on one shared clock (the
back-to-back cross-resonance tones of the echoed sequence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from scipy.linalg import expm

from ..channels import QuantumChannel, identity_channel, lindblad_generator
from ..circuits import ConvergenceError
from .pulses import PulseSpec

SCHRODINGER_RTOL = 1e-10
SCHRODINGER_ATOL = 1e-12
LINDBLAD_RTOL = 1e-9
LINDBLAD_ATOL = 1e-11
UNITARITY_TOL = 1e-9
TRACE_TOL = 1e-8


@dataclass(frozen=True)
class NoiseParams:
    """Amplitude-damping (T1) and pure-dephasing (T2) time scales in ns."""

    t1: float | None = None
    t2: float | None = None

    def __post_init__(self) -> None:
        if self.t1 is not None and self.t1 <= 0:
            raise ValueError("t1 must be positive")
        if self.t2 is not None and self.t2 <= 0:
            raise ValueError("t2 must be positive")

    @property
    def is_trivial(self) -> bool:
        return self.t1 is None and self.t2 is None

    def jump_operators(self, d: int) -> list[np.ndarray]:
        """Single-transmon jump operators for the enabled channels."""
        ops = []
        if self.t2 is not None:
            ops.append(dephasing_jump(self.t2, d))
        if self.t1 is not None:
            ops.extend(damping_jumps(self.t1, d))
        return ops


def dephasing_jump(t2: float, d: int) -> np.ndarray:
    """Weighted dephasing operator sqrt(2/T2) * sum_m m|m><m|.

    The m weighting makes the coherence between levels m and m' decay at rate
    (m - m')^2 / T2, so the qubit-subspace coherence time is exactly T2.
    """
    return math.sqrt(2.0 / t2) * np.diag(np.arange(d, dtype=float))


def damping_jumps(t1: float, d: int) -> list[np.ndarray]:
    """Cascade amplitude damping: |n> decays to |n-1> at rate n/T1."""
    ops = []
    for n in range(1, d):
        op = np.zeros((d, d))
        op[n - 1, n] = math.sqrt(n / t1)
        ops.append(op)
    return ops


def rwa_drive_matrix(energies: np.ndarray, drive_op: np.ndarray, drive_frequency: float) -> np.ndarray:
    """Keep only drive matrix elements that co-rotate with the carrier.

    With the carrier attached as ``exp(+i w_d t)``, element (a, b) rotates at
    ``E_a - E_b + w_d``.  Elements at least as fast as the carrier itself are
    counter-rotating remnants (including the two-photon 0-3 ladder term and
    the tiny dressing-induced raising components) and are dropped, consistent
    with the rotating-wave approximation already applied to the drive.
    """
    if drive_frequency <= 0:
        raise ValueError("drive frequency must be positive")
    delta = energies[:, None] - energies[None, :] + drive_frequency
    return np.where(np.abs(delta) < drive_frequency, drive_op, 0.0)


def _phase_columns(energies: np.ndarray, t: float) -> np.ndarray:
    return np.exp(1j * energies * t)


def simulate_pulse_unitary(
    energies: np.ndarray,
    drive_op: np.ndarray,
    pulse: PulseSpec,
    t_start: float = 0.0,
    rtol: float = SCHRODINGER_RTOL,
    atol: float = SCHRODINGER_ATOL,
) -> np.ndarray:
    """Propagator of one pulse in the interaction picture of ``energies``.

    ``t_start`` shifts the envelope while carrier and frame phases stay in
    absolute time, so two pulses integrated with matching start times share
    one phase-coherent clock.
    """
    n = len(energies)
    b = rwa_drive_matrix(energies, np.asarray(drive_op, dtype=complex), pulse.drive_frequency)
    wd = pulse.drive_frequency
    zphase = np.exp(1j * pulse.phase)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        u = y.reshape(n, n)
        w = _phase_columns(energies, t)
        m = (w[:, None] * b) * w.conj()[None, :]
        h = (0.5 * pulse.envelope(t - t_start) * zphase * np.exp(1j * wd * t)) * m
        h = h + h.conj().T
        return (-1j * (h @ u)).reshape(-1)

    sol = solve_ivp(
        rhs,
        (t_start, t_start + pulse.duration),
        np.eye(n, dtype=complex).reshape(-1),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=False,
    )
    if not sol.success:
        raise ConvergenceError(f"pulse integration failed: {sol.message}")
    u = sol.y[:, -1].reshape(n, n)
    defect = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if defect > UNITARITY_TOL:
        raise ConvergenceError(f"propagator unitarity defect {defect:.2e} exceeds {UNITARITY_TOL}")
    return u


def simulate_sequence_unitary(
    energies: np.ndarray,
    segments: list[tuple[PulseSpec, np.ndarray]],
    rtol: float = SCHRODINGER_RTOL,
    atol: float = SCHRODINGER_ATOL,
) -> np.ndarray:
    """Compose back-to-back pulses, each integrated on its own clock."""
    n = len(energies)
    u_total = np.eye(n, dtype=complex)
    for pulse, drive_op in segments:
        u = simulate_pulse_unitary(energies, drive_op, pulse, rtol=rtol, atol=atol)
        u_total = u @ u_total
    return u_total


def simulate_pulse_states(
    energies: np.ndarray,
    drive_op: np.ndarray,
    pulse: PulseSpec,
    states0: np.ndarray,
    samples: int = 60,
    t_start: float = 0.0,
    rtol: float = SCHRODINGER_RTOL,
    atol: float = SCHRODINGER_ATOL,
) -> tuple[np.ndarray, np.ndarray]:
    """Evolve state columns through one pulse, recording snapshots.

    Returns ``(times, states)`` with ``states[k]`` the (dim, n_states) array
    at ``times[k]``; times are absolute (starting at ``t_start``).
    """
    n = len(energies)
    psi = np.asarray(states0, dtype=complex).reshape(n, -1)
    n_states = psi.shape[1]
    b = rwa_drive_matrix(energies, np.asarray(drive_op, dtype=complex), pulse.drive_frequency)
    wd = pulse.drive_frequency
    zphase = np.exp(1j * pulse.phase)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        p = y.reshape(n, n_states)
        w = _phase_columns(energies, t)
        m = (w[:, None] * b) * w.conj()[None, :]
        h = (0.5 * pulse.envelope(t - t_start) * zphase * np.exp(1j * wd * t)) * m
        h = h + h.conj().T
        return (-1j * (h @ p)).reshape(-1)

    sol = solve_ivp(
        rhs,
        (t_start, t_start + pulse.duration),
        psi.reshape(-1),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=np.linspace(t_start, t_start + pulse.duration, samples),
    )
    if not sol.success:
        raise ConvergenceError(f"state integration failed: {sol.message}")
    return sol.t, sol.y.T.reshape(-1, n, n_states)


def simulate_sequence_states(
    energies: np.ndarray,
    segments: list[tuple[PulseSpec, np.ndarray]],
    states0: np.ndarray,
    samples_per_pulse: int = 60,
    rtol: float = SCHRODINGER_RTOL,
    atol: float = SCHRODINGER_ATOL,
) -> tuple[np.ndarray, np.ndarray]:
    """Evolve state columns through a pulse sequence, recording snapshots.

    The reported times are cumulative over the sequence while each pulse is
    integrated on its own clock.  Used for population traces.
    """
    n = len(energies)
    psi = np.asarray(states0, dtype=complex).reshape(n, -1)
    times: list[np.ndarray] = []
    frames: list[np.ndarray] = []
    elapsed = 0.0
    for pulse, drive_op in segments:
        t, states = simulate_pulse_states(
            energies, drive_op, pulse, psi, samples=samples_per_pulse, rtol=rtol, atol=atol
        )
        times.append(elapsed + t)
        frames.append(states)
        psi = states[-1]
        elapsed += pulse.duration
    return np.concatenate(times), np.concatenate(frames, axis=0)


def _hermitian_pair_indices(n: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(n) for i in range(j + 1)]


def simulate_pulse_channel(
    energies: np.ndarray,
    drive_op: np.ndarray,
    pulse: PulseSpec,
    jump_ops: list[np.ndarray],
    t_start: float = 0.0,
    rtol: float = LINDBLAD_RTOL,
    atol: float = LINDBLAD_ATOL,
) -> QuantumChannel:
    """Lindblad channel of one pulse, in the same interaction picture.

    The jump operators are supplied in the frame basis and acquire their
    interaction-picture phases internally.  All ``n*(n+1)/2`` upper-triangle
    basis inputs |i><j| are propagated in one batched integration; the
    remaining superoperator columns follow from Hermiticity preservation,
    ``E(X^dag) = E(X)^dag``.
    """
    n = len(energies)
    b = rwa_drive_matrix(energies, np.asarray(drive_op, dtype=complex), pulse.drive_frequency)
    wd = pulse.drive_frequency
    zphase = np.exp(1j * pulse.phase)
    jumps = [np.asarray(op, dtype=complex) for op in jump_ops]
    m0 = sum((op.conj().T @ op for op in jumps), np.zeros((n, n), dtype=complex))

    pairs = _hermitian_pair_indices(n)
    y0 = np.zeros((len(pairs), n, n), dtype=complex)
    for k, (i, j) in enumerate(pairs):
        y0[k, i, j] = 1.0

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(len(pairs), n, n)
        w = _phase_columns(energies, t)
        phase = w[:, None] * w.conj()[None, :]
        h = (0.5 * pulse.envelope(t - t_start) * zphase * np.exp(1j * wd * t)) * (phase * b)
        h = h + h.conj().T
        out = -1j * (h @ rho - rho @ h)
        if jumps:
            rho_lab = phase.conj() * rho  # rotate back to the frame basis
            gain = np.zeros_like(rho)
            for op in jumps:
                gain += op @ rho_lab @ op.conj().T
            out += phase * gain
            m_t = phase * m0
            out -= 0.5 * (m_t @ rho + rho @ m_t)
        return out.reshape(-1)

    sol = solve_ivp(
        rhs,
        (t_start, t_start + pulse.duration),
        y0.reshape(-1),
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise ConvergenceError(f"Lindblad integration failed: {sol.message}")
    y = sol.y[:, -1].reshape(len(pairs), n, n)
    superop = np.empty((n * n, n * n), dtype=complex)
    for k, (i, j) in enumerate(pairs):
        superop[:, j * n + i] = y[k].reshape(-1, order="F")
        if i != j:
            superop[:, i * n + j] = y[k].conj().T.reshape(-1, order="F")
    channel = QuantumChannel(superop=superop, dim_out=n, dim_in=n)
    if not channel.is_trace_preserving(tol=TRACE_TOL):
        raise ConvergenceError("Lindblad channel trace drift exceeds tolerance")
    return channel


def simulate_sequence_channel(
    energies: np.ndarray,
    segments: list[tuple[PulseSpec, np.ndarray]],
    jump_ops: list[np.ndarray],
    rtol: float = LINDBLAD_RTOL,
    atol: float = LINDBLAD_ATOL,
) -> QuantumChannel:
    """Compose Lindblad pulse channels back to back."""
    n = len(energies)
    channel = identity_channel(n)
    for pulse, drive_op in segments:
        step = simulate_pulse_channel(energies, drive_op, pulse, jump_ops, rtol=rtol, atol=atol)
        channel = step @ channel
    return channel


def dephasing_channel(t: float, t2: float, d: int = 4) -> QuantumChannel:
    """Free pure dephasing for time ``t``: exact diagonal channel.

    The coherence between levels m and m' decays as exp(-(m-m')^2 t/T2),
    the closed form of the weighted-dephasing dissipator.
    """
    m = np.arange(d, dtype=float)
    rates = (m[:, None] - m[None, :]) ** 2 / t2
    return QuantumChannel(np.diag(np.exp(-t * rates).reshape(-1, order="F")), d, d)


def idle_channel(t: float, noise: NoiseParams, d: int = 4) -> QuantumChannel:
    """Free evolution for time ``t`` under the configured noise."""
    if t < 0:
        raise ValueError("idle duration must be non-negative")
    if noise.is_trivial or t == 0.0:
        return identity_channel(d)
    if noise.t1 is None:
        return dephasing_channel(t, noise.t2, d)
    gen = lindblad_generator(np.zeros((d, d)), noise.jump_operators(d))
    return QuantumChannel(expm(t * gen), d, d)
