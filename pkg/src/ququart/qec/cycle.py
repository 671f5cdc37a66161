"""One error-correction cycle of the single-ququart dephasing code.

A cycle stores a logical qubit in the codeword space of one data ququart,
lets it dephase freely, then runs the correction block::

    decode -> join ancilla |1> -> ECR(pi) -> measure ancilla ->
    (no error: encode) / (error: recover)

The ECR flips the ancilla to |0> exactly when the data sits in its 0/1
(no-error) subspace, so a projective ancilla measurement steers which
re-encoding unitary is applied.  Gates come from a ``CycleGates`` provider:
either ideal instantaneous unitaries or pulse-level channels of the transmon
simulation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq, curve_fit

from ..channels import (
    QuantumChannel,
    corner_block,
    embed_corner,
    embed_with_state,
    ptrace_second,
    sandwich_channel,
    unitary_channel,
)
from ..fidelity import average_gate_fidelity_channel
from ..gates import ecr_matrix
from ..transmon.calibrate import phase_correction_matrix
from ..transmon.ecr import (
    EcrCalibration,
    calibrate_ecr,
    cached_ecr_channel,
    simulate_ecr_unitary,
)
from ..transmon.evolve import NoiseParams, idle_channel
from ..transmon.model import TransmonPairModel
from .code import ENCODE_STEPS, decoding_unitary, encoding_unitary, recovery_unitary
from .gates import realize_code_gates, sequence_duration

T_MEAS_DEFAULT = 675.0  # ns

D = 4


@dataclass(frozen=True)
class CycleGates:
    """Channel realizations of the gates used by one correction cycle.

    ``encode``/``decode``/``recover`` act on the data ququart; ``ecr`` acts
    on data (x) ancilla with the data as the control (first) factor.  The
    durations feed the wall-clock accounting of repeated cycles.
    """

    encode: QuantumChannel
    decode: QuantumChannel
    recover: QuantumChannel
    ecr: QuantumChannel
    gate_duration: float
    ecr_duration: float
    t_meas: float

    @property
    def overhead(self) -> float:
        """Wall-clock time of one correction block (everything but the wait)."""
        return 2.0 * self.gate_duration + self.ecr_duration + self.t_meas


def ideal_gates() -> CycleGates:
    """Instantaneous, error-free gates: the code-limited reference."""
    return CycleGates(
        encode=unitary_channel(encoding_unitary()),
        decode=unitary_channel(decoding_unitary()),
        recover=unitary_channel(recovery_unitary()),
        ecr=unitary_channel(ecr_matrix(D, np.pi)),
        gate_duration=0.0,
        ecr_duration=0.0,
        t_meas=0.0,
    )


def pulse_level_gates(
    model: TransmonPairModel,
    noise: NoiseParams,
    t_meas: float = T_MEAS_DEFAULT,
    cal: EcrCalibration | None = None,
) -> CycleGates:
    """Gates realized through the transmon pulse simulation.

    Single-qudit gates are simulated on the data transmon (the pair's
    control); the ECR channel is the cached pair simulation with its virtual
    phase corrections folded in.
    """
    if cal is None:
        cal = calibrate_ecr(model)
    pulsed = realize_code_gates(model.control, noise)
    ecr_channel = cached_ecr_channel(model, cal, noise)
    phases = simulate_ecr_unitary(model, cal).local_phases
    correction = phase_correction_matrix(phases.control_phases, phases.target_phases)
    return CycleGates(
        encode=pulsed.encode.channel,
        decode=pulsed.decode.channel,
        recover=pulsed.recover.channel,
        ecr=unitary_channel(correction) @ ecr_channel,
        gate_duration=sequence_duration(ENCODE_STEPS),
        ecr_duration=cal.duration,
        t_meas=t_meas,
    )


def correction_channel(gates: CycleGates, noise: NoiseParams) -> QuantumChannel:
    """The measurement-and-feedback block as one data-ququart channel.

    The ancilla is prepared in |1>, entangled by the ECR, and projectively
    measured; the data idles under its noise for the measurement duration.
    Both branches are summed into a single deterministic channel.  Flipping
    the ancilla leaves a data-conditional phase (+i on |0>, -i on |1>), an
    effective Z on the data qubit that is undone virtually before
    re-encoding.
    """
    join = embed_with_state(np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex), D)
    ancilla_eye = np.eye(D, dtype=complex)
    project_keep = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    trace_anc = ptrace_second(D, D)
    wait = idle_channel(gates.t_meas, noise, D)
    unphase = unitary_channel(np.diag([1.0, -1.0, 1.0, 1.0]).astype(complex))

    branches = np.zeros((D * D, D * D), dtype=complex)
    for projector, regate in (
        (project_keep, gates.encode @ unphase),
        (ancilla_eye - project_keep, gates.recover),
    ):
        select = sandwich_channel(np.kron(ancilla_eye, projector))
        branch = regate @ wait @ trace_anc @ select @ gates.ecr @ join
        branches = branches + branch.superop
    return QuantumChannel(branches, D, D) @ gates.decode


def correction_cycle(
    gates: CycleGates, noise: NoiseParams, wait_time: float
) -> QuantumChannel:
    """Free dephasing for ``wait_time`` followed by the correction block."""
    return correction_channel(gates, noise) @ idle_channel(wait_time, noise, D)


def logical_channel(gates: CycleGates, cycle: QuantumChannel) -> QuantumChannel:
    """Qubit-in/qubit-out channel of encode -> cycle(s) -> decode."""
    prep = gates.encode @ embed_corner(2, D)
    read = corner_block(D, 2) @ gates.decode
    return read @ cycle @ prep


def cycle_fidelity(gates: CycleGates, cycle: QuantumChannel) -> float:
    """Average gate fidelity of the stored logical qubit against identity."""
    return average_gate_fidelity_channel(logical_channel(gates, cycle), np.eye(2))


def bare_fidelity(t: float, noise: NoiseParams) -> float:
    """Average gate fidelity of an unencoded 0-1 qubit idling for ``t``."""
    return average_gate_fidelity_channel(idle_channel(t, noise, 2), np.eye(2))


def cycle_vs_bare(
    gates: CycleGates, noise: NoiseParams, wait_time: float
) -> tuple[float, float]:
    """(corrected, bare) fidelities over one cycle's full wall-clock time."""
    corrected = cycle_fidelity(gates, correction_cycle(gates, noise, wait_time))
    return corrected, bare_fidelity(wait_time + gates.overhead, noise)


def repeated_cycle_fidelities(
    gates: CycleGates,
    noise: NoiseParams,
    wait_time: float,
    n_cycles: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Logical fidelity after 1..n_cycles cycles and the elapsed wall times."""
    cycle = correction_cycle(gates, noise, wait_time)
    period = wait_time + gates.overhead
    times = np.arange(1, n_cycles + 1) * period
    fids = np.empty(n_cycles)
    accumulated = cycle
    for k in range(n_cycles):
        fids[k] = cycle_fidelity(gates, accumulated)
        if k + 1 < n_cycles:
            accumulated = cycle @ accumulated
    return times, fids


@dataclass(frozen=True)
class FidelityFit:
    t2_eff: float
    f_inf: float


def fit_fidelity_decay(times: np.ndarray, fidelities: np.ndarray) -> FidelityFit:
    """Least-squares fit of F(t) = (1 - F_inf) e^(-t/T2eff) + F_inf."""
    times = np.asarray(times, dtype=float)
    fidelities = np.asarray(fidelities, dtype=float)

    def decay(t, t2_eff, f_inf):
        return (1.0 - f_inf) * np.exp(-t / t2_eff) + f_inf

    scale = times[-1] if times[-1] > 0 else 1.0
    popt, _ = curve_fit(
        decay,
        times,
        fidelities,
        p0=(scale, 2.0 / 3.0),
        bounds=([1e-9, 0.25], [np.inf, 1.0]),
        maxfev=10000,
    )
    return FidelityFit(t2_eff=float(popt[0]), f_inf=float(popt[1]))


def error_reduction(
    gates: CycleGates, noise: NoiseParams, wait_time: float
) -> float:
    """Fractional infidelity reduction of one cycle versus the bare qubit."""
    corrected, bare = cycle_vs_bare(gates, noise, wait_time)
    return 1.0 - (1.0 - corrected) / (1.0 - bare)


def interpolate_crossing(x: np.ndarray, y: np.ndarray) -> float:
    """First zero crossing of sampled y(x), by local linear interpolation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    signs = np.sign(y)
    for k in range(len(x) - 1):
        if signs[k] == 0.0:
            return float(x[k])
        if signs[k] * signs[k + 1] < 0:
            return float(brentq(lambda v: np.interp(v, x, y), x[k], x[k + 1]))
    raise ValueError("no sign change in sampled data")


@dataclass(frozen=True)
class T1SweepResult:
    ratios: np.ndarray
    corrected: np.ndarray
    bare: np.ndarray
    break_even_ratio: float


def t1_sweep(
    gates_for_noise: Callable[[NoiseParams], CycleGates],
    t2: float,
    ratios: np.ndarray,
    wait_fraction: float = 0.12,
) -> T1SweepResult:
    """Corrected-vs-bare comparison as T1 shrinks toward T2.

    For each ratio r the noise is (T1 = r*T2, T2) and the comparison runs a
    single cycle with wait time ``wait_fraction * T2``; the break-even ratio
    is where the corrected and bare fidelities cross.
    """
    ratios = np.asarray(ratios, dtype=float)
    corrected = np.empty(len(ratios))
    bare = np.empty(len(ratios))
    for k, ratio in enumerate(ratios):
        noise = NoiseParams(t1=ratio * t2, t2=t2)
        gates = gates_for_noise(noise)
        corrected[k], bare[k] = cycle_vs_bare(gates, noise, wait_fraction * t2)
    crossing = interpolate_crossing(ratios, corrected - bare)
    return T1SweepResult(
        ratios=ratios, corrected=corrected, bare=bare, break_even_ratio=crossing
    )
