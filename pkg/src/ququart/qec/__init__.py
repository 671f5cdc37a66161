"""Single-ququart dephasing code: encoding, correction cycle, lifetime fits."""

from ..transmon.evolve import dephasing_channel, idle_channel
from .code import (
    LOGICAL_ONE,
    LOGICAL_ZERO,
    decoding_unitary,
    encoding_unitary,
    kl_defect,
    recovery_unitary,
)
from .cycle import (
    CycleGates,
    FidelityFit,
    T1SweepResult,
    bare_fidelity,
    correction_channel,
    correction_cycle,
    cycle_fidelity,
    cycle_vs_bare,
    error_reduction,
    fit_fidelity_decay,
    ideal_gates,
    interpolate_crossing,
    pulse_level_gates,
    repeated_cycle_fidelities,
    t1_sweep,
)

__all__ = [
    "LOGICAL_ONE",
    "LOGICAL_ZERO",
    "CycleGates",
    "FidelityFit",
    "T1SweepResult",
    "bare_fidelity",
    "correction_channel",
    "correction_cycle",
    "cycle_fidelity",
    "cycle_vs_bare",
    "decoding_unitary",
    "dephasing_channel",
    "encoding_unitary",
    "error_reduction",
    "fit_fidelity_decay",
    "ideal_gates",
    "idle_channel",
    "interpolate_crossing",
    "kl_defect",
    "pulse_level_gates",
    "recovery_unitary",
    "repeated_cycle_fidelities",
    "t1_sweep",
]
