"""Ququart circuit synthesis and two-transmon pulse simulation toolkit."""

from .circuits import ConvergenceError, QuditCircuit, ValidationError, circuit_unitary
from .gates import GateOp, controlled_block, ecr, gate_unitary, perm, rx, virtual_phase

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "GateOp",
    "QuditCircuit",
    "ValidationError",
    "__version__",
    "circuit_unitary",
    "controlled_block",
    "ecr",
    "gate_unitary",
    "perm",
    "rx",
    "virtual_phase",
]
