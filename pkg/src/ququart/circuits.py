"""Qudit circuits: ordered gate lists with brute-force matrix evaluation.

The ``ops`` list is in time order: ``ops[0]`` acts first, so the circuit
matrix is ``U = M[-1] @ ... @ M[0]``.
"""

import json
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import gates
from .gates import GateOp


class ValidationError(ValueError):
    """User-facing input validation failure (CLI exit code 2)."""


class ConvergenceError(RuntimeError):
    """Numerical procedure failed to converge (CLI exit code 3)."""


@dataclass(frozen=True)
class QuditCircuit:
    """A gate sequence on ``n_qudits`` qudits of dimension ``d``."""

    d: int
    n_qudits: int
    ops: Tuple[GateOp, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            for q in op.qudits:
                if not 0 <= q < self.n_qudits:
                    raise ValidationError(
                        f"op {op.kind} addresses qudit {q} but the circuit has "
                        f"{self.n_qudits} qudits"
                    )

    def __len__(self) -> int:
        return len(self.ops)

    def __add__(self, other: "QuditCircuit") -> "QuditCircuit":
        if (self.d, self.n_qudits) != (other.d, other.n_qudits):
            raise ValidationError("cannot concatenate circuits of different shape")
        return QuditCircuit(self.d, self.n_qudits, self.ops + other.ops)

    def extended(self, more: Iterable[GateOp]) -> "QuditCircuit":
        return QuditCircuit(self.d, self.n_qudits, self.ops + tuple(more))

    def phase_frames(self) -> np.ndarray:
        """Accumulated virtual phase per (qudit, level), shape (n_qudits, d)."""
        frames = np.zeros((self.n_qudits, self.d))
        for op in self.ops:
            if op.kind == gates.PHASE:
                frames[op.qudits[0], op.params["level"]] += op.params["phi"]
        return frames

    def unitary(self) -> np.ndarray:
        return circuit_unitary(self)


def circuit_unitary(circuit: QuditCircuit) -> np.ndarray:
    """Dense matrix of the whole circuit (ops[0] applied first)."""
    dim = circuit.d ** circuit.n_qudits
    u = np.eye(dim, dtype=complex)
    for op in circuit.ops:
        u = gates.embed_op(op, circuit.n_qudits, circuit.d) @ u
    return u


# ---------------------------------------------------------------------------
# JSON serialization
#
# Circuit files: {"d": int, "n_qudits": int, "ops": [{"kind", "qudits",
# "params"}, ...]}.  Complex matrices (including controlled-block payloads)
# are arrays of arrays of {"re": float, "im": float}.


def matrix_to_json(m: np.ndarray) -> List[List[dict]]:
    m = np.asarray(m, dtype=complex)
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in m]


def matrix_from_json(data: Sequence[Sequence[dict]]) -> np.ndarray:
    try:
        return np.array([[complex(cell["re"], cell["im"]) for cell in row] for row in data])
    except (TypeError, KeyError) as exc:
        raise ValidationError(f"malformed complex matrix payload: {exc}") from exc


def _op_to_json(op: GateOp) -> dict:
    params = dict(op.params)
    if op.kind == gates.CBLOCK:
        params["block"] = matrix_to_json(params["block"])
    return {"kind": op.kind, "qudits": list(op.qudits), "params": params}


def _op_from_json(data: dict) -> GateOp:
    try:
        kind = data["kind"]
        qudits = tuple(int(q) for q in data["qudits"])
        params = dict(data["params"])
    except (TypeError, KeyError) as exc:
        raise ValidationError(f"malformed op entry: {exc}") from exc
    if kind not in gates.LOCAL_KINDS + gates.ENTANGLING_KINDS:
        raise ValidationError(f"unknown gate kind {kind!r}")
    if kind == gates.CBLOCK:
        params["block"] = matrix_from_json(params["block"])
    return GateOp(kind, qudits, params)


def circuit_to_json(circuit: QuditCircuit) -> dict:
    return {
        "d": circuit.d,
        "n_qudits": circuit.n_qudits,
        "ops": [_op_to_json(op) for op in circuit.ops],
    }


def circuit_from_json(data: dict) -> QuditCircuit:
    try:
        d = int(data["d"])
        n_qudits = int(data["n_qudits"])
        ops = data["ops"]
    except (TypeError, KeyError) as exc:
        raise ValidationError(f"malformed circuit payload: {exc}") from exc
    return QuditCircuit(d, n_qudits, tuple(_op_from_json(o) for o in ops))


def dumps_circuit(circuit: QuditCircuit) -> str:
    return json.dumps(circuit_to_json(circuit), indent=1)


def loads_circuit(text: str) -> QuditCircuit:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"circuit file is not valid JSON: {exc}") from exc
    return circuit_from_json(data)
