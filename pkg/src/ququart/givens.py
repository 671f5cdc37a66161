"""Exact single-qudit synthesis into neighbor-level rotations.

Any d x d unitary factors into at most d(d-1)/2 two-level rotations between
neighboring levels plus a diagonal of virtual phases.  The construction
eliminates lower-triangular entries column by column with Givens-style
rotations; the leftover diagonal is returned as virtual phase gates and a
single residual global phase.
"""

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from . import gates
from .circuits import ValidationError
from .gates import GateOp

ELIDE_TOL = 1e-12


@dataclass(frozen=True)
class LocalDecomposition:
    """Synthesized local gate sequence (time order) and global phase."""

    d: int
    qudit: int
    ops: Tuple[GateOp, ...]
    residual_phase: float

    def matrix(self) -> np.ndarray:
        u = np.eye(self.d, dtype=complex) * np.exp(1j * self.residual_phase)
        for op in self.ops:
            u = gates.gate_unitary(op, self.d) @ u
        return u


def _elimination_angles(x: complex, y: complex) -> Tuple[float, float]:
    """Angles (phi, lam) of the rotation zeroing ``y`` against pivot ``x``."""
    if abs(x) < ELIDE_TOL:
        return math.pi, 0.0
    phi = 2.0 * math.atan2(abs(y), abs(x))
    lam = float(np.angle(y) - np.angle(x)) - math.pi / 2.0
    return phi, lam


def givens_synthesize(u: np.ndarray, qudit: int = 0, tol: float = 1e-8) -> LocalDecomposition:
    """Factor a unitary into neighbor-level rotations plus virtual phases.

    Args:
        u: the d x d unitary to synthesize.
        qudit: qudit index stamped on the emitted ops.
        tol: maximum allowed deviation from unitarity.

    Returns:
        A ``LocalDecomposition`` whose ops (applied in order, together with
        the residual global phase) reproduce ``u`` exactly up to rounding.

    Raises:
        ValidationError: if ``u`` is not unitary within ``tol``.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {u.shape}")
    d = u.shape[0]
    if np.abs(u.conj().T @ u - np.eye(d)).max() > tol:
        raise ValidationError("matrix is not unitary within tolerance")

    work = u.copy()
    eliminations: List[Tuple[int, float, float]] = []  # (level, phi, lam)
    for col in range(d - 1):
        for row in range(d - 1, col, -1):
            y = work[row, col]
            if abs(y) < ELIDE_TOL:
                continue
            x = work[row - 1, col]
            phi, lam = _elimination_angles(x, y)
            g = gates.rx_matrix(d, row - 1, phi, lam)
            work = g @ work
            eliminations.append((row - 1, phi, lam))

    # work is now diagonal with unit-modulus entries
    thetas = np.angle(np.diag(work))
    ops: List[GateOp] = []
    residual = float(thetas[0])
    for level in range(1, d):
        delta = float(thetas[level] - thetas[0])
        if abs(np.exp(1j * delta) - 1.0) > ELIDE_TOL:
            ops.append(gates.virtual_phase(qudit, level, delta))
    # U = G1^dag ... Gk^dag D, so the adjoints run in reverse elimination order
    for level, phi, lam in reversed(eliminations):
        if abs(phi) < ELIDE_TOL:
            continue
        ops.append(gates.rx(qudit, level, -phi, lam))
    return LocalDecomposition(d=d, qudit=qudit, ops=tuple(ops), residual_phase=residual)


def sqrtx_rewrite(level: int, phi: float, lam: float, qudit: int = 0) -> List[GateOp]:
    """Rewrite an arbitrary two-level rotation over two 90-degree x-pulses.

    Returns a sequence (time order) of virtual phases and two ``rx(pi/2)``
    ops whose product equals ``rx(level, phi, lam)`` up to virtual phases
    already included, exactly.
    """
    # Rx(phi, lam) = e^{i pi} Rz(pi/2 + lam) X90 Rz(pi + phi) X90 Rz(pi/2 - lam)
    # where the phase factor lives on the two active levels only.
    i, j = level, level + 1
    half = math.pi / 2.0

    def rz(angle: float) -> List[GateOp]:
        return [
            gates.virtual_phase(qudit, i, -angle / 2.0),
            gates.virtual_phase(qudit, j, angle / 2.0),
        ]

    seq: List[GateOp] = []
    seq += rz(half - lam)
    seq.append(gates.rx(qudit, level, half))
    seq += rz(math.pi + phi)
    seq.append(gates.rx(qudit, level, half))
    seq += rz(half + lam)
    seq.append(gates.virtual_phase(qudit, i, math.pi))
    seq.append(gates.virtual_phase(qudit, j, math.pi))
    return seq


def _sqrtx_cost_of_angle(phi: float, tol: float = 1e-9) -> int:
    r = math.fmod(phi, 2.0 * math.pi)
    if r < 0:
        r += 2.0 * math.pi
    if min(r, 2.0 * math.pi - r) < tol:
        return 0
    if abs(r - math.pi / 2.0) < tol or abs(r - 3.0 * math.pi / 2.0) < tol:
        return 1
    return 2


def rx_to_sqrtx_count(ops) -> int:
    """Count 90-degree x-pulses needed to play a local gate sequence.

    Virtual phases are free; a rotation costs 0, 1 or 2 pulses depending on
    its angle; a level swap costs 2 (it is an x-pulse of angle pi plus
    virtual phases).  Entangling gates are out of domain.
    """
    total = 0
    for op in ops:
        if op.is_entangling():
            raise ValidationError("sqrt-x accounting is defined for local ops only")
        if op.kind == gates.PHASE:
            continue
        if op.kind == gates.PERM:
            total += 2
        elif op.kind == gates.RX:
            total += _sqrtx_cost_of_angle(op.params["phi"])
        else:
            raise ValidationError(f"unknown local op kind {op.kind!r}")
    return total
