"""Full 16x16 unitary synthesis via recursive cosine-sine decomposition.

A generic two-ququart unitary factors as

    U = BD_a . [CS_0 + CS_1] . BD_b . CS_big . BD_c . [CS_3 + CS_4] . BD_d

where each ``BD`` layer is block diagonal over the four control levels
(16 singly-controlled 4x4 unitaries in total, lowered with
``decompose_cm_u``) and each ``CS`` layer is a multiplexed y-rotation on the
control conditioned on the target level, lowered with reversed-role ECR
cores.  The outer CS layers rotate control pairs (0,1) and (2,3); the middle
layer rotates (0,2) and (1,3).
"""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import cossin

from . import gates
from .circuits import QuditCircuit, ValidationError
from .controlled import decompose_cm_u, control_chain_levels
from .gates import GateOp

ANGLE_TOL = 1e-12

# shuttle chains (time order of swap levels) mapping a level pair onto (0,1)
_PAIR_CHAINS = {
    (0, 1): [],
    (0, 2): [1],
    (1, 3): [0, 2, 1],
    (2, 3): [1, 2, 0, 1],
}


@dataclass(frozen=True)
class CsdFactors:
    """One cosine-sine step: ``U = [[u,0],[0,v]] . [[C,-S],[S,C]] . [[x,0],[0,y]]``."""

    u: np.ndarray
    v: np.ndarray
    x: np.ndarray
    y: np.ndarray
    thetas: np.ndarray

    def matrix(self) -> np.ndarray:
        k = self.thetas.size
        c = np.diag(np.cos(self.thetas))
        s = np.diag(np.sin(self.thetas))
        cs = np.block([[c, -s], [s, c]])
        left = np.block(
            [[self.u, np.zeros((k, k))], [np.zeros((k, k)), self.v]]
        ).astype(complex)
        right = np.block(
            [[self.x, np.zeros((k, k))], [np.zeros((k, k)), self.y]]
        ).astype(complex)
        return left @ cs @ right


def csd_step(u: np.ndarray, tol: float = 1e-8) -> CsdFactors:
    """Balanced cosine-sine decomposition of an even-dimensional unitary."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if u.ndim != 2 or u.shape[0] != u.shape[1] or n % 2 != 0:
        raise ValidationError(f"expected an even-dimensional square matrix, got {u.shape}")
    if np.abs(u.conj().T @ u - np.eye(n)).max() > tol:
        raise ValidationError("matrix is not unitary within tolerance")
    k = n // 2
    (u1, u2), theta, (v1h, v2h) = cossin(u, p=k, q=k, separate=True)
    return CsdFactors(u=u1, v=u2, x=v1h, y=v2h, thetas=np.asarray(theta, dtype=float))


def controlled_multiplexed_ry(
    thetas: Sequence[float],
    pair: Tuple[int, int],
    d: int = 4,
) -> QuditCircuit:
    """Multiplexed y-rotation of a control-level pair, selected by the target.

    Implements ``sum_n Ry^{pair}(thetas[n]) (x) |n><n|`` exactly: the rotated
    qudit is the circuit's first qudit, the selecting qudit the second, so
    the emitted ECR gates run in the reversed orientation (qudits ``(1, 0)``).

    The y-axis is obtained from x-rotation cores by conjugating with virtual
    phases hoisted once per family; the pair shuttle onto levels (0,1) is
    likewise hoisted.  Rotations with ``|theta| < 1e-12`` are elided.
    """
    thetas = [float(t) for t in thetas]
    if len(thetas) != d:
        raise ValidationError(f"expected {d} angles, got {len(thetas)}")
    pair = (int(pair[0]), int(pair[1]))
    if pair not in _PAIR_CHAINS:
        raise ValidationError(f"unsupported rotation pair {pair}")
    active = [n for n in range(d) if abs(thetas[n]) > ANGLE_TOL]
    if not active:
        return QuditCircuit(d=d, n_qudits=2, ops=())

    i, j = pair
    quarter = math.pi / 4.0
    ops: List[GateOp] = []
    # Ry = Rz(pi/2) Rx Rz(-pi/2) on the rotated pair, hoisted around everything
    ops.append(gates.virtual_phase(0, i, quarter))
    ops.append(gates.virtual_phase(0, j, -quarter))
    chain = _PAIR_CHAINS[pair]
    ops += [gates.perm(0, lvl) for lvl in chain]
    for n in active:
        theta = thetas[n]
        sel_chain = control_chain_levels(n)
        ops += [gates.perm(1, lvl) for lvl in sel_chain]
        bracket = [gates.ecr(1, 0, -theta / d)]
        bracket += [gates.perm(1, lvl) for lvl in range(d - 2, 0, -1)]
        ops += bracket * (d - 1)
        ops.append(gates.rx(0, 0, theta / d))
        ops += [gates.perm(1, lvl) for lvl in reversed(sel_chain)]
    ops += [gates.perm(0, lvl) for lvl in reversed(chain)]
    ops.append(gates.virtual_phase(0, i, -quarter))
    ops.append(gates.virtual_phase(0, j, quarter))
    return QuditCircuit(d=d, n_qudits=2, ops=tuple(ops))


def _bd_layer(blocks: Sequence[np.ndarray], d: int) -> QuditCircuit:
    """Lower a block-diagonal layer as a product of C^m[U_m] circuits."""
    circuit = QuditCircuit(d=d, n_qudits=2, ops=())
    for m, block in enumerate(blocks):
        circuit = circuit + decompose_cm_u(m, block, d=d)
    return circuit


def csd_synthesize(u: np.ndarray, d: int = 4, tol: float = 1e-8) -> QuditCircuit:
    """Synthesize an arbitrary two-ququart unitary over the native gate set.

    Three cosine-sine splits (one at 8|8, then 4|4 splits of each half)
    produce four block-diagonal layers and three multiplexed-rotation
    layers; degenerate layers (zero angles) are elided, so structured
    inputs such as block-diagonal unitaries come out shorter.
    """
    u = np.asarray(u, dtype=complex)
    dim = d * d
    if u.shape != (dim, dim):
        raise ValidationError(f"expected a {dim}x{dim} matrix, got {u.shape}")
    if np.abs(u.conj().T @ u - np.eye(dim)).max() > tol:
        raise ValidationError("matrix is not unitary within tolerance")

    half = dim // 2
    quartet = half // 2

    big = csd_step(u)
    left_a = csd_step(big.u)
    left_b = csd_step(big.v)
    right_a = csd_step(big.x)
    right_b = csd_step(big.y)

    # time order: rightmost factor of the matrix product comes first
    circuit = QuditCircuit(d=d, n_qudits=2, ops=())
    circuit = circuit + _bd_layer(
        [right_a.x, right_a.y, right_b.x, right_b.y], d
    )
    circuit = circuit + controlled_multiplexed_ry(2.0 * right_a.thetas, (0, 1), d)
    circuit = circuit + controlled_multiplexed_ry(2.0 * right_b.thetas, (2, 3), d)
    circuit = circuit + _bd_layer(
        [right_a.u, right_a.v, right_b.u, right_b.v], d
    )
    circuit = circuit + controlled_multiplexed_ry(2.0 * big.thetas[quartet:], (1, 3), d)
    circuit = circuit + controlled_multiplexed_ry(2.0 * big.thetas[:quartet], (0, 2), d)
    circuit = circuit + _bd_layer(
        [left_a.x, left_a.y, left_b.x, left_b.y], d
    )
    circuit = circuit + controlled_multiplexed_ry(2.0 * left_a.thetas, (0, 1), d)
    circuit = circuit + controlled_multiplexed_ry(2.0 * left_b.thetas, (2, 3), d)
    circuit = circuit + _bd_layer(
        [left_a.u, left_a.v, left_b.u, left_b.v], d
    )
    return circuit
