"""Native gate set for circuits over d-level qudits.

The hardware-native vocabulary consists of two-level x-rotations between
neighboring levels, virtual (frame-tracking) phase gates, level-swap
permutations, the echoed cross-resonance gate ``Ecr``, and an abstract
singly-controlled block gate used as an intermediate representation during
synthesis.

Matrix conventions
------------------
* Local gates act on a single qudit of dimension ``d``.
* Entangling gates are ``d**2 x d**2`` matrices in control-major ordering:
  basis index ``d*c + t`` where ``c`` is the level of ``op.qudits[0]`` and
  ``t`` the level of ``op.qudits[1]``.
* ``GateOp.qudits`` carries the roles: ``(control, target)`` for entangling
  gates. An ECR gate emitted with reversed roles simply lists its qudits in
  the corresponding order; its cost is identical to the forward one.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

# Gate kind tags (also used by the circuit JSON schema).
RX = "rx"
PHASE = "phase"
PERM = "perm"
ECR = "ecr"
CBLOCK = "cblock"

LOCAL_KINDS = (RX, PHASE, PERM)
ENTANGLING_KINDS = (ECR, CBLOCK)


@dataclass(frozen=True)
class GateOp:
    """One gate instruction.

    Attributes:
        kind: one of ``rx``, ``phase``, ``perm``, ``ecr``, ``cblock``.
        qudits: qudit indices the gate acts on; one entry for local gates,
            ``(control, target)`` for entangling gates.
        params: kind-specific parameters (see the constructor helpers).
    """

    kind: str
    qudits: Tuple[int, ...]
    params: Dict[str, Any] = field(default_factory=dict)

    def is_virtual(self) -> bool:
        """Virtual phases carry no physical cost."""
        return self.kind == PHASE

    def is_entangling(self) -> bool:
        return self.kind in ENTANGLING_KINDS


def rx(qudit: int, level: int, phi: float, lam: float = 0.0) -> GateOp:
    """Two-level rotation on levels ``(level, level+1)``.

    ``lam`` tilts the rotation axis in the equatorial plane:
    ``lam = 0`` is a plain x-rotation, ``lam = pi/2`` a y-rotation.
    """
    return GateOp(RX, (qudit,), {"level": level, "phi": float(phi), "lam": float(lam)})


def virtual_phase(qudit: int, level: int, phi: float) -> GateOp:
    """Phase ``e^{i phi}`` on a single level, implemented in the drive frame."""
    return GateOp(PHASE, (qudit,), {"level": level, "phi": float(phi)})


def perm(qudit: int, level: int) -> GateOp:
    """Real swap of levels ``(level, level+1)``."""
    return GateOp(PERM, (qudit,), {"level": level})


def ecr(control: int, target: int, theta: float) -> GateOp:
    """Echoed cross-resonance gate.

    Applies ``Rx01(-theta)`` to the target when the control is in level 0,
    ``Rx01(theta)`` when it is in level 1, and the identity for all higher
    control levels.  The ``direction`` entry records whether the hardware
    orientation is reversed; both directions cost the same.
    """
    direction = "forward" if control < target else "reversed"
    return GateOp(ECR, (control, target), {"theta": float(theta), "direction": direction})


def controlled_block(control: int, target: int, m: int, block: np.ndarray) -> GateOp:
    """Abstract gate applying ``block`` to the target iff the control is in ``m``."""
    return GateOp(CBLOCK, (control, target), {"m": int(m), "block": np.asarray(block, dtype=complex)})


# ---------------------------------------------------------------------------
# matrix builders


def rx_matrix(d: int, level: int, phi: float, lam: float = 0.0) -> np.ndarray:
    """Matrix of a two-level rotation embedded in a d-level system."""
    if not 0 <= level <= d - 2:
        raise ValueError(f"rx level {level} out of range for dimension {d}")
    m = np.eye(d, dtype=complex)
    c, s = np.cos(phi / 2.0), np.sin(phi / 2.0)
    m[level, level] = c
    m[level + 1, level + 1] = c
    m[level, level + 1] = -1j * np.exp(-1j * lam) * s
    m[level + 1, level] = -1j * np.exp(1j * lam) * s
    return m


def rx_pair_matrix(d: int, levels: Tuple[int, int], phi: float, lam: float = 0.0) -> np.ndarray:
    """Two-level rotation between an arbitrary (not necessarily adjacent) pair."""
    i, j = levels
    if not (0 <= i < j < d):
        raise ValueError(f"invalid level pair {levels} for dimension {d}")
    m = np.eye(d, dtype=complex)
    c, s = np.cos(phi / 2.0), np.sin(phi / 2.0)
    m[i, i] = c
    m[j, j] = c
    m[i, j] = -1j * np.exp(-1j * lam) * s
    m[j, i] = -1j * np.exp(1j * lam) * s
    return m


def ry_pair_matrix(d: int, levels: Tuple[int, int], phi: float) -> np.ndarray:
    """Two-level y-rotation between an arbitrary level pair."""
    return rx_pair_matrix(d, levels, phi, lam=np.pi / 2.0)


def rz_pair_phases(levels: Tuple[int, int], phi: float):
    """Virtual-phase realization of a two-level z-rotation.

    Returns ``[(level, phase), ...]`` such that applying those level phases
    equals ``exp(-i phi/2 sigma_z)`` on the given pair.
    """
    i, j = levels
    return [(i, -phi / 2.0), (j, phi / 2.0)]


def phase_matrix(d: int, level: int, phi: float) -> np.ndarray:
    if not 0 <= level < d:
        raise ValueError(f"phase level {level} out of range for dimension {d}")
    m = np.eye(d, dtype=complex)
    m[level, level] = np.exp(1j * phi)
    return m


def perm_matrix(d: int, level: int) -> np.ndarray:
    if not 0 <= level <= d - 2:
        raise ValueError(f"perm level {level} out of range for dimension {d}")
    m = np.eye(d, dtype=complex)
    m[level, level] = 0.0
    m[level + 1, level + 1] = 0.0
    m[level, level + 1] = 1.0
    m[level + 1, level] = 1.0
    return m


def ecr_matrix(d: int, theta: float) -> np.ndarray:
    """Control-major matrix of the echoed cross-resonance gate."""
    m = np.zeros((d * d, d * d), dtype=complex)
    blocks = [rx_matrix(d, 0, -theta), rx_matrix(d, 0, theta)]
    blocks += [np.eye(d, dtype=complex)] * (d - 2)
    for n, blk in enumerate(blocks):
        m[n * d:(n + 1) * d, n * d:(n + 1) * d] = blk
    return m


def controlled_block_matrix(d: int, m_state: int, block: np.ndarray) -> np.ndarray:
    if not 0 <= m_state < d:
        raise ValueError(f"control state {m_state} out of range for dimension {d}")
    block = np.asarray(block, dtype=complex)
    if block.shape != (d, d):
        raise ValueError(f"controlled block must be {d}x{d}, got {block.shape}")
    m = np.eye(d * d, dtype=complex)
    lo = m_state * d
    m[lo:lo + d, lo:lo + d] = block
    return m


def gate_unitary(op: GateOp, d: int) -> np.ndarray:
    """Local (d x d) or entangling (d^2 x d^2, control-major) matrix of ``op``."""
    p = op.params
    if op.kind == RX:
        return rx_matrix(d, p["level"], p["phi"], p.get("lam", 0.0))
    if op.kind == PHASE:
        return phase_matrix(d, p["level"], p["phi"])
    if op.kind == PERM:
        return perm_matrix(d, p["level"])
    if op.kind == ECR:
        return ecr_matrix(d, p["theta"])
    if op.kind == CBLOCK:
        return controlled_block_matrix(d, p["m"], p["block"])
    raise ValueError(f"unknown gate kind {op.kind!r}")


# ---------------------------------------------------------------------------
# embedding into multi-qudit registers


def _embed(mat: np.ndarray, qudits: Tuple[int, ...], n_qudits: int, d: int) -> np.ndarray:
    """Embed an operator on ``qudits`` (in listed order) into the full register."""
    for q in qudits:
        if not 0 <= q < n_qudits:
            raise ValueError(f"qudit index {q} out of range for {n_qudits} qudits")
    if len(set(qudits)) != len(qudits):
        raise ValueError(f"repeated qudit indices in {qudits}")
    others = [q for q in range(n_qudits) if q not in qudits]
    order = list(qudits) + others
    big = np.kron(mat, np.eye(d ** len(others), dtype=complex))
    if order == list(range(n_qudits)):
        return big
    tensor = big.reshape([d] * (2 * n_qudits))
    inv = np.argsort(order)
    axes = list(inv) + [n_qudits + i for i in inv]
    return tensor.transpose(axes).reshape(d ** n_qudits, d ** n_qudits)


def embed_local(u: np.ndarray, slot: int, n_qudits: int, d: int) -> np.ndarray:
    """Kronecker-embed a single-qudit operator at ``slot`` (slot 0 leftmost)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {u.shape}")
    return _embed(u, (slot,), n_qudits, d)


def embed_op(op: GateOp, n_qudits: int, d: int) -> np.ndarray:
    """Full-register matrix of a gate instruction."""
    return _embed(gate_unitary(op, d), op.qudits, n_qudits, d)


def is_unitary(u: np.ndarray, tol: float = 1e-8) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= tol
