"""Average gate fidelities for unitaries and channels.

Both metrics quotient out the global phase.  The unitary-vs-unitary form is

    F_avg = (D * F_pro + 1) / (D + 1),   F_pro = |Tr(U^dag V)|^2 / D^2,

and the channel form replaces ``F_pro`` by the entanglement fidelity of the
channel against the target unitary.
"""

import numpy as np

from .channels import QuantumChannel, unvec


def process_fidelity_unitary(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"incompatible shapes {u.shape} vs {v.shape}")
    dim = u.shape[0]
    return float(np.abs(np.trace(u.conj().T @ v)) ** 2) / dim ** 2


def average_gate_fidelity_unitary(u: np.ndarray, v: np.ndarray) -> float:
    dim = np.asarray(u).shape[0]
    return (dim * process_fidelity_unitary(u, v) + 1.0) / (dim + 1.0)


def entanglement_fidelity(channel: QuantumChannel, target: np.ndarray) -> float:
    """F_e = (1/D^2) sum_ij <i| U^dag E(|i><j|) U |j>.

    Valid for trace-decreasing maps too, where it additionally penalizes
    leakage out of the retained subspace.
    """
    target = np.asarray(target, dtype=complex)
    dim = target.shape[0]
    if channel.dim_in != dim or channel.dim_out != dim:
        raise ValueError("channel and target dimensions differ")
    total = 0.0 + 0.0j
    for j in range(dim):
        for i in range(dim):
            out = unvec(channel.superop[:, j * dim + i], dim)
            total += (target.conj().T @ out @ target)[i, j]
    return float(total.real) / dim ** 2


def average_gate_fidelity_channel(channel: QuantumChannel, target: np.ndarray) -> float:
    dim = np.asarray(target).shape[0]
    return (dim * entanglement_fidelity(channel, target) + 1.0) / (dim + 1.0)


def state_fidelity(psi: np.ndarray, rho: np.ndarray) -> float:
    """Overlap <psi|rho|psi> of a pure state with a density matrix."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(psi.conj() @ rho @ psi))
