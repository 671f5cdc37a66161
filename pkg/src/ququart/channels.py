"""Quantum channels as column-stacking superoperators.

Vectorization convention: ``vec(X)`` stacks columns, so
``vec(A X B) = (B.T kron A) vec(X)``.  A channel from a ``din``-dimensional
system to a ``dout``-dimensional one is a ``dout**2 x din**2`` matrix acting
on vectorized density matrices.
"""

from dataclasses import dataclass

import numpy as np


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(dim, dim, order="F")


@dataclass(frozen=True)
class QuantumChannel:
    """Linear map on density matrices, stored as a superoperator matrix."""

    superop: np.ndarray
    dim_out: int
    dim_in: int

    def __post_init__(self):
        s = np.asarray(self.superop, dtype=complex)
        if s.shape != (self.dim_out ** 2, self.dim_in ** 2):
            raise ValueError(
                f"superoperator shape {s.shape} does not match dims "
                f"({self.dim_out}, {self.dim_in})"
            )
        object.__setattr__(self, "superop", s)

    def __matmul__(self, other: "QuantumChannel") -> "QuantumChannel":
        """Composition: ``(self @ other)(rho) = self(other(rho))``."""
        if other.dim_out != self.dim_in:
            raise ValueError("channel dimensions do not compose")
        return QuantumChannel(self.superop @ other.superop, self.dim_out, other.dim_in)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.superop @ vec(rho), self.dim_out)

    def is_trace_preserving(self, tol: float = 1e-10) -> bool:
        """The adjoint map must send the identity to the identity."""
        ident = np.eye(self.dim_out, dtype=complex)
        back = self.superop.conj().T @ vec(ident)
        return np.abs(unvec(back, self.dim_in) - np.eye(self.dim_in)).max() <= tol


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel(np.eye(dim * dim, dtype=complex), dim, dim)


def unitary_channel(u: np.ndarray) -> QuantumChannel:
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    return QuantumChannel(np.kron(u.conj(), u), dim, dim)


def kraus_channel(ops, dim_out=None, dim_in=None) -> QuantumChannel:
    ops = [np.asarray(k, dtype=complex) for k in ops]
    dim_out = dim_out or ops[0].shape[0]
    dim_in = dim_in or ops[0].shape[1]
    s = sum(np.kron(k.conj(), k) for k in ops)
    return QuantumChannel(s, dim_out, dim_in)


def lindblad_generator(h: np.ndarray, jump_ops) -> np.ndarray:
    """Superoperator generator L with ``drho/dt = unvec(L vec(rho))``.

    ``h`` is the Hamiltonian; each jump operator ``J`` enters as the standard
    dissipator ``J rho J^dag - (J^dag J rho + rho J^dag J)/2``.
    """
    h = np.asarray(h, dtype=complex)
    dim = h.shape[0]
    ident = np.eye(dim, dtype=complex)
    gen = -1j * (np.kron(ident, h) - np.kron(h.T, ident))
    for j in jump_ops:
        j = np.asarray(j, dtype=complex)
        jj = j.conj().T @ j
        gen += np.kron(j.conj(), j)
        gen -= 0.5 * (np.kron(ident, jj) + np.kron(jj.T, ident))
    return gen


def tensor_channel(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """Channel acting as ``a`` on the first factor and ``b`` on the second.

    Column-stacking vec indices interleave the subsystem indices, so the
    plain Kronecker product of the superoperators must be re-ordered.
    """
    sa = a.superop.reshape(a.dim_out, a.dim_out, a.dim_in, a.dim_in)
    sb = b.superop.reshape(b.dim_out, b.dim_out, b.dim_in, b.dim_in)
    # indices: (col_out, row_out, col_in, row_in) per factor
    s = np.einsum("abcd,efgh->aebfcgdh", sa, sb)
    dim_out = a.dim_out * b.dim_out
    dim_in = a.dim_in * b.dim_in
    return QuantumChannel(s.reshape(dim_out ** 2, dim_in ** 2), dim_out, dim_in)


def embed_with_state(sigma: np.ndarray, dim_sys: int) -> QuantumChannel:
    """Channel ``rho -> rho (x) sigma`` appending a fixed ancilla state."""
    sigma = np.asarray(sigma, dtype=complex)
    dim_anc = sigma.shape[0]
    dim_out = dim_sys * dim_anc
    s = np.zeros((dim_out ** 2, dim_sys ** 2), dtype=complex)
    for j in range(dim_sys):
        for i in range(dim_sys):
            basis = np.zeros((dim_sys, dim_sys), dtype=complex)
            basis[i, j] = 1.0
            s[:, j * dim_sys + i] = vec(np.kron(basis, sigma))
    return QuantumChannel(s, dim_out, dim_sys)


def ptrace_second(dim_sys: int, dim_anc: int) -> QuantumChannel:
    """Channel tracing out the second tensor factor."""
    dim_full = dim_sys * dim_anc
    s = np.zeros((dim_sys ** 2, dim_full ** 2), dtype=complex)
    for cj in range(dim_full):
        for ci in range(dim_full):
            i_sys, i_anc = divmod(ci, dim_anc)
            j_sys, j_anc = divmod(cj, dim_anc)
            if i_anc == j_anc:
                s[j_sys * dim_sys + i_sys, cj * dim_full + ci] = 1.0
    return QuantumChannel(s, dim_sys, dim_full)


def sandwich_channel(a: np.ndarray, dim_out=None, dim_in=None) -> QuantumChannel:
    """Linear map ``rho -> A rho A^dag`` (not trace preserving in general)."""
    a = np.asarray(a, dtype=complex)
    return QuantumChannel(
        np.kron(a.conj(), a), dim_out or a.shape[0], dim_in or a.shape[1]
    )


def corner_block(dim_in: int, dim_out: int) -> QuantumChannel:
    """Map extracting the top-left ``dim_out x dim_out`` block of a matrix."""
    p = np.zeros((dim_out, dim_in), dtype=complex)
    p[:, :dim_out] = np.eye(dim_out)
    return sandwich_channel(p, dim_out, dim_in)


def embed_corner(dim_in: int, dim_out: int) -> QuantumChannel:
    """Map placing a small matrix into the top-left block of a larger one."""
    p = np.zeros((dim_out, dim_in), dtype=complex)
    p[:dim_in, :] = np.eye(dim_in)
    return sandwich_channel(p, dim_out, dim_in)
