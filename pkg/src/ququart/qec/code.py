"""A two-level code in a single ququart protecting against dephasing.

The codewords

    |0_L> = (|0> + sqrt(3)|2>) / 2
    |1_L> = (sqrt(3)|1> + |3>) / 2

satisfy <n> = 3/2 and <n^2> = 3 on both codewords with vanishing
cross-matrix elements, which is the Knill-Laflamme condition for the error
set {1, n}: a first-order number-operator kick moves logical states into an
orthogonal error space without distinguishing |0_L> from |1_L>.
"""

from __future__ import annotations

import numpy as np

from ..gates import ry_pair_matrix

LOGICAL_ZERO = np.array([1.0, 0.0, np.sqrt(3.0), 0.0]) / 2.0
LOGICAL_ONE = np.array([0.0, np.sqrt(3.0), 0.0, 1.0]) / 2.0

GivensStep = tuple[tuple[int, int], float]

# Givens schedules, first-in-time first (the matrix product runs right to
# left).  Every rotation couples an adjacent level pair, so each step maps
# onto a single resonant pulse.
ENCODE_STEPS: list[GivensStep] = [
    ((1, 2), np.pi),
    ((2, 3), np.pi / 3.0),
    ((0, 1), -2.0 * np.pi / 3.0),
    ((1, 2), -np.pi),
]
DECODE_STEPS: list[GivensStep] = [
    ((1, 2), np.pi),
    ((0, 1), 2.0 * np.pi / 3.0),
    ((2, 3), -np.pi / 3.0),
    ((1, 2), -np.pi),
]
RECOVERY_STEPS: list[GivensStep] = [
    ((1, 2), np.pi),
    ((2, 3), -2.0 * np.pi / 3.0),
    ((0, 1), np.pi / 3.0),
    ((1, 2), -np.pi),
]


def givens_product(steps: list[GivensStep]) -> np.ndarray:
    """Compose two-level y rotations, first element acting first in time."""
    u = np.eye(4, dtype=complex)
    for levels, angle in steps:
        u = ry_pair_matrix(4, levels, angle) @ u
    return u


def encoding_unitary() -> np.ndarray:
    """Maps |0> -> |0_L>, |1> -> |1_L>, |2> -> |0_E>, |3> -> |1_E>.

    The error words |0_E> = (-sqrt(3)|0> + |2>)/2 and
    |1_E> = (-|1> + sqrt(3)|3>)/2 span the image of the code space under a
    first-order dephasing kick.
    """
    return givens_product(ENCODE_STEPS)


def decoding_unitary() -> np.ndarray:
    """Inverse of the encoder: code words to |0>,|1>, error words to |2>,|3>."""
    return givens_product(DECODE_STEPS)


def recovery_unitary() -> np.ndarray:
    """Re-encoder for the error branch: maps |2> -> |0_L>, |3> -> |1_L>.

    After decoding, an error-space component sits in levels {2, 3} with the
    logical amplitudes intact; this rotation sends it straight back to the
    code space, completing the correction.
    """
    return givens_product(RECOVERY_STEPS)


def kl_defect() -> float:
    """Worst-case violation of the Knill-Laflamme conditions for {1, n}.

    Checks that <i_L| E_a^dag E_b |j_L> is proportional to delta_ij for all
    products of the error set, i.e. for E^dag E in {1, n, n^2}.
    """
    n_op = np.diag(np.arange(4.0))
    words = [LOGICAL_ZERO, LOGICAL_ONE]
    worst = 0.0
    for op in [np.eye(4), n_op, n_op @ n_op]:
        gram = np.array([[wi.conj() @ op @ wj for wj in words] for wi in words])
        worst = max(worst, abs(gram[0, 1]), abs(gram[1, 0]), abs(gram[0, 0] - gram[1, 1]))
    return float(worst)
