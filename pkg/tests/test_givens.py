import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ququart import gates
from ququart.circuits import ValidationError
from ququart.gates import rx_matrix
from ququart.givens import (
    LocalDecomposition,
    givens_synthesize,
    rx_to_sqrtx_count,
    sqrtx_rewrite,
)

from conftest import haar_unitary


def reconstruction_error(u: np.ndarray, dec: LocalDecomposition) -> float:
    return float(np.abs(dec.matrix() - u).max())


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from([2, 3, 4, 6]))
def test_roundtrip_random_unitaries(seed, d):
    u = haar_unitary(np.random.default_rng(seed), d)
    dec = givens_synthesize(u)
    assert reconstruction_error(u, dec) < 1e-10


def test_roundtrip_is_exact_not_just_close():
    # tighter check on a batch of ququart-sized inputs
    rng = np.random.default_rng(99)
    worst = max(
        reconstruction_error(u, givens_synthesize(u))
        for u in (haar_unitary(rng, 4) for _ in range(25))
    )
    assert worst < 1e-12


def test_identity_synthesizes_to_nothing():
    dec = givens_synthesize(np.eye(4))
    assert dec.ops == ()
    assert dec.residual_phase == pytest.approx(0.0)


def test_diagonal_needs_no_rotations():
    u = np.diag(np.exp(1j * np.array([0.0, 0.4, -1.1, 2.0])))
    dec = givens_synthesize(u)
    assert all(op.kind == gates.PHASE for op in dec.ops)
    assert reconstruction_error(u, dec) < 1e-12


def test_rotation_count_bound():
    rng = np.random.default_rng(5)
    for d in (3, 4, 5):
        u = haar_unitary(rng, d)
        dec = givens_synthesize(u)
        n_rx = sum(op.kind == gates.RX for op in dec.ops)
        assert n_rx <= d * (d - 1) // 2


def test_ops_are_local_and_tagged():
    dec = givens_synthesize(haar_unitary(np.random.default_rng(6), 4), qudit=1)
    assert all(op.kind in (gates.RX, gates.PHASE) for op in dec.ops)
    assert all(op.qudits == (1,) for op in dec.ops)


def test_rejects_nonunitary():
    with pytest.raises(ValidationError):
        givens_synthesize(np.ones((4, 4)))
    with pytest.raises(ValidationError):
        givens_synthesize(np.eye(4)[:2])


@pytest.mark.parametrize("phi,lam", [(0.7, 0.0), (np.pi, 0.3), (-1.2, -2.0), (np.pi / 2, 1.0)])
def test_sqrtx_rewrite_exact(phi, lam):
    seq = sqrtx_rewrite(1, phi, lam)
    u = np.eye(4, dtype=complex)
    for op in seq:
        u = gates.gate_unitary(op, 4) @ u
    np.testing.assert_allclose(u, rx_matrix(4, 1, phi, lam), atol=1e-12)
    # exactly two physical pulses, both 90-degree
    pulses = [op for op in seq if op.kind == gates.RX]
    assert len(pulses) == 2
    assert all(op.params["phi"] == pytest.approx(np.pi / 2) for op in pulses)


def test_sqrtx_counting():
    ops = [
        gates.virtual_phase(0, 1, 0.5),  # free
        gates.rx(0, 0, np.pi / 2),  # 1
        gates.rx(0, 1, np.pi),  # 2
        gates.rx(0, 2, 2 * np.pi),  # full turn: 0
        gates.rx(0, 0, 3 * np.pi / 2),  # 1
        gates.perm(0, 1),  # 2
    ]
    assert rx_to_sqrtx_count(ops) == 6
    with pytest.raises(ValidationError):
        rx_to_sqrtx_count([gates.ecr(0, 1, 0.1)])
