import numpy as np
import pytest

from ququart import gates
from ququart.gates import (
    controlled_block_matrix,
    ecr_matrix,
    embed_local,
    embed_op,
    gate_unitary,
    is_unitary,
    perm_matrix,
    phase_matrix,
    rx_matrix,
    rx_pair_matrix,
    ry_pair_matrix,
    rz_pair_phases,
)


def test_rx_matrix_block():
    u = rx_matrix(4, 1, 0.7)
    c, s = np.cos(0.35), np.sin(0.35)
    expected = np.eye(4, dtype=complex)
    expected[1:3, 1:3] = [[c, -1j * s], [-1j * s, c]]
    np.testing.assert_allclose(u, expected, atol=1e-15)


@pytest.mark.parametrize("level", [0, 1, 2])
@pytest.mark.parametrize("phi", [0.0, 0.3, np.pi, -1.2])
@pytest.mark.parametrize("lam", [0.0, 0.5, np.pi / 2])
def test_rx_matrix_unitary(level, phi, lam):
    assert is_unitary(rx_matrix(4, level, phi, lam), tol=1e-12)


def test_rx_lam_selects_y_axis():
    # lam = pi/2 turns the x rotation into a real y rotation
    u = rx_matrix(2, 0, 0.9, np.pi / 2)
    c, s = np.cos(0.45), np.sin(0.45)
    np.testing.assert_allclose(u, [[c, -s], [s, c]], atol=1e-15)


def test_rx_pair_matches_adjacent_rx():
    np.testing.assert_allclose(
        rx_pair_matrix(4, (2, 3), 1.1, 0.4), rx_matrix(4, 2, 1.1, 0.4), atol=1e-15
    )


def test_rx_pair_nonadjacent():
    u = rx_pair_matrix(4, (0, 3), np.pi)
    # full transfer between the outer levels, middle ones untouched
    assert abs(u[3, 0]) == pytest.approx(1.0)
    assert u[1, 1] == 1.0 and u[2, 2] == 1.0
    with pytest.raises(ValueError):
        rx_pair_matrix(4, (3, 1), 0.5)


def test_ry_pair_is_real():
    u = ry_pair_matrix(4, (1, 3), 0.8)
    assert np.abs(u.imag).max() < 1e-15


def test_rz_pair_phases():
    phases = rz_pair_phases((0, 2), 0.6)
    u = np.eye(4, dtype=complex)
    for level, phi in phases:
        u = phase_matrix(4, level, phi) @ u
    z = np.eye(4, dtype=complex)
    z[0, 0] = np.exp(-1j * 0.3)
    z[2, 2] = np.exp(1j * 0.3)
    np.testing.assert_allclose(u, z, atol=1e-15)


def test_perm_matrix_swaps():
    p = perm_matrix(4, 2)
    v = p @ np.array([0.0, 0.0, 1.0, 0.0])
    np.testing.assert_allclose(v, [0.0, 0.0, 0.0, 1.0])
    np.testing.assert_allclose(p @ p, np.eye(4), atol=1e-15)


@pytest.mark.parametrize("fn,level", [(perm_matrix, 3), (phase_matrix, 4), (rx_matrix, -1)])
def test_level_range_checks(fn, level):
    with pytest.raises(ValueError):
        if fn is phase_matrix:
            fn(4, level, 0.1)
        elif fn is rx_matrix:
            fn(4, level, 0.1)
        else:
            fn(4, level)


def test_ecr_matrix_structure():
    theta = 0.9
    u = ecr_matrix(4, theta)
    # block diagonal over control levels
    blocks = [u[4 * c : 4 * c + 4, 4 * c : 4 * c + 4] for c in range(4)]
    np.testing.assert_allclose(blocks[0], rx_matrix(4, 0, -theta), atol=1e-15)
    np.testing.assert_allclose(blocks[1], rx_matrix(4, 0, theta), atol=1e-15)
    np.testing.assert_allclose(blocks[2], np.eye(4), atol=1e-15)
    np.testing.assert_allclose(blocks[3], np.eye(4), atol=1e-15)
    off = u.copy()
    for c in range(4):
        off[4 * c : 4 * c + 4, 4 * c : 4 * c + 4] = 0.0
    assert np.abs(off).max() == 0.0


def test_ecr_pi_flips_ancilla_conditionally():
    u = ecr_matrix(4, np.pi)
    # control 0: |0,1> -> i|0,0>;  control 1: |1,1> -> -i|1,0>
    e = np.zeros(16)
    e[1] = 1.0
    np.testing.assert_allclose(u @ e, 1j * np.eye(16)[0], atol=1e-15)
    e = np.zeros(16)
    e[5] = 1.0
    np.testing.assert_allclose(u @ e, -1j * np.eye(16)[4], atol=1e-15)
    # controls 2 and 3 are spectators
    for c in (2, 3):
        e = np.zeros(16)
        e[4 * c + 1] = 1.0
        np.testing.assert_allclose(u @ e, e, atol=1e-15)


def test_controlled_block_matrix():
    block = rx_matrix(4, 0, 1.3)
    u = controlled_block_matrix(4, 2, block)
    np.testing.assert_allclose(u[8:12, 8:12], block, atol=1e-15)
    u[8:12, 8:12] = np.eye(4)
    np.testing.assert_allclose(u, np.eye(16), atol=1e-15)
    with pytest.raises(ValueError):
        controlled_block_matrix(4, 4, block)
    with pytest.raises(ValueError):
        controlled_block_matrix(4, 0, block[:3, :3])


def test_gate_unitary_dispatch():
    op = gates.rx(0, 1, 0.4, 0.2)
    np.testing.assert_allclose(gate_unitary(op, 4), rx_matrix(4, 1, 0.4, 0.2))
    op = gates.virtual_phase(0, 3, 0.7)
    np.testing.assert_allclose(gate_unitary(op, 4), phase_matrix(4, 3, 0.7))
    with pytest.raises(ValueError):
        gate_unitary(gates.GateOp("bogus", (0,), {}), 4)


def test_gateop_flags():
    assert gates.virtual_phase(0, 1, 0.1).is_virtual()
    assert not gates.rx(0, 0, 0.1).is_virtual()
    assert gates.ecr(0, 1, 0.1).is_entangling()
    assert gates.controlled_block(0, 1, 2, np.eye(4)).is_entangling()
    assert not gates.perm(0, 1).is_entangling()


def test_ecr_direction_tag():
    assert gates.ecr(0, 1, 0.5).params["direction"] == "forward"
    assert gates.ecr(1, 0, 0.5).params["direction"] == "reversed"


def test_embed_local_slots():
    u = rx_matrix(4, 0, 0.8)
    np.testing.assert_allclose(embed_local(u, 0, 2, 4), np.kron(u, np.eye(4)), atol=1e-15)
    np.testing.assert_allclose(embed_local(u, 1, 2, 4), np.kron(np.eye(4), u), atol=1e-15)
    with pytest.raises(ValueError):
        embed_local(u, 2, 2, 4)
    with pytest.raises(ValueError):
        embed_local(u[:3, :3], 0, 2, 4)


def _qudit_swap(d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            s[b * d + a, a * d + b] = 1.0
    return s


def test_embed_op_reversed_roles():
    # an ECR listed as (1, 0) is the same matrix conjugated by the qudit swap
    theta = 0.6
    forward = embed_op(gates.ecr(0, 1, theta), 2, 4)
    np.testing.assert_allclose(forward, ecr_matrix(4, theta), atol=1e-15)
    reverse = embed_op(gates.ecr(1, 0, theta), 2, 4)
    s = _qudit_swap(4)
    np.testing.assert_allclose(reverse, s @ ecr_matrix(4, theta) @ s, atol=1e-15)


def test_embed_op_rejects_bad_indices():
    with pytest.raises(ValueError):
        embed_op(gates.ecr(0, 2, 0.1), 2, 4)
    with pytest.raises(ValueError):
        embed_op(gates.ecr(1, 1, 0.1), 2, 4)


def test_is_unitary():
    assert is_unitary(np.eye(5))
    assert not is_unitary(np.ones((3, 3)))
    assert not is_unitary(np.eye(3)[:2])
