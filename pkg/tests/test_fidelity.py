import numpy as np
import pytest

from ququart.channels import kraus_channel, unitary_channel
from ququart.fidelity import (
    average_gate_fidelity_channel,
    average_gate_fidelity_unitary,
    entanglement_fidelity,
    process_fidelity_unitary,
    state_fidelity,
)

from conftest import haar_unitary


def test_identity_cases():
    u = np.eye(4)
    assert process_fidelity_unitary(u, u) == pytest.approx(1.0)
    assert average_gate_fidelity_unitary(u, u) == pytest.approx(1.0)
    assert average_gate_fidelity_channel(unitary_channel(u), u) == pytest.approx(1.0)


def test_global_phase_invariance():
    rng = np.random.default_rng(3)
    u = haar_unitary(rng, 4)
    v = np.exp(1j * 1.234) * u
    assert process_fidelity_unitary(u, v) == pytest.approx(1.0, abs=1e-12)


def test_average_vs_process_relation():
    rng = np.random.default_rng(4)
    u = haar_unitary(rng, 4)
    v = haar_unitary(rng, 4)
    fp = process_fidelity_unitary(u, v)
    fa = average_gate_fidelity_unitary(u, v)
    assert fa == pytest.approx((4 * fp + 1) / 5)


def test_channel_form_agrees_with_unitary_form():
    rng = np.random.default_rng(5)
    u = haar_unitary(rng, 4)
    v = haar_unitary(rng, 4)
    assert average_gate_fidelity_channel(unitary_channel(u), v) == pytest.approx(
        average_gate_fidelity_unitary(u, v), abs=1e-12
    )


def test_depolarizing_channel_fidelity():
    # rho -> (1-p) rho + p I/2 has average gate fidelity 1 - p/2
    p = 0.12
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0, -1.0]).astype(complex)
    ops = [
        np.sqrt(1 - 3 * p / 4) * np.eye(2),
        np.sqrt(p / 4) * x,
        np.sqrt(p / 4) * y,
        np.sqrt(p / 4) * z,
    ]
    chan = kraus_channel(ops)
    assert average_gate_fidelity_channel(chan, np.eye(2)) == pytest.approx(1 - p / 2)


def test_entanglement_fidelity_penalizes_leakage():
    # keep only the 0-1 corner of a qutrit: trace loss must reduce F_e
    proj = np.zeros((3, 3))
    proj[0, 0] = proj[1, 1] = 1.0
    chan = kraus_channel([proj])
    assert entanglement_fidelity(chan, np.eye(3)) < 1.0


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        process_fidelity_unitary(np.eye(3), np.eye(4))
    with pytest.raises(ValueError):
        average_gate_fidelity_channel(unitary_channel(np.eye(3)), np.eye(4))


def test_state_fidelity():
    psi = np.array([1.0, 0.0])
    rho = np.diag([0.75, 0.25]).astype(complex)
    assert state_fidelity(psi, rho) == pytest.approx(0.75)
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    assert state_fidelity(plus, np.outer(plus, plus.conj())) == pytest.approx(1.0)
