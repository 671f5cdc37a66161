import json

import numpy as np
import pytest

from ququart import gates
from ququart.circuits import (
    QuditCircuit,
    ValidationError,
    circuit_from_json,
    circuit_to_json,
    circuit_unitary,
    dumps_circuit,
    loads_circuit,
    matrix_from_json,
    matrix_to_json,
)
from ququart.gates import phase_matrix, rx_matrix


def test_time_ordering():
    # ops[0] acts first: U = M1 @ M0
    circ = QuditCircuit(4, 1, (gates.rx(0, 0, 0.7), gates.virtual_phase(0, 1, 0.3)))
    expected = phase_matrix(4, 1, 0.3) @ rx_matrix(4, 0, 0.7)
    np.testing.assert_allclose(circuit_unitary(circ), expected, atol=1e-15)
    np.testing.assert_allclose(circ.unitary(), expected, atol=1e-15)


def test_two_qudit_composition():
    circ = QuditCircuit(
        4, 2, (gates.ecr(0, 1, np.pi / 4), gates.rx(1, 2, 0.5), gates.perm(0, 0))
    )
    u = circuit_unitary(circ)
    assert u.shape == (16, 16)
    assert gates.is_unitary(u, tol=1e-12)


def test_len_and_concat():
    a = QuditCircuit(4, 2, (gates.perm(0, 1),))
    b = QuditCircuit(4, 2, (gates.perm(1, 2),))
    assert len(a + b) == 2
    np.testing.assert_allclose(
        circuit_unitary(a + b),
        gates.embed_op(b.ops[0], 2, 4) @ gates.embed_op(a.ops[0], 2, 4),
    )
    with pytest.raises(ValidationError):
        a + QuditCircuit(4, 3, ())
    with pytest.raises(ValidationError):
        a + QuditCircuit(3, 2, ())


def test_qudit_index_validation():
    with pytest.raises(ValidationError):
        QuditCircuit(4, 1, (gates.ecr(0, 1, 0.1),))


def test_extended():
    circ = QuditCircuit(4, 1, ()).extended([gates.rx(0, 0, 0.2)])
    assert len(circ) == 1


def test_phase_frames():
    circ = QuditCircuit(
        4,
        2,
        (
            gates.virtual_phase(0, 1, 0.5),
            gates.virtual_phase(0, 1, 0.25),
            gates.virtual_phase(1, 3, -1.0),
            gates.rx(0, 0, 0.4),
        ),
    )
    frames = circ.phase_frames()
    assert frames[0, 1] == pytest.approx(0.75)
    assert frames[1, 3] == pytest.approx(-1.0)
    assert frames[0, 0] == 0.0


def test_matrix_json_roundtrip():
    rng = np.random.default_rng(11)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    np.testing.assert_array_equal(matrix_from_json(matrix_to_json(m)), m)
    with pytest.raises(ValidationError):
        matrix_from_json([[{"re": 1.0}]])


def test_circuit_json_roundtrip():
    circ = QuditCircuit(
        4,
        2,
        (
            gates.rx(0, 1, 0.4, 0.1),
            gates.virtual_phase(1, 2, -0.3),
            gates.perm(0, 2),
            gates.ecr(0, 1, np.pi / 4),
            gates.controlled_block(0, 1, 3, rx_matrix(4, 0, 0.9)),
        ),
    )
    back = loads_circuit(dumps_circuit(circ))
    assert back.d == circ.d and back.n_qudits == circ.n_qudits
    assert [op.kind for op in back.ops] == [op.kind for op in circ.ops]
    np.testing.assert_allclose(circuit_unitary(back), circuit_unitary(circ), atol=1e-15)


def test_loads_rejects_garbage():
    with pytest.raises(ValidationError):
        loads_circuit("not json {")
    with pytest.raises(ValidationError):
        circuit_from_json({"d": 4})
    bad = circuit_to_json(QuditCircuit(4, 1, (gates.perm(0, 0),)))
    bad["ops"][0]["kind"] = "mystery"
    with pytest.raises(ValidationError):
        circuit_from_json(bad)


def test_dumps_is_plain_json():
    text = dumps_circuit(QuditCircuit(4, 1, (gates.rx(0, 0, 1.0),)))
    payload = json.loads(text)
    assert payload["d"] == 4
    assert payload["ops"][0]["params"]["phi"] == 1.0
