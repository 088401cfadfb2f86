import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adaptdd.circuit import Circuit, Gate, GateKind, cx, delay, gate_unitary, h, measure, rz, u3, u3_angles, u3_matrix


def test_gate_validation():
    with pytest.raises(ValueError):
        cx(1, 1)
    with pytest.raises(ValueError):
        Gate(GateKind.RZ, (0,))
    with pytest.raises(ValueError):
        delay(0, -5)
    with pytest.raises(ValueError):
        rz(0, math.inf)
    with pytest.raises(ValueError):
        Gate(GateKind.MEASURE, (0,))


def test_circuit_helpers():
    c = Circuit(2, [h(0), cx(0, 1), measure(0, 0), measure(1, 1)], 2)
    assert len(c) == 4
    assert c.count(GateKind.CNOT) == 1
    assert c.measurements == {0: 0, 1: 1}


def test_out_of_range_operand():
    with pytest.raises(ValueError):
        Circuit(1, [h(2)], 0)


def test_delay_duration():
    assert delay(0, 12.5).duration == 12.5
    with pytest.raises(AttributeError):
        h(0).duration


angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


@given(angles, angles, angles)
def test_u3_angles_roundtrip(theta, phi, lam):
    U = u3_matrix(theta, phi, lam)
    V = u3_matrix(*u3_angles(U))
    # equal up to global phase
    overlap = abs(np.trace(U.conj().T @ V)) / 2
    assert overlap == pytest.approx(1.0, abs=1e-9)


@given(angles)
def test_rz_is_unitary_diagonal(theta):
    U = gate_unitary(rz(0, theta))
    assert np.allclose(U.conj().T @ U, np.eye(2))
    assert U[0, 1] == 0 and U[1, 0] == 0


def test_u3_named_gates():
    H = gate_unitary(h(0))
    assert np.allclose(H, np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    assert np.allclose(gate_unitary(u3(0, math.pi, 0, math.pi)), [[0, 1], [1, 0]])
