import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adaptdd.circuit import Circuit, GateKind, cx, gate_unitary, h, measure, x
from adaptdd.dd import (
    DDMask, DDProtocol, characterization_circuit, delay_slot, fill_window, insert_dd, x_minus_pulse, xy4_block, xy4_block_ns, y_pulse,
)
from adaptdd.device import linear_chain
from adaptdd.metrics import tvd
from adaptdd.schedule import build_gst
from adaptdd.statevector import statevector_distribution

from conftest import random_circuit


def product(gates):
    U = np.eye(2, dtype=complex)
    for g in gates:
        if g.kind is not GateKind.DELAY:
            U = gate_unitary(g) @ U
    return U


def equal_up_to_phase(U, V):
    return abs(abs(np.trace(U.conj().T @ V)) / 2 - 1) < 1e-12


def test_mask_string_order():
    m = DDMask.from_string("1001")
    assert m.qubits == [0, 3]
    assert m.to_int() == 9
    assert DDMask.from_int(9, 4) == m
    assert str(DDMask.from_string("1001") | DDMask.from_string("0011")) == "1011"
    with pytest.raises(ValueError):
        DDMask.from_string("10a")


def test_protocol_aliases():
    assert DDProtocol("ibmq_xx").variant == "xx"
    assert DDProtocol("IBMQ-DD").variant == "xx"
    with pytest.raises(ValueError):
        DDProtocol("cpmg")


def test_pulse_identities():
    X = gate_unitary(x(0))
    Y = np.array([[0, -1j], [1j, 0]])
    assert equal_up_to_phase(product(y_pulse(0)), Y)
    assert equal_up_to_phase(product(x_minus_pulse(0)), X)
    assert equal_up_to_phase(product(xy4_block(linear_chain(1))), np.eye(2))


def test_block_length():
    d = linear_chain(2)
    assert xy4_block_ns(d) == 180
    assert xy4_block_ns(d) <= 210


def test_delay_slot_values():
    assert delay_slot(1000, 35) == 232.5
    assert delay_slot(70, 35) == 0
    with pytest.raises(ValueError):
        delay_slot(60, 35)


@given(st.floats(70, 1e5))
def test_delay_slot_reconstructs(T):
    assert 2 * 35 + 4 * delay_slot(T, 35) == pytest.approx(T, rel=1e-15, abs=1e-9)


@pytest.mark.parametrize("variant", ["xy4", "xx"])
@given(window=st.floats(0.5, 9000))
def test_fill_window_duration_and_identity(variant, window):
    d = linear_chain(1)
    gates = fill_window(0, window, d, DDProtocol(variant))
    total = sum(d.latency(g) for g in gates)
    assert total == pytest.approx(window, abs=1e-6)
    assert equal_up_to_phase(product(gates), np.eye(2))


def test_ladder_window_block_count(ladder_circuit, ladder_device):
    gst = build_gst(ladder_circuit, ladder_device)
    out = insert_dd(gst, DDMask.from_string("001"), DDProtocol("xy4"))
    # 600 ns on q2 holds three 180 ns blocks; the 40 ns lead-in is too short
    xs = [g for g in out.gates if g.kind is GateKind.X and g.qubits == (2,)]
    assert len(xs) == 12


def test_xx_splits_long_windows():
    d = linear_chain(1)
    gates = fill_window(0, 4500, d, DDProtocol("xx"))
    assert sum(g.kind is GateKind.X for g in gates) == 6


@given(st.integers(1, 6), st.integers(1, 30), st.integers(0, 2**31), st.sampled_from(["xy4", "xx"]))
def test_insert_dd_preserves_schedule(n, depth, seed, variant):
    rng = random.Random(seed)
    c = random_circuit(n, depth, rng)
    d = linear_chain(n, latency_ns=rng.choice([242, 400, 860]))
    gst = build_gst(c, d)
    mask = DDMask(tuple(rng.random() < 0.5 for _ in range(n)))
    out = insert_dd(gst, mask, DDProtocol(variant))
    again = build_gst(out, d)
    assert again.total_duration_ns == pytest.approx(gst.total_duration_ns)
    # original gates keep their start times
    orig = [e.start_ns for e in gst.entries if e.gate.kind is not GateKind.DELAY]
    originals = [g for g in c.gates if g.kind is not GateKind.DELAY]
    starts = []
    i = 0
    for e in again.entries:
        if i < len(originals) and e.gate == originals[i]:
            starts.append(e.start_ns)
            i += 1
    assert i == len(originals)
    assert starts == pytest.approx(orig)


def test_insert_dd_noiseless_identity():
    c = Circuit(3, [h(0), cx(0, 1), cx(1, 2), h(2), measure(0, 0), measure(1, 1), measure(2, 2)], 3)
    gst = build_gst(c, linear_chain(3))
    for variant in ("xy4", "xx"):
        out = insert_dd(gst, DDMask.all(3), DDProtocol(variant))
        assert tvd(statevector_distribution(out), statevector_distribution(c)) <= 1e-12


def test_mask_length_checked():
    gst = build_gst(Circuit(2, [x(0)], 0), linear_chain(2))
    with pytest.raises(ValueError):
        insert_dd(gst, DDMask.all(3), DDProtocol())


def test_characterization_circuit_shape():
    c = characterization_circuit(math.pi / 2, 1200, "free")
    d = linear_chain(3)
    assert build_gst(c, d).total_duration_ns == pytest.approx(35 + 1200 + 35)
    c2 = characterization_circuit(math.pi / 2, 1200, "xy4", concurrent_edge=(1, 2))
    assert c2.count(GateKind.CNOT) == 3
    with pytest.raises(ValueError):
        characterization_circuit(4.0, 100)
