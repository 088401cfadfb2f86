import random

import pytest
from hypothesis import given, strategies as st

from adaptdd.circuit import Circuit, barrier, cx, delay, h, measure, x
from adaptdd.device import DeviceError, linear_chain
from adaptdd.schedule import EPS_NS, build_gst, idle_fraction, idle_windows

from conftest import random_circuit


def test_ladder_schedule(ladder_circuit, ladder_device):
    gst = build_gst(ladder_circuit, ladder_device)
    spans = [(e.start_ns, e.end_ns) for e in gst.entries[:3]]
    assert spans == [(0, 40), (40, 440), (440, 1040)]
    assert gst.total_duration_ns == 1040
    w = idle_windows(gst)
    assert [(v.start_ns, v.end_ns) for v in w[0]] == [(0, 440)]
    assert w[0][0].concurrent_edges == ((1, 2),)
    # q2 also waits out the 40 ns H before its first CNOT
    assert [(v.start_ns, v.end_ns) for v in w[2]] == [(0, 40), (440, 1040)]
    assert w[2][1].concurrent_edges == ((0, 1),)
    assert w[1] == [] or all(v.length_ns < EPS_NS for v in w[1])
    assert idle_fraction(gst, 0) == pytest.approx(440 / 1040)
    assert idle_fraction(gst, 1) == 0


def test_single_gate_starts_at_zero():
    gst = build_gst(Circuit(1, [x(0)], 0), linear_chain(1))
    assert gst.entries[0].start_ns == 0
    assert idle_windows(gst)[0] == []


def test_parallel_cnots():
    from adaptdd.device import DeviceModel, EdgeSpec
    d = DeviceModel(4, {(0, 1): EdgeSpec(400, 0), (2, 3): EdgeSpec(600, 0)})
    gst = build_gst(Circuit(4, [cx(0, 1), cx(2, 3)], 0), d)
    assert [(e.start_ns, e.end_ns) for e in gst.entries] == [(0, 400), (0, 600)]


def test_serial_chain_bv_shape():
    c = Circuit(4, [cx(0, 1), cx(1, 2), cx(2, 3)], 0)
    w = idle_windows(build_gst(c, linear_chain(4)))
    assert [(v.start_ns, v.end_ns) for v in w[0]] == [(400, 1200)]
    assert [(v.start_ns, v.end_ns) for v in w[3]] == [(0, 800)]


def test_barrier_orders_without_latency():
    c = Circuit(2, [x(0), barrier(0, 1), x(1)], 0)
    gst = build_gst(c, linear_chain(2))
    assert gst.entries[1].end_ns == gst.entries[1].start_ns == 35
    assert gst.entries[2].start_ns == 35


def test_delay_counts_as_idle():
    c = Circuit(1, [x(0), delay(0, 100), x(0), measure(0, 0)], 1)
    gst = build_gst(c, linear_chain(1))
    assert [(v.start_ns, v.end_ns) for v in idle_windows(gst)[0]] == [(35, 135)]


def test_invalid_edge_rejected():
    with pytest.raises(DeviceError):
        build_gst(Circuit(3, [cx(0, 2)], 0), linear_chain(3))


def test_gst_json_shape(ladder_circuit, ladder_device):
    body = build_gst(ladder_circuit, ladder_device).to_dict()
    assert body["entries"][1] == {"gate": "cx", "qubits": [1, 2], "params": [], "start_ns": 40, "end_ns": 440}
    assert body["idle_windows"]["0"][0]["concurrent_edges"] == [[1, 2]]


@given(st.integers(1, 6), st.integers(1, 40), st.integers(0, 2**31))
def test_schedule_invariants(n, depth, seed):
    d = linear_chain(n, latency_ns=300 + seed % 200)
    gst = build_gst(random_circuit(n, depth, random.Random(seed)), d)
    ready = [0.0] * n
    for e in gst.entries:
        if e.gate.kind.value == "measure":
            continue
        assert e.end_ns - e.start_ns == pytest.approx(d.latency(e.gate))
        # ASAP: starts exactly when its last operand frees up
        assert e.start_ns == max(ready[q] for q in e.gate.qubits)
        for q in e.gate.qubits:
            ready[q] = e.end_ns
    windows = idle_windows(gst)
    for q, end in gst.live_until.items():
        busy = [(a, b) for a, b in gst.timeline(q) if b > a]
        spans = sorted(busy + [(w.start_ns, w.end_ns) for w in windows[q]])
        # busy intervals and idle windows tile [0, live_until)
        cursor = 0.0
        for a, b in spans:
            assert a == pytest.approx(cursor)
            cursor = b
        assert cursor == pytest.approx(end)
        assert 0 <= idle_fraction(gst, q) <= 1
