"""Where qubits sit idle, and what filling those gaps with DD looks like.

Run: python3 demos/01_idle_windows.py
"""
# %%
from adaptdd import DDMask, DDProtocol, build_gst, idle_fraction, idle_windows, insert_dd, serialize_qasm
from adaptdd.circuit import Circuit, cx, h, measure
from adaptdd.device import DeviceModel, EdgeSpec

# Three qubits on a line. The H takes 40 ns, CNOT(1,2) 400 ns and CNOT(0,1) 600 ns.
dev = DeviceModel(3, {(0, 1): EdgeSpec(600, 0.01), (1, 2): EdgeSpec(400, 0.01)}, sq_latency_ns=40)
circ = Circuit(3, [h(1), cx(1, 2), cx(0, 1)] + [measure(q, q) for q in range(3)], 3)

# %%
# ASAP schedule. Each gate starts as soon as all its operands are free.
gst = build_gst(circ, dev)
for e in gst.entries:
    print(f"{str(e.gate):18s} [{e.start_ns:6.0f}, {e.end_ns:6.0f})")
print("program latency:", gst.total_duration_ns, "ns")

# %%
# q0 waits out the first CNOT, q2 waits out the second. Each window records
# which CNOTs ran next to it, since those are what amplify the drift.
for q, windows in idle_windows(gst).items():
    for w in windows:
        print(f"q{q} idle [{w.start_ns:.0f}, {w.end_ns:.0f}) next to {list(w.concurrent_edges)}")
    print(f"q{q} idle fraction {idle_fraction(gst, q):.3f}")

# %%
# XY4 on q2 only. The 600 ns window holds three 180 ns blocks; the leftover
# 60 ns is spread over the buffers of the last block. q0 gets plain delays.
dd = insert_dd(gst, DDMask.from_string("001"), DDProtocol("xy4"))
print(serialize_qasm(dd))
assert build_gst(dd, dev).total_duration_ns == gst.total_duration_ns
