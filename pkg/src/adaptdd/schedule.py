"""Gate Sequence Table: timestamped ASAP schedule and per-qubit idle windows.

Scheduling rules:

* gates keep their input order; each starts at the latest ready time of its
  operands (ASAP);
* BARRIER has zero latency and only synchronises its operands;
* terminal measurements all start together at the readout time, i.e. the end
  of the last non-measurement gate. ``total_duration_ns`` is that readout
  time, so program latency excludes readout.

A qubit is live over ``[0, L)`` where ``L`` is its measurement start, or the
readout time if it is never measured. Idle windows are the gaps in that span
not covered by a pulse. DELAYs count as idle. Zero-latency gates and barriers
count as busy points, so windows never straddle them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .circuit import Circuit, Gate, GateKind
from .device import DeviceError, DeviceModel, Edge, edge_key, validate_against_device

EPS_NS = 1e-6
OVERLAP_NS = 1.0


@dataclass(frozen=True)
class Entry:
    index: int
    gate: Gate
    start_ns: float
    end_ns: float


@dataclass(frozen=True)
class IdleWindow:
    qubit: int
    start_ns: float
    end_ns: float
    concurrent_edges: tuple[Edge, ...] = ()

    @property
    def length_ns(self) -> float:
        return self.end_ns - self.start_ns


@dataclass(frozen=True)
class GateSequenceTable:
    circuit: Circuit
    device: DeviceModel
    entries: tuple[Entry, ...]
    total_duration_ns: float
    live_until: dict[int, float] = field(default_factory=dict)

    def timeline(self, qubit: int) -> list[tuple[float, float]]:
        """Ordered busy intervals of ``qubit`` (pulses only; zero-length for virtual gates and barriers)."""
        return [
            (e.start_ns, e.end_ns)
            for e in self.entries
            if qubit in e.gate.qubits and e.gate.kind not in (GateKind.DELAY, GateKind.MEASURE)
        ]

    def cnot_intervals(self) -> list[tuple[Edge, float, float]]:
        return [
            (edge_key(*e.gate.qubits), e.start_ns, e.end_ns)
            for e in self.entries
            if e.gate.kind is GateKind.CNOT
        ]

    @property
    def readout_ns(self) -> float:
        return self.total_duration_ns

    def to_dict(self) -> dict:
        windows = idle_windows(self)
        return {
            "total_duration_ns": self.total_duration_ns,
            "entries": [
                {
                    "gate": e.gate.kind.value,
                    "qubits": list(e.gate.qubits),
                    "params": list(e.gate.params),
                    "start_ns": e.start_ns,
                    "end_ns": e.end_ns,
                }
                for e in self.entries
            ],
            "idle_windows": {
                str(q): [
                    {"start_ns": w.start_ns, "end_ns": w.end_ns, "concurrent_edges": [list(x) for x in w.concurrent_edges]}
                    for w in ws
                ]
                for q, ws in sorted(windows.items())
            },
            "idle_fraction": {str(q): idle_fraction(self, q) for q in sorted(self.live_until)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def build_gst(c: Circuit, d: DeviceModel) -> GateSequenceTable:
    """Schedule ``c`` on ``d`` as soon as possible, preserving gate order."""
    problems = validate_against_device(c, d)
    if problems:
        raise DeviceError("circuit not valid for device: " + "; ".join(problems))
    ready = [0.0] * c.num_qubits
    timed: list[Entry | None] = []
    measures = []
    for i, g in enumerate(c.gates):
        if g.kind is GateKind.MEASURE:
            measures.append(i)
            timed.append(None)
            continue
        start = max(ready[q] for q in g.qubits)
        end = start + d.latency(g)
        for q in g.qubits:
            ready[q] = end
        timed.append(Entry(i, g, start, end))
    readout = max((e.end_ns for e in timed if e is not None), default=0.0)
    for i in measures:
        g = c.gates[i]
        timed[i] = Entry(i, g, readout, readout + d.latency(g))
    used = {q for g in c.gates if g.kind is not GateKind.BARRIER for q in g.qubits}
    live = {q: readout for q in used}
    return GateSequenceTable(c, d, tuple(timed), readout, live)


def _overlap(a0, a1, b0, b1) -> float:
    return min(a1, b1) - max(a0, b0)


def idle_windows(gst: GateSequenceTable) -> dict[int, list[IdleWindow]]:
    """Maximal idle gaps per live qubit, annotated with overlapping CNOT edges."""
    cnots = gst.cnot_intervals()
    out: dict[int, list[IdleWindow]] = {}
    for q, end in sorted(gst.live_until.items()):
        cursor = 0.0
        windows = []
        for b0, b1 in gst.timeline(q) + [(end, end)]:
            if b0 - cursor > EPS_NS:
                edges = sorted({
                    e for e, s, t in cnots
                    if q not in e and _overlap(cursor, b0, s, t) >= OVERLAP_NS
                })
                windows.append(IdleWindow(q, cursor, b0, tuple(edges)))
            cursor = max(cursor, b1)
        out[q] = windows
    return out


def idle_time(gst: GateSequenceTable, qubit: int) -> float:
    return sum(w.length_ns for w in idle_windows(gst).get(qubit, []))


def idle_fraction(gst: GateSequenceTable, qubit: int) -> float:
    """Share of the program latency that ``qubit`` spends idle."""
    if gst.total_duration_ns <= 0:
        return 0.0
    return idle_time(gst, qubit) / gst.total_duration_ns
