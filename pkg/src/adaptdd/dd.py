"""Dynamical-decoupling sequences and their insertion into idle windows.

Pulses are expressed in the {RZ, X} basis with RZ as a zero-latency frame
change:

* ``Y = RZ(pi/2) . X . RZ(-pi/2)`` (exact, no global phase);
* ``X(-pi) = RZ(pi) . X . RZ(-pi)``, which is ``-X``, i.e. RX(-pi) up to phase.

An XY4 block is ``X b Y b X b Y b`` with a buffer ``b`` after each pulse. A
window of length T receives ``floor(T / block)`` blocks. The residue is
spread evenly over the four buffers of the last block, so every block stays
symmetric and echoes a constant drift exactly. The XX (IBMQ-DD) sequence
splits a window into equal segments no longer than ``max_segment_ns`` and
fills each with ``tau/4 X tau/4 tau/4 X(-pi) tau/4``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, GateKind, barrier, cx, delay, measure, rz, ry, x
from .device import DeviceModel, linear_chain
from .schedule import EPS_NS, GateSequenceTable

XY4 = "xy4"
XX = "xx"
_VARIANTS = {"xy4": XY4, "xx": XX, "ibmq_xx": XX, "ibmq-dd": XX}


@dataclass(frozen=True)
class DDMask:
    """One bit per program qubit; the string form puts qubit 0 leftmost."""

    bits: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @classmethod
    def from_string(cls, s: str) -> "DDMask":
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"mask must be a non-empty 0/1 string, got {s!r}")
        return cls(tuple(ch == "1" for ch in s))

    @classmethod
    def from_int(cls, value: int, n: int) -> "DDMask":
        return cls.from_string(format(value, f"0{n}b"))

    @classmethod
    def none(cls, n: int) -> "DDMask":
        return cls((False,) * n)

    @classmethod
    def all(cls, n: int) -> "DDMask":
        return cls((True,) * n)

    @classmethod
    def of(cls, qubits, n: int) -> "DDMask":
        on = set(qubits)
        return cls(tuple(q in on for q in range(n)))

    def __str__(self):
        return "".join("1" if b else "0" for b in self.bits)

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, q: int) -> bool:
        return self.bits[q]

    def __or__(self, other: "DDMask") -> "DDMask":
        return DDMask(tuple(a or b for a, b in zip(self.bits, other.bits, strict=True)))

    def to_int(self) -> int:
        return int(str(self), 2)

    @property
    def qubits(self) -> list[int]:
        return [q for q, b in enumerate(self.bits) if b]


@dataclass(frozen=True)
class DDProtocol:
    variant: str = XY4
    buffer_ns: float | None = None  # None: the device's dd_buffer_ns
    max_segment_ns: float = 2000.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "variant", _VARIANTS[self.variant.lower()])
        except KeyError:
            raise ValueError(f"unknown DD protocol {self.variant!r}") from None
        if self.buffer_ns is not None and self.buffer_ns < 0:
            raise ValueError("buffer_ns must be >= 0")
        if self.max_segment_ns <= 0:
            raise ValueError("max_segment_ns must be positive")

    def buffer(self, d: DeviceModel) -> float:
        return d.dd_buffer_ns if self.buffer_ns is None else self.buffer_ns

    def block_ns(self, d: DeviceModel) -> float:
        """Length of one XY4 block on ``d``."""
        return 4 * (d.x_latency_ns + self.buffer(d))

    def min_window_ns(self, d: DeviceModel) -> float:
        if self.variant == XY4:
            return self.block_ns(d)
        return 2 * d.x_latency_ns

    def check(self, d: DeviceModel) -> None:
        if self.variant == XX and self.max_segment_ns < 2 * d.x_latency_ns:
            raise ValueError(
                f"max_segment_ns={self.max_segment_ns} cannot hold two {d.x_latency_ns} ns pulses"
            )
        if self.block_ns(d) <= 0:
            raise ValueError("device has zero-length X pulses; DD blocks would be empty")


def y_pulse(q: int) -> list[Gate]:
    return [rz(q, -math.pi / 2), x(q), rz(q, math.pi / 2)]


def x_minus_pulse(q: int) -> list[Gate]:
    return [rz(q, -math.pi), x(q), rz(q, math.pi)]


def _wait(q: int, ns: float) -> list[Gate]:
    return [delay(q, ns)] if ns > EPS_NS else []


def _block(q: int, buf: float) -> list[Gate]:
    return [x(q), *_wait(q, buf), *y_pulse(q), *_wait(q, buf), x(q), *_wait(q, buf), *y_pulse(q), *_wait(q, buf)]


def xy4_block(d: DeviceModel, qubit: int = 0, buffer_ns: float | None = None) -> list[Gate]:
    """One X-Y-X-Y block on ``qubit`` in the {RZ, X} basis, buffered after each pulse."""
    buf = d.dd_buffer_ns if buffer_ns is None else buffer_ns
    return _block(qubit, buf)


def xy4_block_ns(d: DeviceModel, buffer_ns: float | None = None) -> float:
    return DDProtocol(XY4, buffer_ns).block_ns(d)


def delay_slot(window_ns: float, x_len: float) -> float:
    """Quarter slot tau/4 of an XX sequence: (T - 2 x_len) / 4."""
    if window_ns < 2 * x_len:
        raise ValueError(f"window of {window_ns} ns is shorter than two {x_len} ns pulses")
    return (window_ns - 2 * x_len) / 4


def fill_xy4(q: int, window_ns: float, d: DeviceModel, p: DDProtocol) -> list[Gate]:
    block = p.block_ns(d)
    n = int(math.floor((window_ns + EPS_NS) / block))
    if n == 0:
        return _wait(q, window_ns)
    buf = p.buffer(d)
    last_buf = (window_ns - (n - 1) * block - 4 * d.x_latency_ns) / 4
    gates: list[Gate] = []
    for _ in range(n - 1):
        gates += _block(q, buf)
    return gates + _block(q, last_buf)


def fill_xx(q: int, window_ns: float, d: DeviceModel, p: DDProtocol) -> list[Gate]:
    x_len = d.x_latency_ns
    k = max(1, math.ceil(window_ns / p.max_segment_ns - 1e-12))
    seg = window_ns / k
    if seg < 2 * x_len:
        return _wait(q, window_ns)
    gates: list[Gate] = []
    for i in range(k):
        length = seg if i < k - 1 else window_ns - seg * (k - 1)
        slot = delay_slot(length, x_len)
        gates += [*_wait(q, slot), x(q), *_wait(q, slot), *_wait(q, slot), *x_minus_pulse(q), *_wait(q, slot)]
    return gates


def fill_window(q: int, window_ns: float, d: DeviceModel, p: DDProtocol) -> list[Gate]:
    """Gates occupying exactly ``window_ns`` on ``q`` with protocol ``p``."""
    if p.variant == XY4:
        return fill_xy4(q, window_ns, d, p)
    return fill_xx(q, window_ns, d, p)


def insert_dd(gst: GateSequenceTable, mask: DDMask, p: DDProtocol, d: DeviceModel | None = None) -> Circuit:
    """Materialise every idle window: DD for masked qubits, DELAY elsewhere.

    The returned circuit reschedules to the same gate start times and the
    same total duration as ``gst``.
    """
    d = d or gst.device
    c = gst.circuit
    if len(mask) != c.num_qubits:
        raise ValueError(f"mask has {len(mask)} bits for a {c.num_qubits}-qubit circuit")
    if d is not gst.device and d != gst.device:
        raise ValueError("GST was built for a different device")
    p.check(d)

    cursor = {q: 0.0 for q in gst.live_until}
    out: list[Gate] = []

    def gap(q: int, until: float):
        length = until - cursor[q]
        if length > EPS_NS:
            out.extend(fill_window(q, length, d, p) if mask[q] else [delay(q, length)])
        cursor[q] = max(cursor[q], until)

    for e in gst.entries:
        g = e.gate
        if g.kind is GateKind.DELAY:
            continue
        for q in g.qubits:
            if q in cursor:
                gap(q, e.start_ns)
        out.append(g)
        if g.kind is not GateKind.MEASURE:
            for q in g.qubits:
                if q in cursor:
                    cursor[q] = e.end_ns
    for q, end in sorted(gst.live_until.items()):
        gap(q, end)
    suffix = f"+dd[{p.variant}:{mask}]"
    return c.replace(out, name=f"{c.name}{suffix}" if c.name else suffix)


def characterization_circuit(
    theta: float,
    idle_ns: float,
    variant: str = "free",
    concurrent_edge: tuple[int, int] | None = None,
    device: DeviceModel | None = None,
    protocol: DDProtocol | None = None,
) -> Circuit:
    """Single-qubit idle probe: Ry(theta) on q0, an idle or DD body, Ry(-theta), measure.

    With ``concurrent_edge`` the body runs alongside back-to-back CNOTs on
    that edge, fenced by barriers so both spans start together.
    """
    if not 0 <= theta <= math.pi:
        raise ValueError("theta must lie in [0, pi]")
    if idle_ns < 0:
        raise ValueError("idle_ns must be >= 0")
    if concurrent_edge is not None and 0 in concurrent_edge:
        raise ValueError("concurrent edge must not touch the probed qubit q0")
    n = max(concurrent_edge) + 1 if concurrent_edge else 1
    device = device or linear_chain(max(n, 3))
    variant = variant.lower()
    if variant == "free":
        body = [delay(0, idle_ns)] if idle_ns > 0 else []
    else:
        p = protocol or DDProtocol(variant)
        body = fill_window(0, idle_ns, device, p)
    gates = [ry(0, theta)]
    if concurrent_edge:
        a, b = concurrent_edge
        gates.append(barrier(0, a, b))
        count = int(idle_ns // device.cnot_latency(a, b))
        gates += body + [cx(a, b) for _ in range(count)]
        gates.append(barrier(0, a, b))
    else:
        gates += body
    gates += [ry(0, -theta), measure(0, 0)]
    name = f"char[{variant},theta={theta:.4g},T={idle_ns:g}" + (f",edge={concurrent_edge}]" if concurrent_edge else "]")
    return Circuit(n, gates, 1, name)
