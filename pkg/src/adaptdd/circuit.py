"""Gate-level circuit representation.

Matrices follow the IBM Euler-angle convention::

    U3(t, p, l) = [[cos(t/2),          -e^{il} sin(t/2)],
                   [e^{ip} sin(t/2),  e^{i(p+l)} cos(t/2)]]
    U2(p, l)    = U3(pi/2, p, l)
    U1(l)       = diag(1, e^{il})
    RZ(t)       = diag(e^{-it/2}, e^{it/2})

Multi-qubit matrices use the first operand as the most significant index,
so ``CNOT(c, t)`` is ``|c t> -> |c, t xor c>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class GateKind(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    SX = "sx"
    RZ = "rz"
    U1 = "u1"
    U2 = "u2"
    U3 = "u3"
    CNOT = "cx"
    MEASURE = "measure"
    BARRIER = "barrier"
    DELAY = "delay"


N_PARAMS = {GateKind.RZ: 1, GateKind.U1: 1, GateKind.U2: 2, GateKind.U3: 3, GateKind.DELAY: 1}

NON_UNITARY = frozenset({GateKind.MEASURE, GateKind.BARRIER, GateKind.DELAY})
SINGLE_QUBIT_UNITARY = frozenset(
    {GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.S, GateKind.SDG, GateKind.SX,
     GateKind.RZ, GateKind.U1, GateKind.U2, GateKind.U3}
)
# diagonal kinds implemented as frame changes on IBM hardware
VIRTUAL = frozenset({GateKind.RZ, GateKind.U1, GateKind.Z, GateKind.S, GateKind.SDG})


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbits: tuple[int, ...] = ()

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "clbits", tuple(int(c) for c in self.clbits))
        nq = len(self.qubits)
        if kind is GateKind.CNOT:
            if nq != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"cx needs two distinct operands, got {self.qubits}")
        elif kind is GateKind.BARRIER:
            if nq < 1 or len(set(self.qubits)) != nq:
                raise ValueError(f"barrier needs distinct operands, got {self.qubits}")
        elif nq != 1:
            raise ValueError(f"{kind.value} takes one operand, got {self.qubits}")
        if len(self.params) != N_PARAMS.get(kind, 0):
            raise ValueError(f"{kind.value} takes {N_PARAMS.get(kind, 0)} parameters, got {len(self.params)}")
        if not all(math.isfinite(p) for p in self.params):
            raise ValueError(f"non-finite parameter in {kind.value}{self.params}")
        if kind is GateKind.DELAY and self.params[0] < 0:
            raise ValueError(f"negative delay {self.params[0]}")
        if kind is GateKind.MEASURE:
            if len(self.clbits) != 1:
                raise ValueError("measure needs exactly one classical target")
        elif self.clbits:
            raise ValueError(f"{kind.value} takes no classical operands")

    @property
    def duration(self) -> float:
        """Explicit duration of a DELAY, in ns."""
        if self.kind is not GateKind.DELAY:
            raise AttributeError("only delay gates carry a duration")
        return self.params[0]

    def __str__(self):
        args = f"({', '.join(f'{p:g}' for p in self.params)})" if self.params else ""
        ops = ",".join(f"q{q}" for q in self.qubits)
        tail = f" -> c{self.clbits[0]}" if self.clbits else ""
        return f"{self.kind.value}{args} {ops}{tail}"


def x(q): return Gate(GateKind.X, (q,))
def y(q): return Gate(GateKind.Y, (q,))
def z(q): return Gate(GateKind.Z, (q,))
def h(q): return Gate(GateKind.H, (q,))
def s(q): return Gate(GateKind.S, (q,))
def sdg(q): return Gate(GateKind.SDG, (q,))
def sx(q): return Gate(GateKind.SX, (q,))
def rz(q, theta): return Gate(GateKind.RZ, (q,), (theta,))
def u1(q, lam): return Gate(GateKind.U1, (q,), (lam,))
def u2(q, phi, lam): return Gate(GateKind.U2, (q,), (phi, lam))
def u3(q, theta, phi, lam): return Gate(GateKind.U3, (q,), (theta, phi, lam))
def ry(q, theta): return u3(q, theta, 0.0, 0.0)
def rx(q, theta): return u3(q, theta, -math.pi / 2, math.pi / 2)
def cx(c, t): return Gate(GateKind.CNOT, (c, t))
def delay(q, ns): return Gate(GateKind.DELAY, (q,), (ns,))
def barrier(*qs): return Gate(GateKind.BARRIER, tuple(qs))
def measure(q, c): return Gate(GateKind.MEASURE, (q,), clbits=(c,))


@dataclass(frozen=True)
class Circuit:
    """Immutable ordered gate list on ``num_qubits`` qubits.

    ``num_clbits`` sizes the classical register that measurements write into;
    output bitstrings put classical bit 0 leftmost.
    """

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    num_clbits: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        measured: set[int] = set()
        written: set[int] = set()
        for i, g in enumerate(self.gates):
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"gate {i} ({g}): operand out of range for {self.num_qubits} qubits")
                if q in measured:
                    raise ValueError(f"gate {i} ({g}): qubit {q} used after its measurement")
            if g.kind is GateKind.MEASURE:
                c = g.clbits[0]
                if not 0 <= c < self.num_clbits:
                    raise ValueError(f"gate {i} ({g}): classical bit out of range for {self.num_clbits} bits")
                if c in written:
                    raise ValueError(f"gate {i} ({g}): classical bit {c} written twice")
                written.add(c)
                measured.add(g.qubits[0])

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def replace(self, gates, name=None) -> "Circuit":
        return Circuit(self.num_qubits, tuple(gates), self.num_clbits, self.name if name is None else name)

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind is kind)

    @property
    def measurements(self) -> dict[int, int]:
        """Map measured qubit -> classical bit."""
        return {g.qubits[0]: g.clbits[0] for g in self.gates if g.kind is GateKind.MEASURE}

    @property
    def active_qubits(self) -> list[int]:
        """Qubits touched by anything other than a barrier."""
        return sorted({q for g in self.gates if g.kind is not GateKind.BARRIER for q in g.qubits})


_SQ2 = 1 / math.sqrt(2)
_FIXED = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.SX: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    GateKind.CNOT: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s_ = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s_], [np.exp(1j * phi) * s_, np.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def gate_unitary(g: Gate) -> np.ndarray:
    """Return the 2x2 or 4x4 unitary of a gate."""
    if g.kind in NON_UNITARY:
        raise ValueError(f"{g.kind.value} has no unitary")
    if g.kind in _FIXED:
        return _FIXED[g.kind].copy()
    if g.kind is GateKind.RZ:
        return rz_matrix(g.params[0])
    if g.kind is GateKind.U1:
        return np.diag([1.0, np.exp(1j * g.params[0])]).astype(complex)
    if g.kind is GateKind.U2:
        return u3_matrix(math.pi / 2, *g.params)
    return u3_matrix(*g.params)


def u3_angles(U: np.ndarray) -> tuple[float, float, float]:
    """Euler angles (theta, phi, lam) with U = e^{ia} U3(theta, phi, lam)."""
    U = np.asarray(U, dtype=complex)
    a, b = abs(U[0, 0]), abs(U[1, 0])
    theta = 2 * math.atan2(b, a)
    if b < 1e-12:
        alpha = np.angle(U[0, 0])
        return theta, 0.0, float(np.angle(U[1, 1]) - alpha)
    if a < 1e-12:
        alpha = np.angle(U[1, 0])
        return theta, 0.0, float(np.angle(-U[0, 1]) - alpha)
    alpha = np.angle(U[0, 0])
    return theta, float(np.angle(U[1, 0]) - alpha), float(np.angle(-U[0, 1]) - alpha)
