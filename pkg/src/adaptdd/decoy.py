"""Clifford and seeded decoy circuits.

A decoy keeps every CNOT, barrier, delay and measurement of the input and
swaps each non-Clifford single-qubit gate for its nearest Clifford. The
replacement keeps the original gate kind whenever the Clifford can be written
in it (RZ stays RZ, U1 stays U1, U2 stays U2), so gate latencies and
therefore idle windows are unchanged.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .circuit import Circuit, Gate, GateKind, SINGLE_QUBIT_UNITARY, gate_unitary, u3_angles
from .clifford import is_clifford, nearest_clifford
from .distribution import Distribution
from .stabilizer import stabilizer_distribution
from .statevector import MAX_QUBITS, statevector_distribution

_QUARTER = math.pi / 2


def _snap(angle: float) -> float:
    """Round to the nearest multiple of pi/2 and wrap into (-pi, pi]."""
    k = round(angle / _QUARTER) % 4
    return (0.0, _QUARTER, math.pi, -_QUARTER)[k]


def is_clifford_gate(g: Gate) -> bool:
    if g.kind in (GateKind.CNOT, GateKind.MEASURE, GateKind.BARRIER, GateKind.DELAY):
        return True
    return is_clifford(gate_unitary(g))


def cliffordize(g: Gate) -> Gate:
    """Nearest-Clifford replacement for a single-qubit gate, keeping its kind where possible."""
    if is_clifford_gate(g):
        return g
    V = nearest_clifford(gate_unitary(g))[0].matrix
    q = g.qubits[0]
    if abs(V[0, 1]) < 1e-9:
        lam = _snap(float(np.angle(V[1, 1] / V[0, 0])))
        if g.kind in (GateKind.RZ, GateKind.U1):
            return Gate(g.kind, (q,), (lam,))
        return Gate(GateKind.U3, (q,), (0.0, 0.0, lam))
    theta, phi, lam = (_snap(a) for a in u3_angles(V))
    if g.kind is GateKind.U2 and abs(theta - _QUARTER) < 1e-9:
        return Gate(GateKind.U2, (q,), (phi, lam))
    return Gate(GateKind.U3, (q,), (theta, phi, lam))


def make_cdc(c: Circuit) -> Circuit:
    """Clifford decoy: every non-Clifford gate replaced by its nearest Clifford."""
    return c.replace([cliffordize(g) for g in c.gates], name=f"cdc({c.name})" if c.name else "cdc")


def make_sdc(c: Circuit) -> Circuit:
    """Seeded decoy: keep the first non-Clifford gate per qubit if it precedes that qubit's first CNOT."""
    entangled: set[int] = set()
    seeded: set[int] = set()
    out = []
    for g in c.gates:
        if g.kind is GateKind.CNOT:
            entangled.update(g.qubits)
        elif g.kind in SINGLE_QUBIT_UNITARY and not is_clifford_gate(g):
            q = g.qubits[0]
            if q not in seeded and q not in entangled:
                seeded.add(q)
                out.append(g)
                continue
            g = cliffordize(g)
        out.append(g)
    return c.replace(out, name=f"sdc({c.name})" if c.name else "sdc")


def make_decoy(c: Circuit, mode: str = "cdc") -> Circuit:
    mode = mode.lower()
    if mode == "cdc":
        return make_cdc(c)
    if mode == "sdc":
        return make_sdc(c)
    raise ValueError(f"unknown decoy mode {mode!r}; expected cdc or sdc")


def non_clifford_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if not is_clifford_gate(g))


@lru_cache(maxsize=256)
def ideal_distribution(c: Circuit) -> Distribution:
    """Noiseless output distribution, by tableau when all-Clifford, otherwise by statevector.

    Results are cached per circuit, so repeated scoring against the same decoy
    simulates it once.
    """
    if non_clifford_count(c) == 0:
        return stabilizer_distribution(c)
    return statevector_distribution(c, MAX_QUBITS)
