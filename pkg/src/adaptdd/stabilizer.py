"""Aaronson-Gottesman stabilizer tableau with exact outcome probabilities.

Rows ``0..n-1`` hold destabilizers and rows ``n..2n-1`` stabilizers. Exact
output distributions come from branching on every random measurement; each
branch carries weight 1/2.
"""
from __future__ import annotations

import numpy as np

from .circuit import Circuit, GateKind, gate_unitary
from .clifford import clifford_group, clifford_index
from .distribution import Distribution


class NotCliffordError(ValueError):
    pass


class Tableau:
    def __init__(self, n: int):
        self.n = n
        self.x = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.z = np.zeros((2 * n + 1, n), dtype=np.uint8)
        self.r = np.zeros(2 * n + 1, dtype=np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1
        self.z[idx + n, idx] = 1

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n, t.x, t.z, t.r = self.n, self.x.copy(), self.z.copy(), self.r.copy()
        return t

    def h(self, a: int):
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def s(self, a: int):
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def cnot(self, a: int, b: int):
        x, z = self.x, self.z
        self.r ^= x[:, a] & z[:, b] & (x[:, b] ^ z[:, a] ^ 1)
        x[:, b] ^= x[:, a]
        z[:, a] ^= z[:, b]

    def _rowsum(self, h: int, i: int):
        x1, z1 = self.x[i].astype(int), self.z[i].astype(int)
        x2, z2 = self.x[h].astype(int), self.z[h].astype(int)
        g = np.where(
            (x1 == 1) & (z1 == 1), z2 - x2,
            np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
        )
        total = 2 * int(self.r[h]) + 2 * int(self.r[i]) + int(g.sum())
        self.r[h] = 0 if total % 4 == 0 else 1
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def random_pivot(self, a: int) -> int | None:
        hits = np.flatnonzero(self.x[self.n:2 * self.n, a])
        return int(hits[0]) + self.n if hits.size else None

    def measure(self, a: int, outcome: int | None = None) -> int:
        """Measure qubit ``a`` in Z; ``outcome`` forces the result of a random measurement."""
        n = self.n
        p = self.random_pivot(a)
        if p is not None:
            for i in np.flatnonzero(self.x[:2 * n, a]):
                if i != p:
                    self._rowsum(int(i), p)
            self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, a] = 1
            self.r[p] = 0 if outcome is None else outcome
            return int(self.r[p])
        scratch = 2 * n
        self.x[scratch] = 0
        self.z[scratch] = 0
        self.r[scratch] = 0
        for i in np.flatnonzero(self.x[:n, a]):
            self._rowsum(scratch, int(i) + n)
        return int(self.r[scratch])


def apply_clifford_gate(t: Tableau, g, axis) -> None:
    kind = g.kind
    if kind is GateKind.CNOT:
        t.cnot(axis[g.qubits[0]], axis[g.qubits[1]])
        return
    if kind is GateKind.H:
        t.h(axis[g.qubits[0]])
        return
    if kind is GateKind.S:
        t.s(axis[g.qubits[0]])
        return
    idx = clifford_index(gate_unitary(g))
    if idx is None:
        raise NotCliffordError(f"{g} is not a Clifford gate")
    a = axis[g.qubits[0]]
    for step in clifford_group()[idx].word:
        (t.h if step == "h" else t.s)(a)


def stabilizer_distribution(c: Circuit) -> Distribution:
    """Exact noiseless output distribution of an all-Clifford circuit."""
    qubits = c.active_qubits or [0]
    axis = {q: i for i, q in enumerate(qubits)}
    t = Tableau(len(qubits))
    for g in c.gates:
        if g.kind in (GateKind.MEASURE, GateKind.BARRIER, GateKind.DELAY):
            continue
        apply_clifford_gate(t, g, axis)
    meas = sorted(c.measurements.items(), key=lambda kv: kv[1])
    probs: dict[str, float] = {}

    def branch(tab: Tableau, k: int, bits: list[str], weight: float):
        if k == len(meas):
            key = ["0"] * c.num_clbits
            for (q, cb), b in zip(meas, bits):
                key[cb] = b
            s = "".join(key)
            probs[s] = probs.get(s, 0.0) + weight
            return
        a = axis[meas[k][0]]
        if tab.random_pivot(a) is None:
            branch(tab, k + 1, bits + [str(tab.measure(a))], weight)
            return
        for outcome in (0, 1):
            sub = tab.copy()
            sub.measure(a, outcome)
            branch(sub, k + 1, bits + [str(outcome)], weight / 2)

    branch(t, 0, [], 1.0)
    return Distribution(probs)
