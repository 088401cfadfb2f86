"""Dense statevector kernel shared by the ideal and noisy simulators.

States are tensors of shape ``(2,)*n + (m,)``: ``n`` qubit axes (axis ``i`` is
compact qubit ``i``, most significant first) plus a trailing batch axis.
"""
from __future__ import annotations

import numpy as np

from .circuit import Circuit, GateKind, gate_unitary
from .distribution import Distribution

MAX_QUBITS = 16

PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class CapacityError(ValueError):
    pass


def apply_matrix(state: np.ndarray, mat: np.ndarray, axes) -> np.ndarray:
    k = len(axes)
    g = mat.reshape((2,) * (2 * k))
    out = np.tensordot(g, state, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def apply_diagonal(state: np.ndarray, diag: np.ndarray, axis: int) -> np.ndarray:
    shape = [1] * state.ndim
    shape[axis] = 2
    return state * diag.reshape(shape)


def pauli2(index: int) -> np.ndarray:
    """Two-qubit Pauli for ``index`` in 0..15; the first operand carries ``index // 4``."""
    a, b = divmod(index, 4)
    return np.kron(PAULIS[a], PAULIS[b])


def zero_state(n: int, batch: int = 1) -> np.ndarray:
    psi = np.zeros((2,) * n + (batch,), dtype=complex)
    psi[(0,) * n] = 1.0
    return psi


class Layout:
    """Compact indexing of a circuit's active qubits plus its measurement map."""

    def __init__(self, c: Circuit, cap: int = MAX_QUBITS):
        self.qubits = c.active_qubits or [0]
        if len(self.qubits) > cap:
            raise CapacityError(f"{len(self.qubits)} active qubits exceed the statevector cap of {cap}")
        self.axis = {q: i for i, q in enumerate(self.qubits)}
        self.n = len(self.qubits)
        self.num_clbits = c.num_clbits
        self.meas = sorted((self.axis[q], cb) for q, cb in c.measurements.items())

    def outcome_index(self) -> np.ndarray:
        """Classical-register integer (bit 0 most significant) for each basis index."""
        idx = np.arange(2 ** self.n)
        out = np.zeros_like(idx)
        for ax, cb in self.meas:
            bit = (idx >> (self.n - 1 - ax)) & 1
            out |= bit << (self.num_clbits - 1 - cb)
        return out

    def outcome_probs(self, probs: np.ndarray) -> np.ndarray:
        """Fold basis-state probabilities (shape ``(2**n, ...)``) onto classical outcomes."""
        width = 2 ** self.num_clbits
        idx = self.outcome_index()
        out = np.zeros((width,) + probs.shape[1:])
        np.add.at(out, idx, probs)
        return out


def run_unitary(c: Circuit, layout: Layout | None = None) -> np.ndarray:
    """Noiseless final state of ``c`` as a flat vector over its active qubits."""
    layout = layout or Layout(c)
    psi = zero_state(layout.n)
    for g in c.gates:
        if g.kind in (GateKind.MEASURE, GateKind.BARRIER, GateKind.DELAY):
            continue
        psi = apply_matrix(psi, gate_unitary(g), [layout.axis[q] for q in g.qubits])
    return psi.reshape(-1)


def statevector_distribution(c: Circuit, cap: int = MAX_QUBITS) -> Distribution:
    """Exact noiseless output distribution over the classical register."""
    layout = Layout(c, cap)
    psi = run_unitary(c, layout)
    probs = layout.outcome_probs(np.abs(psi) ** 2)
    return Distribution.from_vector(probs, c.num_clbits)
