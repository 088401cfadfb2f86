"""The 24 single-qubit Cliffords and nearest-Clifford approximation."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import GateKind, _FIXED

CLIFFORD_TOL = 1e-9


@dataclass(frozen=True)
class CliffordGate:
    index: int
    word: str  # gates in time order over {"h", "s"}; "" is the identity
    matrix: np.ndarray

    def __eq__(self, other):
        return isinstance(other, CliffordGate) and self.index == other.index

    def __hash__(self):
        return hash(self.index)

    def __repr__(self):
        return f"CliffordGate({self.index}, {self.word or 'I'!r})"


def _phase_key(m: np.ndarray) -> tuple:
    flat = m.ravel()
    k = int(np.argmax(np.abs(flat) > 1e-9))
    m = m * (abs(flat[k]) / flat[k])
    return tuple(np.round(m.ravel(), 9).tolist())


@lru_cache(maxsize=1)
def clifford_group() -> tuple[CliffordGate, ...]:
    """Breadth-first closure of {H, S} from the identity; the order is the tie-break order."""
    gens = (("h", _FIXED[GateKind.H]), ("s", _FIXED[GateKind.S]))
    seen = {_phase_key(np.eye(2, dtype=complex)): ("", np.eye(2, dtype=complex))}
    frontier = [("", np.eye(2, dtype=complex))]
    order = [frontier[0]]
    while frontier:
        nxt = []
        for word, m in frontier:
            for name, g in gens:
                m2 = g @ m
                key = _phase_key(m2)
                if key not in seen:
                    seen[key] = (word + name, m2)
                    nxt.append((word + name, m2))
                    order.append((word + name, m2))
        frontier = nxt
    assert len(order) == 24
    return tuple(CliffordGate(i, w, m) for i, (w, m) in enumerate(order))


def _as_unitary(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {U.shape}")
    if not np.allclose(U.conj().T @ U, np.eye(2), atol=1e-8):
        raise ValueError("matrix is not unitary")
    return U


def phase_distance(U: np.ndarray, V: np.ndarray) -> float:
    """min over phi of the spectral norm ||U - e^{i phi} V||.

    For 2x2 unitaries the optimum phase is the argument of tr(V^dagger U):
    it bisects the eigenphases of V^dagger U along the shorter arc.
    """
    t = np.trace(V.conj().T @ U)
    phase = t / abs(t) if abs(t) > 1e-12 else 1.0
    return float(np.linalg.norm(U - phase * V, ord=2))


def clifford_distances(U) -> np.ndarray:
    U = _as_unitary(U)
    return np.array([phase_distance(U, c.matrix) for c in clifford_group()])


def nearest_clifford(U) -> tuple[CliffordGate, float]:
    """Closest single-qubit Clifford to ``U`` and its phase-invariant operator-norm distance.

    Ties go to the earlier element of :func:`clifford_group`.
    """
    d = clifford_distances(U)
    best = int(np.argmin(d))
    # prefer the first index among numerically equal distances
    best = int(np.flatnonzero(d <= d[best] + 1e-12)[0])
    return clifford_group()[best], float(d[best])


def clifford_index(U) -> int | None:
    """Index of ``U`` in :func:`clifford_group` if it is Clifford up to phase, else None."""
    c, dist = nearest_clifford(U)
    return c.index if dist <= CLIFFORD_TOL else None


def is_clifford(U) -> bool:
    return clifford_index(U) is not None

