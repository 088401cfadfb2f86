import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import minimize_scalar
from scipy.stats import unitary_group

from adaptdd.circuit import h, gate_unitary, rz, s, u3
from adaptdd.clifford import clifford_group, is_clifford, nearest_clifford, phase_distance


def brute_force_distance(U, V, grid=720):
    """min over phi of ||U - e^{i phi} V||_2 by a phase grid plus a local polish."""
    f = lambda phi: np.linalg.norm(U - np.exp(1j * phi) * V, ord=2)
    phis = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    k = int(np.argmin([f(p) for p in phis]))
    step = 2 * np.pi / grid
    res = minimize_scalar(f, bounds=(phis[k] - step, phis[k] + step), method="bounded", options={"xatol": 1e-10})
    return min(res.fun, f(phis[k]))


def test_group_has_24_distinct_elements():
    G = clifford_group()
    assert len(G) == 24
    for i, a in enumerate(G):
        for b in G[i + 1:]:
            assert phase_distance(a.matrix, b.matrix) > 0.5


def test_group_closed_under_products():
    G = clifford_group()
    for a in G[::5]:
        for b in G[::3]:
            assert is_clifford(a.matrix @ b.matrix)


def test_named_cliffords():
    assert is_clifford(gate_unitary(h(0)))
    assert is_clifford(gate_unitary(s(0)))
    assert is_clifford(gate_unitary(rz(0, np.pi / 2)))
    assert not is_clifford(gate_unitary(rz(0, np.pi / 4)))


def test_t_gate_distance():
    # T sits halfway between I and S
    c, dist = nearest_clifford(gate_unitary(rz(0, np.pi / 4)))
    assert dist == pytest.approx(2 * np.sin(np.pi / 16))


def test_rejects_non_unitary():
    with pytest.raises(ValueError):
        nearest_clifford(np.ones((2, 2)))


@given(st.integers(0, 2**31))
def test_matches_brute_force(seed):
    U = unitary_group.rvs(2, random_state=seed)
    c, dist = nearest_clifford(U)
    brute = [brute_force_distance(U, g.matrix) for g in clifford_group()]
    assert dist == pytest.approx(min(brute), abs=1e-6)
    assert c.index == int(np.argmin(brute))


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_phase_invariance(theta, phi, lam):
    U = gate_unitary(u3(0, theta, phi, lam))
    a = nearest_clifford(U)
    b = nearest_clifford(np.exp(0.7j) * U)
    assert a[0] == b[0] and a[1] == pytest.approx(b[1], abs=1e-12)
