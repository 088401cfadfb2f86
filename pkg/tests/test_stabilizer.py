import random

import pytest
from hypothesis import given, strategies as st

from adaptdd.circuit import Circuit, cx, h, measure, u1, x
from adaptdd.metrics import tvd
from adaptdd.stabilizer import NotCliffordError, stabilizer_distribution
from adaptdd.statevector import statevector_distribution

from conftest import random_circuit


def test_bell_state():
    c = Circuit(2, [h(0), cx(0, 1), measure(0, 0), measure(1, 1)], 2)
    assert dict(stabilizer_distribution(c).probs) == {"00": 0.5, "11": 0.5}


def test_deterministic_output():
    c = Circuit(3, [x(0), cx(0, 2), measure(0, 0), measure(2, 1)], 2)
    assert dict(stabilizer_distribution(c).probs) == {"11": 1.0}


def test_rejects_non_clifford():
    c = Circuit(1, [u1(0, 0.3), measure(0, 0)], 1)
    with pytest.raises(NotCliffordError):
        stabilizer_distribution(c)


@given(st.integers(1, 8), st.integers(0, 40), st.integers(0, 2**31))
def test_agrees_with_statevector(n, depth, seed):
    c = random_circuit(n, depth, random.Random(seed), clifford=True)
    assert tvd(stabilizer_distribution(c), statevector_distribution(c)) <= 1e-9
