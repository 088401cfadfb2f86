import math
import random

import pytest
from hypothesis import HealthCheck, settings

from adaptdd.circuit import Circuit, cx, h, measure, s, u3, x
from adaptdd.device import DeviceModel, EdgeSpec

settings.register_profile("ci", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture
def ladder_device():
    # H 40 ns, CNOT q1-q2 400 ns, CNOT q0-q1 600 ns
    return DeviceModel(3, {(0, 1): EdgeSpec(600, 0.01), (1, 2): EdgeSpec(400, 0.01)}, sq_latency_ns=40, name="ladder")


@pytest.fixture
def ladder_circuit():
    return Circuit(3, [h(1), cx(1, 2), cx(0, 1), measure(0, 0), measure(1, 1), measure(2, 2)], 3)


def random_circuit(n: int, depth: int, rng: random.Random, clifford: bool = False) -> Circuit:
    """Random nearest-neighbour circuit on a line, every qubit measured."""
    gates = []
    for _ in range(depth):
        q = rng.randrange(n)
        if n > 1 and rng.random() < 0.35:
            a = rng.randrange(n - 1)
            gates.append(cx(a, a + 1) if rng.random() < 0.5 else cx(a + 1, a))
        elif clifford:
            gates.append(rng.choice([h, s, x])(q))
        else:
            gates.append(u3(q, rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi)))
    gates += [measure(q, q) for q in range(n)]
    return Circuit(n, gates, n)



ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(request, capsys):
    """Record one pass/fail line for an acceptance criterion.

    Usage: ``criterion(k, ok, detail)``; the line is printed immediately and
    repeated in the terminal summary.
    """
    def record(number: int, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}"
        ACCEPTANCE[number] = line
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
