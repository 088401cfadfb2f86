import pytest

from adaptdd.benchmarks import benchmark, bv, load_benchmarks, qft, qpe, route_linear
from adaptdd.circuit import Circuit, GateKind, cx, measure, x
from adaptdd.decoy import ideal_distribution
from adaptdd.device import linear_chain, validate_against_device
from adaptdd.statevector import statevector_distribution


@pytest.mark.parametrize("name", sorted(load_benchmarks()))
def test_runs_on_a_chain(name):
    c = benchmark(name)
    assert validate_against_device(c, linear_chain(c.num_qubits)) == []


@pytest.mark.parametrize("name, out", [("bv4", "101"), ("bv6", "11011"), ("bv7", "110101"), ("qft6", "101101"), ("qpe5", "1010")])
def test_peaked_outputs(name, out):
    assert dict(ideal_distribution(benchmark(name)).probs) == pytest.approx({out: 1.0})


def test_qft_basis_input_is_uniform():
    d = statevector_distribution(qft(3, 5))
    assert len(d.probs) == 8
    assert all(v == pytest.approx(1 / 8) for v in d.probs.values())


def test_qft_fourier_roundtrip():
    for k in (0, 5, 13):
        assert dict(statevector_distribution(qft(4, k, "fourier")).probs) == pytest.approx({format(k, "04b"): 1.0})


def test_qpe_custom_phase():
    assert dict(statevector_distribution(qpe(4, 0.375)).probs) == pytest.approx({"011": 1.0})


def test_routing_keeps_semantics():
    c = Circuit(4, [x(0), cx(0, 3)] + [measure(q, q) for q in range(4)], 4)
    r = route_linear(c)
    assert r.count(GateKind.CNOT) == 1 + 3 * 2
    assert dict(statevector_distribution(r).probs) == pytest.approx({"1001": 1.0})


def test_bad_inputs():
    with pytest.raises(ValueError):
        bv("")
    with pytest.raises(KeyError):
        benchmark("nope")
