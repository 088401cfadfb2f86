import re

import pytest
from hypothesis import given, settings, strategies as st

import adaptdd.search as search
from adaptdd.benchmarks import benchmark
from adaptdd.circuit import Circuit, cx, h, measure
from adaptdd.dd import DDMask, DDProtocol
from adaptdd.device import linear_chain
from adaptdd.noise import NoiseModel, NoisyExecutor
from adaptdd.schedule import build_gst
from adaptdd.search import SearchError, adapt_search, exhaustive_best, partition_neighborhoods, policy_compare, select_group_mask


def serial_chain(n):
    """CNOT ladder: every qubit waits while the others work."""
    return Circuit(n, [h(0)] + [cx(i, i + 1) for i in range(n - 1)] + [measure(q, q) for q in range(n)], n)


def mask_of(c):
    return re.search(r"\[\w+:([01]+)\]", c.name).group(1)


@pytest.fixture
def scored(monkeypatch):
    """Executor that scores a circuit by its DD mask through ``weights``."""
    monkeypatch.setattr(search, "fidelity", lambda ideal, observed: observed)

    def make(weights):
        def run(c):
            run.calls += 1
            return weights(mask_of(c))
        run.calls = 0
        return run
    return make


def test_select_group_mask_union():
    # "1001" best, "1011" runner-up, both above no-DD: the union is 1011
    scores = {0b0000: 0.5, 0b1001: 0.9, 0b1011: 0.8, 0b0001: 0.6}
    assert select_group_mask(scores) == 0b1011


def test_select_group_mask_runner_up_below_baseline():
    scores = {0b00: 0.7, 0b01: 0.8, 0b10: 0.6, 0b11: 0.5}
    assert select_group_mask(scores) == 0b01


def test_select_group_mask_ties_prefer_lower():
    assert select_group_mask({0: 0.5, 1: 0.5, 2: 0.5, 3: 0.5}) == 0


def test_partition_order():
    gst = build_gst(serial_chain(6), linear_chain(6))
    groups = partition_neighborhoods(gst)
    flat = [q for g in groups for q in g]
    assert sorted(flat) == list(range(6))
    assert [len(g) for g in groups] == [4, 2]
    from adaptdd.schedule import idle_time
    times = [idle_time(gst, q) for q in flat]
    assert times == sorted(times, reverse=True)


@pytest.mark.parametrize("n, evals", [(4, 16), (6, 20), (8, 32), (10, 36)])
def test_budget(scored, n, evals):
    run = scored(lambda m: 0.5)
    rep = adapt_search(serial_chain(n), linear_chain(n), DDProtocol(), run)
    assert rep.evaluations == run.calls == evals == sum(2 ** len(g) for g in rep.neighborhoods)
    assert evals <= 4 * n


def test_no_idle_qubits_no_evaluations(scored):
    run = scored(lambda m: 0.5)
    c = Circuit(2, [cx(0, 1), measure(0, 0), measure(1, 1)], 2)
    rep = adapt_search(c, linear_chain(2), DDProtocol(), run)
    assert rep.evaluations == 0 and str(rep.mask) == "00"


@settings(max_examples=25)
@given(st.lists(st.floats(-1, 1), min_size=5, max_size=5))
def test_single_group_picks_best_or_union(weights):
    # one group covering every qubit: the result is the argmax, possibly
    # OR-ed with the runner-up
    orig = search.fidelity
    search.fidelity = lambda ideal, observed: observed
    try:
        score = lambda m: sum(w for w, b in zip(weights, m) if b == "1")
        rep = adapt_search(serial_chain(5), linear_chain(5), DDProtocol(), lambda c: score(mask_of(c)), group_size=5)
    finally:
        search.fidelity = orig
    group = rep.neighborhoods[0]
    local = {k: score(str(search._with_bits([False] * 5, group, k))) for k in range(32)}
    ranked = sorted(local, key=lambda k: (-local[k], k))
    allowed = {ranked[0], ranked[0] | ranked[1]}
    assert str(rep.mask) in {str(search._with_bits([False] * 5, group, k)) for k in allowed}


def test_executor_failure_names_mask(scored):
    def boom(c):
        raise RuntimeError("backend down")
    with pytest.raises(SearchError) as err:
        adapt_search(serial_chain(3), linear_chain(3), DDProtocol(), boom)
    assert err.value.mask is not None and "backend down" in str(err.value)


def test_exhaustive_guard():
    with pytest.raises(ValueError):
        exhaustive_best(serial_chain(13), linear_chain(13), DDProtocol(), lambda c: None)


def test_exhaustive_ties_to_lower(scored):
    run = scored(lambda m: 1.0)
    best, table = exhaustive_best(serial_chain(3), linear_chain(3), DDProtocol(), run)
    assert str(best) == "000" and len(table) == 8


def test_policy_report_shape():
    d = linear_chain(4)
    ex = NoisyExecutor(d, NoiseModel(omega0=1e-4), 500, 0)
    rep = policy_compare(benchmark("bv4"), d, DDProtocol("xx"), ex)
    body = rep.to_dict()
    assert set(body) == {"mask", "neighborhoods", "decoy_evaluations", "protocol", "decoy", "policies"}
    assert set(body["policies"]) == {"no_dd", "all_dd", "adapt", "runtime_best"}
    assert body["policies"]["no_dd"]["relative"] == pytest.approx(1.0)
    assert body["policies"]["runtime_best"]["fidelity"] >= body["policies"]["all_dd"]["fidelity"]
    assert body["protocol"] == "xx"
