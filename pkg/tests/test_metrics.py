import pytest
from hypothesis import assume, given, strategies as st
from scipy.stats import spearmanr

from adaptdd.distribution import Distribution
from adaptdd.metrics import FidelityReport, average_ranks, fidelity, spearman, tvd


def dist_strategy(bits=2):
    keys = [format(i, f"0{bits}b") for i in range(2 ** bits)]
    return st.lists(st.integers(0, 50), min_size=len(keys), max_size=len(keys)).filter(sum).map(
        lambda w: Distribution({k: v / sum(w) for k, v in zip(keys, w) if v})
    )


def test_tvd_examples():
    assert tvd({"00": 1.0}, {"11": 1.0}) == 1.0
    assert tvd({"0": 0.5, "1": 0.5}, {"0": 1.0}) == pytest.approx(0.5)
    assert fidelity({"01": 1.0}, {"01": 1.0}) == 1.0


def test_width_mismatch():
    with pytest.raises(ValueError):
        tvd({"0": 1.0}, {"00": 1.0})


@given(dist_strategy(), dist_strategy(), dist_strategy())
def test_tvd_metric(p, q, r):
    assert 0 <= tvd(p, q) <= 1
    assert tvd(p, q) == pytest.approx(tvd(q, p))
    assert tvd(p, p) == 0
    assert tvd(p, r) <= tvd(p, q) + tvd(q, r) + 1e-12


def test_fidelity_report_relative():
    ideal = Distribution({"0": 1.0})
    obs = Distribution.from_counts({"0": 75, "1": 25})
    rep = FidelityReport.compare(ideal, obs, baseline_ref=0.5)
    assert rep.fidelity == pytest.approx(0.75)
    assert rep.shots == 100
    assert rep.relative == pytest.approx(1.5)


def test_average_ranks_ties():
    assert list(average_ranks([3, 1, 3, 2])) == [3.5, 1, 3.5, 2]


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=3, max_size=30))
def test_spearman_matches_scipy(pairs):
    xs, ys = zip(*pairs)
    assume(len(set(xs)) > 1 and len(set(ys)) > 1)
    assert spearman(xs, ys) == pytest.approx(spearmanr(xs, ys)[0], abs=1e-12)


def test_spearman_degenerate():
    with pytest.raises(ValueError):
        spearman([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        spearman([1, 2], [1, 2])


def test_distribution_normalisation():
    with pytest.raises(ValueError):
        Distribution({"0": 0.3})
    with pytest.raises(ValueError):
        Distribution({"0": 0.5, "10": 0.5})
    d = Distribution.from_counts({"1": 3, "0": 1})
    assert Distribution.from_dict(d.to_dict()) == d
