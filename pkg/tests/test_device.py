import json

import pytest

from adaptdd.circuit import Circuit, cx, h, rz, x
from adaptdd.device import CrosstalkMap, DeviceError, DeviceModel, EdgeSpec, dump_device, load_device, linear_chain, validate_against_device
from adaptdd.shipped import device_names, shipped_device


def doc(**over):
    base = {
        "name": "t",
        "qubits": 3,
        "edges": [{"pair": [0, 1], "latency_ns": 400, "error": 0.01}, {"pair": [1, 2], "latency_ns": 600, "error": 0.02}],
        "crosstalk": [{"edge": [1, 2], "spectator": 0, "kappa": 1e-4}],
    }
    base.update(over)
    return base


def test_load_and_roundtrip():
    d = load_device(json.dumps(doc()))
    assert d.cnot_latency(2, 1) == 600
    assert d.crosstalk.kappa((2, 1), 0) == 1e-4
    again = load_device(dump_device(d))
    assert again.to_dict() == d.to_dict()


@pytest.mark.parametrize(
    "over, path",
    [
        ({"qubits": 0}, "qubits"),
        ({"edges": [{"pair": [0, 0], "latency_ns": 1, "error": 0}]}, "edges/0/pair"),
        ({"edges": [{"pair": [0, 5], "latency_ns": 1, "error": 0}]}, "edges/0/pair"),
        ({"edges": [{"pair": [0, 1], "latency_ns": -1, "error": 0}]}, "edges/0/latency_ns"),
        ({"crosstalk": [{"edge": [0, 2], "spectator": 1, "kappa": 1}]}, "crosstalk/0/edge"),
        ({"crosstalk": [{"edge": [1, 2], "spectator": 1, "kappa": 1}]}, "crosstalk/0/spectator"),
    ],
)
def test_errors_report_field_path(over, path):
    with pytest.raises(DeviceError) as err:
        load_device(json.dumps(doc(**over)))
    assert err.value.path == path


def test_latency_rules():
    d = linear_chain(3)
    assert d.latency(x(0)) == 35
    assert d.latency(rz(0, 1.0)) == 0
    assert d.latency(cx(1, 2)) == 400


def test_negative_kappa_rejected():
    with pytest.raises(DeviceError):
        CrosstalkMap({((0, 1), 2): -1.0})


def test_validate_against_device():
    d = linear_chain(3)
    c = Circuit(3, [h(0), cx(0, 2)], 0)
    problems = validate_against_device(c, d)
    assert len(problems) == 1 and "no edge (0,2)" in problems[0]


@pytest.mark.parametrize("name", device_names())
def test_shipped_devices_load(name):
    d = shipped_device(name)
    assert d.num_qubits >= 6
    for e, s in d.edges.items():
        assert 0 < s.latency_ns < 1000


def test_toronto_like_latency_profile():
    d = shipped_device("toronto_like")
    lat = [s.latency_ns for s in d.edges.values()]
    assert d.num_qubits == 27 and len(lat) == 28
    assert (min(lat), max(lat)) == (242, 860)
    assert sum(lat) / len(lat) == pytest.approx(441, abs=0.5)
