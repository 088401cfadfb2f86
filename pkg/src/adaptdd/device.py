"""Target-machine description: connectivity, latencies, error rates, crosstalk.

Device files are JSON::

    {
      "name": "chain5",                 optional
      "qubits": 5,
      "sq_latency_ns": 35,              single-qubit pulse (X, SX, ...)
      "rz_latency_ns": 0,               virtual Z-type gates
      "meas_latency_ns": 0,
      "dd_buffer_ns": 10,
      "sq_error": 0.001,
      "meas_error": 0.02,
      "gate_latency_ns": {"h": 40},     optional per-kind overrides
      "edges": [{"pair": [0, 1], "latency_ns": 400, "error": 0.01}, ...],
      "crosstalk": [{"edge": [0, 1], "spectator": 3, "kappa": 1e-3}, ...]
    }

``kappa`` is a drift rate in rad/ns added to the spectator's idle phase rate
while a CNOT runs on ``edge``. Omitted scalar fields take the defaults above.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import jsonschema

from .circuit import Circuit, Gate, GateKind, VIRTUAL

Edge = tuple[int, int]

_NUM = {"type": "number"}
_RATE = {"type": "number", "minimum": 0, "maximum": 1}
_NONNEG = {"type": "number", "minimum": 0}
_PAIR = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}

DEVICE_SCHEMA = {
    "type": "object",
    "required": ["qubits", "edges"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "qubits": {"type": "integer", "minimum": 1},
        "sq_latency_ns": _NONNEG,
        "rz_latency_ns": _NONNEG,
        "meas_latency_ns": _NONNEG,
        "dd_buffer_ns": _NONNEG,
        "sq_error": _RATE,
        "meas_error": _RATE,
        "gate_latency_ns": {
            "type": "object",
            "propertyNames": {"enum": [k.value for k in GateKind if k not in (GateKind.CNOT, GateKind.DELAY, GateKind.BARRIER)]},
            "additionalProperties": _NONNEG,
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pair", "latency_ns", "error"],
                "additionalProperties": False,
                "properties": {"pair": _PAIR, "latency_ns": _NONNEG, "error": _RATE},
            },
        },
        "crosstalk": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["edge", "spectator", "kappa"],
                "additionalProperties": False,
                "properties": {"edge": _PAIR, "spectator": {"type": "integer", "minimum": 0}, "kappa": _NONNEG},
            },
        },
    },
}


class DeviceError(ValueError):
    """Schema or invariant violation in a device description; ``path`` locates the field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class EdgeSpec:
    latency_ns: float
    error: float


@dataclass(frozen=True)
class CrosstalkMap:
    """Drift amplification per (edge, spectator) pair, in rad/ns."""

    entries: Mapping[tuple[Edge, int], float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (edge, spec), kappa in dict(self.entries).items():
            if kappa < 0:
                raise DeviceError(f"kappa must be >= 0, got {kappa}")
            clean[(edge_key(*edge), int(spec))] = float(kappa)
        object.__setattr__(self, "entries", MappingProxyType(clean))

    def kappa(self, edge: Edge, spectator: int) -> float:
        return self.entries.get((edge_key(*edge), spectator), 0.0)

    def for_spectator(self, spectator: int) -> dict[Edge, float]:
        return {e: k for (e, s), k in self.entries.items() if s == spectator and k > 0}

    def scaled(self, factor: float) -> "CrosstalkMap":
        return CrosstalkMap({key: k * factor for key, k in self.entries.items()})

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, CrosstalkMap) and dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash(tuple(sorted(self.entries.items())))


@dataclass(frozen=True)
class DeviceModel:
    num_qubits: int
    edges: Mapping[Edge, EdgeSpec]
    sq_latency_ns: float = 35.0
    rz_latency_ns: float = 0.0
    meas_latency_ns: float = 0.0
    dd_buffer_ns: float = 10.0
    sq_error: float = 1e-3
    meas_error: float = 2e-2
    gate_latency_ns: Mapping[str, float] = field(default_factory=dict)
    crosstalk: CrosstalkMap = field(default_factory=CrosstalkMap)
    name: str = ""

    def __post_init__(self):
        edges = {}
        for (a, b), spec in dict(self.edges).items():
            if a == b:
                raise DeviceError(f"self-edge ({a},{b})", "edges")
            for q in (a, b):
                if not 0 <= q < self.num_qubits:
                    raise DeviceError(f"edge ({a},{b}) references qubit {q} outside 0..{self.num_qubits - 1}", "edges")
            if not isinstance(spec, EdgeSpec):
                spec = EdgeSpec(*spec)
            edges[edge_key(a, b)] = spec
        object.__setattr__(self, "edges", MappingProxyType(edges))
        object.__setattr__(self, "gate_latency_ns", MappingProxyType(dict(self.gate_latency_ns)))
        for (edge, spec), _ in self.crosstalk.entries.items():
            if edge not in edges:
                raise DeviceError(f"crosstalk references unknown edge {list(edge)}", "crosstalk")
            if not 0 <= spec < self.num_qubits:
                raise DeviceError(f"crosstalk spectator {spec} out of range", "crosstalk")
            if spec in edge:
                raise DeviceError(f"crosstalk spectator {spec} lies on its own edge {list(edge)}", "crosstalk")

    def __hash__(self):
        return hash((self.name, self.num_qubits, tuple(sorted(self.edges.items()))))

    def has_edge(self, a: int, b: int) -> bool:
        return edge_key(a, b) in self.edges

    def cnot_latency(self, a: int, b: int) -> float:
        try:
            return self.edges[edge_key(a, b)].latency_ns
        except KeyError:
            raise DeviceError(f"no edge ({a},{b})") from None

    def cnot_error(self, a: int, b: int) -> float:
        return self.edges[edge_key(a, b)].error

    def latency(self, g: Gate) -> float:
        """Duration of one gate on this device, in ns."""
        kind = g.kind
        if kind is GateKind.DELAY:
            return g.params[0]
        if kind is GateKind.BARRIER:
            return 0.0
        if kind is GateKind.CNOT:
            return self.cnot_latency(*g.qubits)
        if kind.value in self.gate_latency_ns:
            return self.gate_latency_ns[kind.value]
        if kind is GateKind.MEASURE:
            return self.meas_latency_ns
        if kind in VIRTUAL:
            return self.rz_latency_ns
        return self.sq_latency_ns

    @property
    def x_latency_ns(self) -> float:
        return self.gate_latency_ns.get("x", self.sq_latency_ns)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "qubits": self.num_qubits,
            "sq_latency_ns": self.sq_latency_ns,
            "rz_latency_ns": self.rz_latency_ns,
            "meas_latency_ns": self.meas_latency_ns,
            "dd_buffer_ns": self.dd_buffer_ns,
            "sq_error": self.sq_error,
            "meas_error": self.meas_error,
            "gate_latency_ns": dict(sorted(self.gate_latency_ns.items())),
            "edges": [
                {"pair": list(e), "latency_ns": s.latency_ns, "error": s.error}
                for e, s in sorted(self.edges.items())
            ],
            "crosstalk": [
                {"edge": list(e), "spectator": q, "kappa": k}
                for (e, q), k in sorted(self.crosstalk.entries.items())
            ],
        }
        return out


def device_from_dict(data: dict) -> DeviceModel:
    """Validate a parsed device document and build the model."""
    validator = jsonschema.Draft7Validator(DEVICE_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise DeviceError(err.message, path)
    n = data["qubits"]
    edges: dict[Edge, EdgeSpec] = {}
    for i, e in enumerate(data["edges"]):
        a, b = e["pair"]
        path = f"edges/{i}/pair"
        if a == b:
            raise DeviceError("self-edge", path)
        if a >= n or b >= n:
            raise DeviceError(f"qubit index out of range for {n} qubits", path)
        if edge_key(a, b) in edges:
            raise DeviceError(f"duplicate edge {sorted((a, b))}", path)
        edges[edge_key(a, b)] = EdgeSpec(float(e["latency_ns"]), float(e["error"]))
    xt: dict[tuple[Edge, int], float] = {}
    for i, c in enumerate(data.get("crosstalk", [])):
        edge, spec = edge_key(*c["edge"]), c["spectator"]
        if edge not in edges:
            raise DeviceError(f"unknown edge {list(edge)}", f"crosstalk/{i}/edge")
        if spec >= n or spec in edge:
            raise DeviceError(f"invalid spectator {spec}", f"crosstalk/{i}/spectator")
        if (edge, spec) in xt:
            raise DeviceError("duplicate crosstalk entry", f"crosstalk/{i}")
        xt[(edge, spec)] = float(c["kappa"])
    defaults = DeviceModel(1, {})
    kw = {
        k: float(data.get(k, getattr(defaults, k)))
        for k in ("sq_latency_ns", "rz_latency_ns", "meas_latency_ns", "dd_buffer_ns", "sq_error", "meas_error")
    }
    return DeviceModel(
        num_qubits=n,
        edges=edges,
        gate_latency_ns={k: float(v) for k, v in data.get("gate_latency_ns", {}).items()},
        crosstalk=CrosstalkMap(xt),
        name=data.get("name", ""),
        **kw,
    )


def load_device(source) -> DeviceModel:
    """Load a device file (path, file object, or JSON text).

    Raises :class:`DeviceError` with the offending field path on schema or
    invariant violations.
    """
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DeviceError(f"invalid JSON: {exc}") from None
    return device_from_dict(data)


def dump_device(d: DeviceModel) -> str:
    return json.dumps(d.to_dict(), indent=2, sort_keys=True) + "\n"


def linear_chain(n: int, latency_ns: float = 400.0, error: float = 1e-2, **kw) -> DeviceModel:
    """Convenience constructor for an ``n``-qubit line with uniform CNOTs."""
    edges = {(i, i + 1): EdgeSpec(latency_ns, error) for i in range(n - 1)}
    return DeviceModel(n, edges, name=kw.pop("name", f"chain{n}"), **kw)


def validate_against_device(c: Circuit, d: DeviceModel) -> list[str]:
    """List every out-of-range qubit and every CNOT on a non-edge; empty means ok."""
    problems = []
    for i, g in enumerate(c.gates):
        bad = [q for q in g.qubits if q >= d.num_qubits]
        if bad:
            problems.append(f"gate {i} ({g}): qubit {bad[0]} not on device ({d.num_qubits} qubits)")
            continue
        if g.kind is GateKind.CNOT and not d.has_edge(*g.qubits):
            a, b = sorted(g.qubits)
            problems.append(f"gate {i} ({g}): no edge ({a},{b})")
    return problems
