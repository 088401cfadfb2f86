"""Normalized histograms over measurement bitstrings (classical bit 0 leftmost)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

_DROP = 1e-15


@dataclass(frozen=True)
class Distribution:
    probs: Mapping[str, float]
    shots: int | None = None
    counts: Mapping[str, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        probs = dict(sorted(self.probs.items()))
        widths = {len(k) for k in probs}
        if len(widths) > 1:
            raise ValueError(f"bitstrings of mixed length {sorted(widths)}")
        total = sum(probs.values())
        if probs and abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "probs", MappingProxyType(probs))
        if self.counts is not None:
            object.__setattr__(self, "counts", MappingProxyType(dict(sorted(self.counts.items()))))

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "Distribution":
        shots = int(sum(counts.values()))
        if shots < 1:
            raise ValueError("empty histogram")
        counts = {k: int(v) for k, v in counts.items() if v}
        return cls({k: v / shots for k, v in counts.items()}, shots, counts)

    @classmethod
    def from_vector(cls, probs: np.ndarray, num_bits: int) -> "Distribution":
        """From a dense vector indexed by the register integer (bit 0 most significant)."""
        probs = np.asarray(probs, dtype=float)
        keep = np.flatnonzero(probs > _DROP)
        total = probs[keep].sum()
        return cls({format(int(i), f"0{num_bits}b") if num_bits else "": float(probs[i] / total) for i in keep})

    @property
    def num_bits(self) -> int:
        return len(next(iter(self.probs))) if self.probs else 0

    def __getitem__(self, key: str) -> float:
        return self.probs.get(key, 0.0)

    def __iter__(self):
        return iter(self.probs)

    def items(self):
        return self.probs.items()

    def entropy(self) -> float:
        p = np.array([v for v in self.probs.values() if v > 0])
        return float(-(p * np.log2(p)).sum())

    def to_dict(self) -> dict:
        if self.counts is not None:
            return {"shots": self.shots, "counts": dict(self.counts)}
        return {"shots": None, "probabilities": dict(self.probs)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Distribution":
        if "counts" in data:
            return cls.from_counts(data["counts"])
        return cls(data["probabilities"])
