"""Fidelity and rank-agreement statistics."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .distribution import Distribution


def _probs(d) -> Mapping[str, float]:
    return d.probs if isinstance(d, Distribution) else d


def tvd(p, q) -> float:
    """Total variation distance, half the L1 distance over the union of supports."""
    p, q = _probs(p), _probs(q)
    widths = {len(k) for k in p} | {len(k) for k in q}
    if len(widths) > 1:
        raise ValueError(f"bitstring length mismatch: {sorted(widths)}")
    keys = set(p) | set(q)
    total = 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
    return min(1.0, max(0.0, total))


def fidelity(ideal, observed) -> float:
    return 1.0 - tvd(ideal, observed)


@dataclass(frozen=True)
class FidelityReport:
    fidelity: float
    tvd: float
    shots: int | None = None
    baseline_ref: float | None = None

    @classmethod
    def compare(cls, ideal: Distribution, observed: Distribution, baseline_ref=None) -> "FidelityReport":
        d = tvd(ideal, observed)
        return cls(1.0 - d, d, observed.shots, baseline_ref)

    @property
    def relative(self) -> float | None:
        if not self.baseline_ref:
            return None
        return self.fidelity / self.baseline_ref


def average_ranks(xs: Sequence[float]) -> np.ndarray:
    """1-based ranks, ties sharing the mean of the positions they occupy."""
    xs = np.asarray(xs, dtype=float)
    order = np.argsort(xs, kind="mergesort")
    ranks = np.empty(len(xs))
    i = 0
    while i < len(xs):
        j = i
        while j + 1 < len(xs) and xs[order[j + 1]] == xs[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation (Pearson correlation of average ranks)."""
    if len(xs) != len(ys):
        raise ValueError("sequences differ in length")
    if len(xs) < 3:
        raise ValueError("need at least three pairs")
    rx, ry = average_ranks(xs), average_ranks(ys)
    dx, dy = rx - rx.mean(), ry - ry.mean()
    denom = np.sqrt((dx * dx).sum() * (dy * dy).sum())
    if denom == 0:
        raise ValueError("rank correlation undefined for a constant sequence")
    return float(np.clip((dx * dy).sum() / denom, -1.0, 1.0))
