"""Set-wise min-max normalization of feature vectors.

Each essay set's features are scaled independently to [0, 1] using the
min/max observed over that set's available essays.  Constant features
map to 0; out-of-range values at apply time clamp into [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .registry import FeatureVector


@dataclass
class NormalizationStats:
    """Per-set, per-feature (min, max) observed over available essays."""

    minima: dict[int, np.ndarray] = field(default_factory=dict)
    maxima: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def essay_sets(self) -> list[int]:
        return sorted(self.minima)


def fit_normalization(vectors: list[FeatureVector]) -> NormalizationStats:
    if not vectors:
        raise ValueError("cannot fit normalization on zero vectors")
    stats = NormalizationStats()
    by_set: dict[int, list[np.ndarray]] = {}
    for vec in vectors:
        by_set.setdefault(vec.essay_set, []).append(vec.values)
    for essay_set, rows in by_set.items():
        stacked = np.stack(rows)
        stats.minima[essay_set] = stacked.min(axis=0)
        stats.maxima[essay_set] = stacked.max(axis=0)
    return stats


def apply_normalization(vec: FeatureVector, stats: NormalizationStats) -> FeatureVector:
    if vec.essay_set not in stats.minima:
        raise KeyError(f"no normalization stats for essay set {vec.essay_set}")
    lo = stats.minima[vec.essay_set]
    hi = stats.maxima[vec.essay_set]
    span = hi - lo
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = np.where(span > 0, (vec.values - lo) / np.where(span > 0, span, 1.0), 0.0)
    return FeatureVector(values=np.clip(scaled, 0.0, 1.0), essay_set=vec.essay_set)
