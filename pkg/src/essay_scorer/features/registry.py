"""Feature registry: the frozen 86-dimensional inventory and assembly."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ..textproc.vocab import TaggedSentence
from . import extractors as ex


@dataclass(frozen=True)
class FeatureCategory:
    name: str
    feature_names: tuple[str, ...]
    extract: callable


@dataclass(frozen=True)
class FeatureRegistry:
    categories: tuple[FeatureCategory, ...]

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(n for cat in self.categories for n in cat.feature_names)

    @property
    def total_dim(self) -> int:
        return len(self.feature_names)

    def fingerprint(self) -> str:
        body = "|".join(self.feature_names)
        return hashlib.sha256(body.encode()).hexdigest()[:16]

    def extract(self, sentences: list[TaggedSentence]) -> np.ndarray:
        values: list[float] = []
        for cat in self.categories:
            part = cat.extract(sentences)
            if len(part) != len(cat.feature_names):
                raise RuntimeError(
                    f"category {cat.name} produced {len(part)} values, "
                    f"expected {len(cat.feature_names)}"
                )
            values.extend(part)
        out = np.asarray(values, dtype=np.float64)
        if not np.all(np.isfinite(out)):
            bad = [n for n, v in zip(self.feature_names, out) if not np.isfinite(v)]
            raise RuntimeError(f"non-finite feature values: {bad}")
        return out


DEFAULT_REGISTRY = FeatureRegistry(
    categories=(
        FeatureCategory("length", ex.LENGTH_NAMES, ex.extract_length),
        FeatureCategory("readability", ex.READABILITY_NAMES, ex.extract_readability),
        FeatureCategory("complexity", ex.COMPLEXITY_NAMES, ex.extract_complexity),
        FeatureCategory("variation", ex.VARIATION_NAMES, ex.extract_variation),
        FeatureCategory("sentiment", ex.SENTIMENT_NAMES, ex.extract_sentiment),
    )
)

assert DEFAULT_REGISTRY.total_dim == 86


@dataclass(frozen=True)
class FeatureVector:
    """Feature values for one essay, aligned to registry order."""

    values: np.ndarray
    essay_set: int


def assemble(
    sentences: list[TaggedSentence],
    essay_set: int,
    registry: FeatureRegistry = DEFAULT_REGISTRY,
) -> FeatureVector:
    return FeatureVector(values=registry.extract(sentences), essay_set=essay_set)
