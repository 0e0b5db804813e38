"""Prompt-agnostic linguistic feature extraction (86 dimensions)."""

from .extractors import (
    COMPLEXITY_NAMES,
    LENGTH_NAMES,
    READABILITY_NAMES,
    SENTIMENT_NAMES,
    VARIATION_NAMES,
    extract_complexity,
    extract_length,
    extract_readability,
    extract_sentiment,
    extract_variation,
)
from .normalize import NormalizationStats, apply_normalization, fit_normalization
from .registry import DEFAULT_REGISTRY, FeatureRegistry, FeatureVector, assemble
from .syllables import count_syllables

__all__ = [
    "DEFAULT_REGISTRY", "FeatureRegistry", "FeatureVector", "assemble",
    "NormalizationStats", "fit_normalization", "apply_normalization",
    "count_syllables",
    "extract_length", "extract_readability", "extract_complexity",
    "extract_variation", "extract_sentiment",
    "LENGTH_NAMES", "READABILITY_NAMES", "COMPLEXITY_NAMES",
    "VARIATION_NAMES", "SENTIMENT_NAMES",
]
