"""Versioned checkpoint container with bit-exact round-trip.

A checkpoint is an .npz archive holding every parameter array as
float64 (numpy stores them little-endian with name and shape), the
optimizer accumulators, the vocabulary, normalization stats, the model
config and the feature-registry fingerprint.
"""

from __future__ import annotations

import json

import numpy as np

from ..features.normalize import NormalizationStats
from ..features.registry import DEFAULT_REGISTRY
from ..textproc.vocab import Vocabulary
from .params import ModelConfig, ModelParams

FORMAT_VERSION = 1


def save_checkpoint(
    path,
    params: ModelParams,
    config: ModelConfig,
    vocab: Vocabulary,
    norm_stats: NormalizationStats | None = None,
    extra_config: dict | None = None,
) -> None:
    # note: np.ascontiguousarray would promote 0-d arrays to 1-d, which
    # breaks the scalar output bias on reload
    arrays: dict[str, np.ndarray] = {
        f"param/{k}": np.asarray(v, dtype=np.float64)
        for k, v in params.as_dict().items()
    }
    if norm_stats is not None:
        for essay_set in norm_stats.essay_sets:
            arrays[f"norm_min/{essay_set}"] = norm_stats.minima[essay_set]
            arrays[f"norm_max/{essay_set}"] = norm_stats.maxima[essay_set]
    meta = {
        "format_version": FORMAT_VERSION,
        "model_config": config.to_dict(),
        "vocab_entries": vocab.entries,
        "registry_fingerprint": DEFAULT_REGISTRY.fingerprint(),
        "run_config": extra_config or {},
    }
    arrays["meta"] = np.frombuffer(
        json.dumps(meta, sort_keys=True).encode(), dtype=np.uint8
    )
    np.savez(path, **arrays)


def load_checkpoint(path):
    """Returns (params, config, vocab, norm_stats, meta dict)."""
    with np.load(path) as archive:
        meta = json.loads(bytes(archive["meta"]).decode())
        if meta.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint version in {path}")
        if meta["registry_fingerprint"] != DEFAULT_REGISTRY.fingerprint():
            raise ValueError("checkpoint was built against a different feature registry")
        param_arrays = {
            key.split("/", 1)[1]: archive[key]
            for key in archive.files
            if key.startswith("param/")
        }
        norm = NormalizationStats()
        for key in archive.files:
            if key.startswith("norm_min/"):
                norm.minima[int(key.split("/", 1)[1])] = archive[key]
            elif key.startswith("norm_max/"):
                norm.maxima[int(key.split("/", 1)[1])] = archive[key]
    config = ModelConfig(**meta["model_config"])
    params = ModelParams(**param_arrays)
    vocab = Vocabulary(dict(meta["vocab_entries"]))
    return params, config, vocab, (norm if norm.minima else None), meta
