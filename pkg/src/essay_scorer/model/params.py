"""Network configuration, learnable parameters and initialization."""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from ..textproc.vocab import PAD_INDEX


@dataclass(frozen=True)
class ModelConfig:
    """Architecture dimensions.  Defaults follow the reference setup:
    50-d embeddings, 100 filters of length 5, 100-d LSTM, 86 features."""

    vocab_size: int
    emb_dim: int = 50
    filters: int = 100
    window: int = 5
    hidden: int = 100
    n_features: int = 86
    dropout: float = 0.5

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class ModelParams:
    """Every learnable array of the network."""

    emb: np.ndarray          # [V, E]
    conv_w: np.ndarray       # [F, window * E]
    conv_b: np.ndarray       # [F]
    wattn_w: np.ndarray      # [F, F]
    wattn_b: np.ndarray      # [F]
    wattn_v: np.ndarray      # [F]
    lstm_wi: np.ndarray      # [H, F]
    lstm_wf: np.ndarray
    lstm_wc: np.ndarray
    lstm_wo: np.ndarray
    lstm_ui: np.ndarray      # [H, H]
    lstm_uf: np.ndarray
    lstm_uc: np.ndarray
    lstm_uo: np.ndarray
    lstm_bi: np.ndarray      # [H]
    lstm_bf: np.ndarray
    lstm_bc: np.ndarray
    lstm_bo: np.ndarray
    sattn_w: np.ndarray      # [H, H]
    sattn_b: np.ndarray      # [H]
    sattn_v: np.ndarray      # [H]
    out_w: np.ndarray        # [H + n_features]
    out_b: np.ndarray        # scalar, shape ()

    def as_dict(self) -> dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def copy(self) -> "ModelParams":
        return ModelParams(**{k: v.copy() for k, v in self.as_dict().items()})

    def zeros_like(self) -> dict[str, np.ndarray]:
        return {k: np.zeros_like(v) for k, v in self.as_dict().items()}

    def check_finite(self) -> None:
        for name, arr in self.as_dict().items():
            if not np.all(np.isfinite(arr)):
                raise FloatingPointError(f"non-finite values in parameter {name}")


def _glorot(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int):
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape)


def init_params(config: ModelConfig, seed: int) -> ModelParams:
    """Glorot-uniform weights, zero biases (forget-gate bias 1),
    embeddings uniform(-0.05, 0.05) with a frozen all-zero PAD row."""
    rng = np.random.default_rng(seed)
    v, e = config.vocab_size, config.emb_dim
    f, h = config.filters, config.hidden
    win = config.window

    emb = rng.uniform(-0.05, 0.05, size=(v, e))
    emb[PAD_INDEX] = 0.0

    def mat(rows, cols):
        return _glorot(rng, (rows, cols), cols, rows)

    def vec(n):
        return _glorot(rng, (n,), n, 1)

    out_dim = h + config.n_features
    return ModelParams(
        emb=emb,
        conv_w=mat(f, win * e),
        conv_b=np.zeros(f),
        wattn_w=mat(f, f),
        wattn_b=np.zeros(f),
        wattn_v=vec(f),
        lstm_wi=mat(h, f), lstm_wf=mat(h, f), lstm_wc=mat(h, f), lstm_wo=mat(h, f),
        lstm_ui=mat(h, h), lstm_uf=mat(h, h), lstm_uc=mat(h, h), lstm_uo=mat(h, h),
        lstm_bi=np.zeros(h), lstm_bf=np.ones(h), lstm_bc=np.zeros(h),
        lstm_bo=np.zeros(h),
        sattn_w=mat(h, h),
        sattn_b=np.zeros(h),
        sattn_v=vec(h),
        out_w=_glorot(rng, (out_dim,), out_dim, 1),
        out_b=np.zeros(()),
    )
