"""RMSprop with running mean-square gradient accumulators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import ModelParams


@dataclass
class RmspropState:
    learning_rate: float = 0.001
    decay: float = 0.9
    epsilon: float = 1e-7
    accumulators: dict[str, np.ndarray] = field(default_factory=dict)

    @staticmethod
    def for_params(params: ModelParams, learning_rate: float = 0.001,
                   decay: float = 0.9, epsilon: float = 1e-7) -> "RmspropState":
        return RmspropState(
            learning_rate=learning_rate,
            decay=decay,
            epsilon=epsilon,
            accumulators={k: np.zeros_like(v) for k, v in params.as_dict().items()},
        )


def rmsprop_step(params: ModelParams, grads: dict[str, np.ndarray],
                 state: RmspropState) -> None:
    """In-place update: acc <- rho*acc + (1-rho)*g^2; theta -= lr*g/(sqrt(acc)+eps)."""
    for name, param in params.as_dict().items():
        grad = grads[name]
        if not np.all(np.isfinite(grad)):
            raise FloatingPointError(f"non-finite gradient for parameter {name}")
        acc = state.accumulators[name]
        acc *= state.decay
        acc += (1.0 - state.decay) * grad**2
        param -= state.learning_rate * grad / (np.sqrt(acc) + state.epsilon)


def clip_gradients(grads: dict[str, np.ndarray], max_norm: float) -> float:
    """Scale all gradients so the global L2 norm is at most max_norm."""
    total = float(np.sqrt(sum(float((g**2).sum()) for g in grads.values())))
    if total > max_norm > 0:
        scale = max_norm / total
        for g in grads.values():
            g *= scale
    return total
