"""The scoring network: parameters, forward/backward, optimizer, checkpoints."""

from .checkpoint import load_checkpoint, save_checkpoint
from .network import ForwardTrace, backward, forward, lstm_forward, mse_loss
from .optim import RmspropState, clip_gradients, rmsprop_step
from .params import ModelConfig, ModelParams, init_params

__all__ = [
    "ModelConfig", "ModelParams", "init_params",
    "forward", "backward", "lstm_forward", "mse_loss", "ForwardTrace",
    "RmspropState", "rmsprop_step", "clip_gradients",
    "save_checkpoint", "load_checkpoint",
]
