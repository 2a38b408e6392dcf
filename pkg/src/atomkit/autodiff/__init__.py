"""Float64 tensors with reverse-mode autodiff, optimizer and checkpoints."""

from __future__ import annotations

from .checkpoint import MAGIC, load_checkpoint, save_checkpoint
from .functional import (
    concat,
    dropout,
    matmul,
    rms_norm,
    rotate_pairs,
    sigmoid,
    silu,
    softmax,
    squared_error,
    swiglu,
)
from .gradcheck import gradcheck, numerical_gradient
from .optim import AdamWAMSGrad, OptimizerState, adamw_amsgrad_step, clip_grad_norm
from .tensor import Tensor, is_grad_enabled, no_grad, parameter

__all__ = [
    "MAGIC",
    "AdamWAMSGrad",
    "OptimizerState",
    "Tensor",
    "adamw_amsgrad_step",
    "clip_grad_norm",
    "concat",
    "dropout",
    "gradcheck",
    "is_grad_enabled",
    "load_checkpoint",
    "matmul",
    "no_grad",
    "numerical_gradient",
    "parameter",
    "rms_norm",
    "rotate_pairs",
    "save_checkpoint",
    "sigmoid",
    "silu",
    "softmax",
    "squared_error",
    "swiglu",
]
