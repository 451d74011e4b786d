from __future__ import absolute_import

from sdlab.tensor.tensor import Function, Tensor, is_grad_enabled, no_grad
from sdlab.tensor import ops
from sdlab.tensor.ops import (
    as_tensor, add, sub, mul, scale, sigmoid, silu, relu, elementwise,
    matmul, conv2d, avgpool_global, avgpool2x2, upsample_nearest2x,
    reshape, concat, narrow, chunk, sum_all, mean_all, mse, embedding)
from sdlab.tensor.optim import AdamW, LinearDecay, adamw_step, clip_grad_norm


__all__ = [
    'Function', 'Tensor', 'is_grad_enabled', 'no_grad', 'ops',
    'as_tensor', 'add', 'sub', 'mul', 'scale', 'sigmoid', 'silu', 'relu',
    'elementwise', 'matmul', 'conv2d', 'avgpool_global', 'avgpool2x2',
    'upsample_nearest2x', 'reshape', 'concat', 'narrow', 'chunk', 'sum_all',
    'mean_all', 'mse', 'embedding',
    'AdamW', 'LinearDecay', 'adamw_step', 'clip_grad_norm',
]
