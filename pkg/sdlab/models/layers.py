from __future__ import absolute_import, division

import numpy as np

from sdlab.errors import ShapeMismatchError
from sdlab.models.base import Module
from sdlab.tensor import Tensor, add, conv2d, embedding, matmul, reshape


def _init(rng, shape, fan_in, zero_init):
    if zero_init or rng is None:
        return Tensor(np.zeros(shape), requires_grad=True)
    return Tensor(rng.standard_normal(shape) / np.sqrt(fan_in), requires_grad=True)


class Linear(Module):
    """y = x W + b on [N, in] inputs."""
    def __init__(self, in_features, out_features, rng, zero_init=False):
        self.in_features = in_features
        self.out_features = out_features
        self.weight = _init(rng, (in_features, out_features), in_features, zero_init)
        self.bias = Tensor(np.zeros(out_features), requires_grad=True)

    def forward(self, x):
        if x.ndim != 2 or x.shape[1] != self.in_features:
            raise ShapeMismatchError('linear', x.shape, self.weight.shape)
        return add(matmul(x, self.weight), reshape(self.bias, (1, self.out_features)))


class Conv2d(Module):
    """Same-padded odd-kernel convolution."""
    def __init__(self, in_channels, out_channels, kernel_size, rng, zero_init=False):
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel_size = kernel_size
        fan_in = in_channels * kernel_size * kernel_size
        self.weight = _init(rng, (out_channels, in_channels, kernel_size, kernel_size),
                            fan_in, zero_init)
        self.bias = Tensor(np.zeros(out_channels), requires_grad=True)

    def forward(self, x):
        return conv2d(x, self.weight, self.bias, stride=1, pad=self.kernel_size // 2)


class Embedding(Module):
    def __init__(self, n_rows, dim, rng):
        self.n_rows = n_rows
        self.dim = dim
        self.weight = _init(rng, (n_rows, dim), 1, False)

    def forward(self, indices):
        return embedding(self.weight, indices)
