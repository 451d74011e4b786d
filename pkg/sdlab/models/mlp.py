from __future__ import absolute_import

import logging

import numpy as np

from sdlab.errors import ShapeMismatchError
from sdlab.models.base import Module
from sdlab.models.embedding import sinusoidal_embedding
from sdlab.models.layers import Linear
from sdlab.tensor import Tensor, as_tensor, concat, reshape, silu

log = logging.getLogger(__name__)


class MlpDenoiser(Module):
    """Two-layer feed-forward noise predictor for 1D signals.

    The sinusoidal time embedding is concatenated to x_t, passed through a
    hidden layer of width ``hidden`` with SiLU, and projected back to the
    signal length.

    Keyword Arguments:
        length (int): signal length. Default: 64
        hidden (int): hidden units M. Default: 64
        time_dim (int): time embedding size. Default: 32
    """
    DEFAULT_CONFIG = {
        'length': 64,
        'hidden': 64,
        'time_dim': 32,
    }

    def __init__(self, rng=None, **configs):
        self._configure(configs)
        length = self.config['length']
        hidden = self.config['hidden']
        time_dim = self.config['time_dim']
        self.fc1 = Linear(length + time_dim, hidden, rng)
        self.fc2 = Linear(hidden, length, rng)
        log.debug('MlpDenoiser(length=%d, hidden=%d): %d parameters',
                  length, hidden, self.num_parameters())

    def forward(self, x_t, t, cond=None):
        x_t = as_tensor(x_t)
        single = x_t.ndim == 1
        if single:
            x_t = reshape(x_t, (1, x_t.shape[0]))
        if x_t.ndim != 2 or x_t.shape[1] != self.config['length']:
            raise ShapeMismatchError('mlp_forward', x_t.shape, (self.config['length'],))
        t = np.broadcast_to(np.asarray(t), (x_t.shape[0],))
        emb = Tensor(sinusoidal_embedding(t, self.config['time_dim']))
        h = silu(self.fc1(concat([x_t, emb], axis=1)))
        out = self.fc2(h)
        if single:
            out = reshape(out, (self.config['length'],))
        return out

    def descriptor(self):
        desc = {'arch': 'mlp'}
        desc.update(self.config)
        return desc


def mlp_forward(model, x_t, t):
    return model(x_t, t)
