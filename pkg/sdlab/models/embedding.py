from __future__ import absolute_import, division

import numpy as np

from sdlab.errors import IllegalArgumentError


def sinusoidal_embedding(t, dim, max_period=10000.0):
    """[N] integer steps -> [N, dim] features, sines then cosines."""
    if dim < 2 or dim % 2:
        raise IllegalArgumentError('embedding dim must be even and >= 2, got %r' % (dim,))
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    half = dim // 2
    freqs = np.exp(-np.log(max_period) * np.arange(half) / half)
    args = t[:, None] * freqs[None, :]
    return np.concatenate([np.sin(args), np.cos(args)], axis=1)
