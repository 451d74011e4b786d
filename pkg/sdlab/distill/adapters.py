from __future__ import absolute_import

import numpy as np

from sdlab.models.base import Module
from sdlab.models.layers import Conv2d


class AdapterSet(Module):
    """One 1x1 convolution per feature pair, student channels -> teacher channels.

    Arguments:
        pairs (list): (teacher name, student name) tuples
        teacher_channels, student_channels (dict): channels per feature name
        rng (numpy.random.Generator): initializer
        identity (bool): start as the identity on the shared channels
    """
    def __init__(self, pairs, teacher_channels, student_channels, rng, identity=False):
        self.pairs = [tuple(p) for p in pairs]
        self.adapters = []
        for t_name, s_name in self.pairs:
            conv = Conv2d(student_channels[s_name], teacher_channels[t_name], 1, rng,
                          zero_init=identity)
            if identity:
                shared = min(conv.in_channels, conv.out_channels)
                weight = np.zeros(conv.weight.shape)
                weight[np.arange(shared), np.arange(shared), 0, 0] = 1.0
                conv.weight.data = weight
            self.adapters.append(conv)

    def forward(self, student_features):
        """Adapted student activations in pair order."""
        return [adapter(student_features[s_name])
                for adapter, (_, s_name) in zip(self.adapters, self.pairs)]

    def descriptor(self):
        return {'pairs': [list(p) for p in self.pairs]}
