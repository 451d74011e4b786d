from __future__ import absolute_import

from sdlab.errors import ConfigurationError
from sdlab.models.base import Module
from sdlab.models.layers import Conv2d, Embedding, Linear
from sdlab.models.embedding import sinusoidal_embedding
from sdlab.models.mlp import MlpDenoiser, mlp_forward
from sdlab.models.gating import (
    AvgPoolDown, NearestUp, WaveletGate, WgDown, WgUp, wavelet_gate, wg_down,
    wg_up)
from sdlab.models.unet import ResBlock, WgUnet, unet_forward
from sdlab.util import make_rng


ARCHITECTURES = {
    'mlp': MlpDenoiser,
    'wg_unet': WgUnet,
}


def build_model(descriptor, rng=None):
    """Instantiate a model from its ``descriptor()`` dict.

    Parameters are freshly initialized from ``rng`` (seed 0 when omitted);
    checkpoint loading overwrites them afterwards.
    """
    descriptor = dict(descriptor)
    arch = descriptor.pop('arch', None)
    if arch not in ARCHITECTURES:
        raise ConfigurationError('unknown architecture %r, expected one of %s'
                                 % (arch, sorted(ARCHITECTURES)))
    if rng is None:
        rng = make_rng(0)
    return ARCHITECTURES[arch](rng=rng, **descriptor)


__all__ = [
    'Module', 'Conv2d', 'Embedding', 'Linear', 'sinusoidal_embedding',
    'MlpDenoiser', 'mlp_forward', 'AvgPoolDown', 'NearestUp', 'WaveletGate',
    'WgDown', 'WgUp', 'wavelet_gate', 'wg_down', 'wg_up', 'ResBlock',
    'WgUnet', 'unet_forward', 'ARCHITECTURES', 'build_model',
]
