"""Wavelet Gating resamplers and their plain counterparts.

A gate looks at globally pooled features and emits one sigmoid weight per
(band, output channel). WG-Down gates the four Haar bands of its input and
sums them; WG-Up reads its input as four band chunks (LL, LH, HL, HH along
channels), gates them and applies the inverse transform.
"""
from __future__ import absolute_import

import logging

import numpy as np

from sdlab.errors import ShapeMismatchError
from sdlab.models.base import Module
from sdlab.models.layers import Conv2d, Linear
from sdlab.spectral.wavelet import dwt_haar_2d, idwt_haar_2d
from sdlab.structs import GatingVector, WaveletBands
from sdlab.tensor import (
    add, as_tensor, avgpool2x2, avgpool_global, chunk, mul, reshape, sigmoid,
    silu, upsample_nearest2x)

log = logging.getLogger(__name__)


class WaveletGate(Module):
    """g = sigmoid(FFN(avgpool(X))), FFN = Linear(C, C) -> SiLU -> Linear(C, 4 C_out)"""
    def __init__(self, in_channels, out_channels, rng):
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.fc1 = Linear(in_channels, in_channels, rng)
        self.fc2 = Linear(in_channels, 4 * out_channels, rng)

    def forward(self, x):
        x = as_tensor(x)
        single = x.ndim == 3
        if single:
            x = reshape(x, (1,) + x.shape)
        if x.ndim != 4 or x.shape[1] != self.in_channels:
            raise ShapeMismatchError('wavelet_gate', x.shape, (self.in_channels,),
                                     'gate expects %d channels' % (self.in_channels,))
        pooled = avgpool_global(x)
        g = sigmoid(self.fc2(silu(self.fc1(pooled))))
        bands = chunk(g, 4, axis=1)
        if single:
            bands = [reshape(b, (self.out_channels,)) for b in bands]
        return GatingVector(*bands)


def wavelet_gate(x, gate):
    return gate(x)


def _gate_factor(g, x):
    """Shape a gate so it scales x [N, C, H, W] per channel."""
    g = as_tensor(g)
    if g.ndim == 0:
        return g
    if g.ndim == 1:
        return reshape(g, (1, g.shape[0], 1, 1))
    return reshape(g, (g.shape[0], g.shape[1], 1, 1))


def _batched(x, op):
    x = as_tensor(x)
    if x.ndim == 3:
        return reshape(x, (1,) + x.shape), True
    if x.ndim != 4:
        raise ShapeMismatchError(op, x.shape, (), 'need [C, H, W] or [N, C, H, W]')
    return x, False


def _gates_array(gates):
    return GatingVector(*[np.array(as_tensor(g).data) for g in gates])


def wg_down(x, gate=None, gates=None):
    """Haar-analyse x and return sum_i g_i * band_i at half resolution.

    Either a WaveletGate module or explicit ``gates`` must be given.
    Returns (output, gates used).
    """
    x, single = _batched(x, 'wg_down')
    bands = dwt_haar_2d(x)
    if gates is None:
        gates = gate(x)
    out = None
    for band, g in zip(bands, gates):
        term = mul(band, _gate_factor(g, band))
        out = term if out is None else add(out, term)
    if single:
        out = reshape(out, out.shape[1:])
    return out, gates


def wg_up(x, gate=None, gates=None):
    """Split x [N, 4C, H, W] into band chunks, gate them, inverse-transform.

    Returns (output [N, C, 2H, 2W], gates used).
    """
    x, single = _batched(x, 'wg_up')
    if x.shape[1] % 4:
        raise ShapeMismatchError('wg_up', x.shape, (4,),
                                 'channel count %d is not divisible by 4' % (x.shape[1],))
    chunks = chunk(x, 4, axis=1)
    if gates is None:
        gates = gate(x)
    gated = WaveletBands(*[mul(c, _gate_factor(g, c)) for c, g in zip(chunks, gates)])
    out = idwt_haar_2d(gated)
    if single:
        out = reshape(out, out.shape[1:])
    return out, gates


class WgDown(Module):
    def __init__(self, channels, rng):
        self.channels = channels
        self.gate = WaveletGate(channels, channels, rng)
        self.last_gates = None

    def forward(self, x, gates=None):
        out, used = wg_down(x, self.gate, gates)
        self.last_gates = _gates_array(used)
        return out


class WgUp(Module):
    """Project to 4 * out channels, then gated inverse Haar."""
    in_factor = 4

    def __init__(self, in_channels, out_channels, rng):
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.proj = Conv2d(in_channels, 4 * out_channels, 3, rng)
        self.gate = WaveletGate(4 * out_channels, out_channels, rng)
        self.last_gates = None

    def forward(self, x, gates=None):
        out, used = wg_up(self.proj(x), self.gate, gates)
        self.last_gates = _gates_array(used)
        return out


class AvgPoolDown(Module):
    """2x2 average pooling, stride 2."""
    def __init__(self, channels, rng=None):
        self.channels = channels
        self.last_gates = None

    def forward(self, x, gates=None):
        return avgpool2x2(x)


class NearestUp(Module):
    in_factor = 1

    def __init__(self, in_channels, out_channels, rng):
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.proj = Conv2d(in_channels, out_channels, 3, rng)
        self.last_gates = None

    def forward(self, x, gates=None):
        return upsample_nearest2x(self.proj(x))


RESAMPLERS = {
    'wg': (WgDown, WgUp),
    'plain': (AvgPoolDown, NearestUp),
}
