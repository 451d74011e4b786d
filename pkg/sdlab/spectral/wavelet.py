"""Single-level orthonormal Haar transforms.

On a 2x2 block::

    a b
    c d

the analysis is

    ll = (a + b + c + d) / 2      lh = (a - b + c - d) / 2
    hl = (a + b - c - d) / 2      hh = (a - b - c + d) / 2

``lh`` carries horizontal-frequency detail (vertical edges), ``hl``
vertical-frequency detail. The transform is orthonormal, so its
transpose is its inverse and both serve as each other's backward rule.

The packed form stacks the four bands along the channel axis in the order
(LL, LH, HL, HH): [..., C, H, W] -> [..., 4C, H/2, W/2].
"""
from __future__ import absolute_import, division

import numpy as np

from sdlab.errors import ShapeMismatchError
from sdlab.structs import WaveletBands
from sdlab.tensor import Function, as_tensor, chunk, concat, narrow

_SQRT2 = np.sqrt(2.0)


def _analysis_2d(x):
    if x.ndim < 3:
        raise ShapeMismatchError('dwt_haar_2d', x.shape, (), 'need [..., C, H, W]')
    h, w = x.shape[-2:]
    if h % 2 or w % 2:
        raise ShapeMismatchError('dwt_haar_2d', x.shape, (2, 2), 'spatial dims must be even')
    a = x[..., 0::2, 0::2]
    b = x[..., 0::2, 1::2]
    c = x[..., 1::2, 0::2]
    d = x[..., 1::2, 1::2]
    ll = (a + b + c + d) / 2.0
    lh = (a - b + c - d) / 2.0
    hl = (a + b - c - d) / 2.0
    hh = (a - b - c + d) / 2.0
    return np.concatenate([ll, lh, hl, hh], axis=-3)


def _synthesis_2d(packed):
    if packed.ndim < 3:
        raise ShapeMismatchError('idwt_haar_2d', packed.shape, (), 'need [..., 4C, H, W]')
    channels = packed.shape[-3]
    if channels % 4:
        raise ShapeMismatchError('idwt_haar_2d', packed.shape, (4,),
                                 'channel count %d is not divisible by 4' % (channels,))
    ll, lh, hl, hh = np.split(packed, 4, axis=-3)
    out = np.empty(ll.shape[:-2] + (2 * ll.shape[-2], 2 * ll.shape[-1]))
    out[..., 0::2, 0::2] = (ll + lh + hl + hh) / 2.0
    out[..., 0::2, 1::2] = (ll - lh + hl - hh) / 2.0
    out[..., 1::2, 0::2] = (ll + lh - hl - hh) / 2.0
    out[..., 1::2, 1::2] = (ll - lh - hl + hh) / 2.0
    return out


class HaarAnalysis2d(Function):
    def forward(self, x):
        return _analysis_2d(x)

    def backward(self, grad):
        return (_synthesis_2d(grad),)


class HaarSynthesis2d(Function):
    def forward(self, packed):
        return _synthesis_2d(packed)

    def backward(self, grad):
        return (_analysis_2d(grad),)


def haar_analysis(x):
    """Packed 2D analysis: [..., C, H, W] -> [..., 4C, H/2, W/2]."""
    return HaarAnalysis2d.apply(as_tensor(x))


def haar_synthesis(packed):
    """Packed 2D synthesis: [..., 4C, H, W] -> [..., C, 2H, 2W]."""
    return HaarSynthesis2d.apply(as_tensor(packed))


def dwt_haar_2d(x):
    """Split ``x`` of shape [..., C, H, W] into WaveletBands.

    Raises:
        ShapeMismatchError: H or W is odd
    """
    return WaveletBands(*chunk(haar_analysis(x), 4, axis=-3))


def idwt_haar_2d(bands):
    """Exact inverse of :func:`dwt_haar_2d`."""
    ll, lh, hl, hh = [as_tensor(b) for b in bands]
    for other in (lh, hl, hh):
        if other.shape != ll.shape:
            raise ShapeMismatchError('idwt_haar_2d', ll.shape, other.shape, 'band shapes differ')
    return haar_synthesis(concat([ll, lh, hl, hh], axis=-3))


class HaarAnalysis1d(Function):
    def forward(self, x):
        n = x.shape[-1]
        if n % 2:
            raise ShapeMismatchError('dwt_haar_1d', x.shape, (2,), 'length must be even')
        a, b = x[..., 0::2], x[..., 1::2]
        return np.concatenate([(a + b) / _SQRT2, (a - b) / _SQRT2], axis=-1)

    def backward(self, grad):
        return (_synthesis_1d(grad),)


def _synthesis_1d(packed):
    half = packed.shape[-1] // 2
    approx, detail = packed[..., :half], packed[..., half:]
    out = np.empty(packed.shape)
    out[..., 0::2] = (approx + detail) / _SQRT2
    out[..., 1::2] = (approx - detail) / _SQRT2
    return out


class HaarSynthesis1d(Function):
    def forward(self, packed):
        return _synthesis_1d(packed)

    def backward(self, grad):
        return (HaarAnalysis1d().forward(grad),)


def dwt_haar_1d(x):
    """Return (approx, detail), each half the length of ``x``."""
    packed = HaarAnalysis1d.apply(as_tensor(x))
    half = packed.shape[-1] // 2
    return narrow(packed, -1, 0, half), narrow(packed, -1, half, half)


def idwt_haar_1d(approx, detail):
    approx, detail = as_tensor(approx), as_tensor(detail)
    if approx.shape != detail.shape:
        raise ShapeMismatchError('idwt_haar_1d', approx.shape, detail.shape)
    return HaarSynthesis1d.apply(concat([approx, detail], axis=-1))
