"""Discrete Fourier transforms over the trailing axes.

The forward transform is the unnormalized sum

    X(u, v) = sum_{x,y} x(x, y) exp(-2 pi i (u x / H + v y / W))

and the inverse carries the 1 / (H W) factor, so Parseval reads
sum |x|^2 = sum |X|^2 / (H W).

Two engines are provided: a direct transform through DFT matrices that
works for any length, and a vectorized radix-2 Cooley-Tukey for power of
two lengths. ``method='auto'`` picks radix-2 whenever it applies.
"""
from __future__ import absolute_import, division

import logging

import numpy as np

from sdlab.errors import IllegalArgumentError
from sdlab.tensor import Tensor
from sdlab.util import is_power_of_two

log = logging.getLogger(__name__)

METHODS = ('auto', 'direct', 'fft')

_matrix_cache = {}


def dft_matrix(n):
    """n x n forward DFT matrix F[k, j] = exp(-2 pi i k j / n)."""
    mat = _matrix_cache.get(n)
    if mat is None:
        k = np.arange(n)
        # reduce k*j mod n before scaling so large products keep full precision
        mat = np.exp(-2j * np.pi * (np.outer(k, k) % n) / n)
        _matrix_cache[n] = mat
    return mat


def _fft_radix2(x):
    n = x.shape[-1]
    if n == 1:
        return x.astype(np.complex128)
    even = _fft_radix2(x[..., ::2])
    odd = _fft_radix2(x[..., 1::2])
    twiddle = np.exp(-2j * np.pi * np.arange(n // 2) / n) * odd
    return np.concatenate([even + twiddle, even - twiddle], axis=-1)


def _forward_last(x, method):
    n = x.shape[-1]
    if n < 1:
        raise IllegalArgumentError('transform length must be >= 1')
    if method not in METHODS:
        raise IllegalArgumentError('unknown DFT method %r, expected one of %s' % (method, METHODS))
    if method == 'fft' and not is_power_of_two(n):
        raise IllegalArgumentError('radix-2 transform needs a power of two length, got %d' % (n,))
    if method == 'fft' or (method == 'auto' and is_power_of_two(n)):
        return _fft_radix2(x)
    # F is symmetric, so x . F transforms every row
    return np.dot(x.astype(np.complex128), dft_matrix(n))


def _as_array(x):
    if isinstance(x, Tensor):
        return x.data
    if isinstance(x, SpectrumGrid):
        return x.coefficients
    return np.asarray(x)


class SpectrumGrid(object):
    """Complex DFT coefficients of one or more [H, W] maps.

    ``coefficients`` has shape [..., H, W]. With ``dc_centered`` set the
    zero frequency sits at (H // 2, W // 2) as produced by ``fftshift``.
    """
    def __init__(self, coefficients, dc_centered=False):
        self.coefficients = np.asarray(coefficients, dtype=np.complex128)
        if self.coefficients.ndim < 2:
            raise IllegalArgumentError('SpectrumGrid needs at least two axes')
        self.dc_centered = bool(dc_centered)

    @property
    def height(self):
        return self.coefficients.shape[-2]

    @property
    def width(self):
        return self.coefficients.shape[-1]

    def magnitude(self):
        return np.abs(self.coefficients)

    def centered(self):
        if self.dc_centered:
            return self
        return SpectrumGrid(np.fft.fftshift(self.coefficients, axes=(-2, -1)), dc_centered=True)

    def uncentered(self):
        if not self.dc_centered:
            return self
        return SpectrumGrid(np.fft.ifftshift(self.coefficients, axes=(-2, -1)), dc_centered=False)

    def __repr__(self):
        return 'SpectrumGrid(shape=%s, dc_centered=%s)' % (
            self.coefficients.shape, self.dc_centered)


def dft1(x, method='auto'):
    """Unnormalized DFT along the last axis; returns a complex ndarray."""
    return _forward_last(np.asarray(_as_array(x)), method)


def idft1(coefficients, method='auto'):
    coefficients = np.asarray(_as_array(coefficients), dtype=np.complex128)
    n = coefficients.shape[-1]
    return np.conj(_forward_last(np.conj(coefficients), method)) / n


def rfft_magnitude(x, method='auto'):
    """|DFT| of real signals along the last axis, bins 0 .. n // 2."""
    x = np.asarray(_as_array(x), dtype=np.float64)
    n = x.shape[-1]
    return np.abs(dft1(x, method=method))[..., :n // 2 + 1]


def dft2_array(x, method='auto'):
    """Unnormalized 2D DFT over the last two axes of an ndarray."""
    x = np.asarray(x)
    if x.ndim < 2:
        raise IllegalArgumentError('dft2 needs at least two axes, got shape %s' % (x.shape,))
    rows = _forward_last(x, method)
    cols = _forward_last(np.swapaxes(rows, -1, -2), method)
    return np.swapaxes(cols, -1, -2)


def idft2_array(coefficients, method='auto'):
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    h, w = coefficients.shape[-2:]
    return np.conj(dft2_array(np.conj(coefficients), method=method)) / (h * w)


def dft2(x, method='auto', centered=False):
    """2D DFT of a Tensor or array of shape [..., H, W].

    Keyword Arguments:
        method (str): 'auto', 'direct' or 'fft' (radix-2). Default: 'auto'
        centered (bool): return the spectrum with DC moved to the center.
            Default: False

    Returns:
        SpectrumGrid
    """
    grid = SpectrumGrid(dft2_array(_as_array(x), method=method))
    if centered:
        return grid.centered()
    return grid


def idft2(spec, method='auto', real=True):
    """Inverse of :func:`dft2`.

    Accepts a SpectrumGrid (either layout) or a complex array in the
    uncentered layout. Returns the real part unless ``real`` is False.
    """
    if isinstance(spec, SpectrumGrid):
        spec = spec.uncentered().coefficients
    out = idft2_array(spec, method=method)
    if real:
        return out.real.copy()
    return out
