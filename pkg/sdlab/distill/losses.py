from __future__ import absolute_import, division

import numpy as np
from scipy import ndimage

from sdlab.errors import IllegalArgumentError, ShapeMismatchError
from sdlab.spectral.fourier import dft2_array, idft2_array
from sdlab.tensor import Function, add, as_tensor, mse, sub


def spatial_distill_loss(pairs):
    """sum over pairs of mean((X_T - X_S)^2)

    Arguments:
        pairs (list): (teacher feature, adapted student feature) Tensors

    Raises:
        ShapeMismatchError: a pair differs in shape
    """
    total = None
    for teacher_feat, student_feat in pairs:
        teacher_feat, student_feat = as_tensor(teacher_feat), as_tensor(student_feat)
        if teacher_feat.shape != student_feat.shape:
            raise ShapeMismatchError('spatial_distill_loss', teacher_feat.shape,
                                     student_feat.shape)
        term = mse(teacher_feat, student_feat)
        total = term if total is None else add(total, term)
    if total is None:
        raise IllegalArgumentError('no feature pairs to distill')
    return total


def resize_bilinear(x, target_hw):
    """Linear-interpolation resize of the last two axes of ``x``."""
    x = np.asarray(x, dtype=np.float64)
    h, w = x.shape[-2:]
    th, tw = target_hw
    if (th, tw) == (h, w):
        return x.copy()
    if th > h or tw > w:
        raise IllegalArgumentError('cannot shrink %s to the larger %s' % ((h, w), (th, tw)))
    factors = (1.0,) * (x.ndim - 2) + (th / h, tw / w)
    out = ndimage.zoom(x, factors, order=1)
    if out.shape[-2:] != (th, tw):
        raise ShapeMismatchError('resize_bilinear', out.shape, (th, tw))
    return out


def freq_weight(x0, target_hw, alpha_w=-1.0, eps_w=1e-3):
    """omega(u, v) = (|DFT(resize(x0))| + eps_w)^alpha_w

    ``x0`` is [N, C, H, W] (or [C, H, W], [H, W]); channel magnitudes are
    averaged so the result is [N, 1, h, w] and broadcasts over feature
    channels.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.ndim == 2:
        x0 = x0[None, None]
    elif x0.ndim == 3:
        x0 = x0[None]
    small = resize_bilinear(x0, target_hw)
    mag = np.abs(dft2_array(small)).mean(axis=1, keepdims=True)
    return np.power(mag + eps_w, alpha_w)


class WeightedSpectralEnergy(Function):
    """mean(omega * |DFT(d)|^2) over every axis of a real [N, K, h, w] input."""
    def forward(self, d, weight=None):
        weight = np.broadcast_to(weight, d.shape)
        self.weight = weight
        self.spec = dft2_array(d)
        self.count = d.size
        return np.asarray(np.sum(weight * np.abs(self.spec) ** 2) / self.count)

    def backward(self, grad):
        h, w = self.spec.shape[-2:]
        g = 2.0 / self.count * np.real(h * w * idft2_array(self.weight * self.spec))
        return (float(grad) * g,)


def freq_distill_loss(pairs, x0, cfg):
    """sum over pairs of mean(omega |F[X_T] - F[X_S]|^2)

    Arguments:
        pairs (list): (teacher feature, adapted student feature) Tensors,
            each [N, K, h, w]
        x0 (ndarray): clean batch the features were computed from
        cfg (DistillConfig)
    """
    total = None
    for teacher_feat, student_feat in pairs:
        teacher_feat, student_feat = as_tensor(teacher_feat), as_tensor(student_feat)
        if teacher_feat.shape != student_feat.shape:
            raise ShapeMismatchError('freq_distill_loss', teacher_feat.shape, student_feat.shape)
        omega = freq_weight(x0, teacher_feat.shape[-2:], cfg.alpha_w, cfg.eps_w)
        term = WeightedSpectralEnergy.apply(sub(teacher_feat, student_feat), weight=omega)
        total = term if total is None else add(total, term)
    if total is None:
        raise IllegalArgumentError('no feature pairs to distill')
    return total
