from __future__ import absolute_import, division

import logging

import numpy as np

from sdlab.errors import IllegalArgumentError, ShapeMismatchError
from sdlab.structs import NoisedBatch
from sdlab.tensor import Tensor, add, mse, mul

log = logging.getLogger(__name__)


def _per_sample(coeff, ndim):
    coeff = np.asarray(coeff, dtype=np.float64)
    if coeff.ndim == 0:
        return coeff
    return coeff.reshape(coeff.shape + (1,) * (ndim - coeff.ndim))


def forward_diffuse(x0, t, eps, sched):
    """sqrt(alpha_bar_t) x0 + sqrt(1 - alpha_bar_t) eps

    ``t`` is a single step or one step per leading batch element; t = 0
    returns x0 unchanged. Tensor inputs give a differentiable Tensor,
    arrays give an array.

    Raises:
        ShapeMismatchError: eps and x0 differ in shape
        IllegalArgumentError: t outside [0, T]
    """
    is_tensor = isinstance(x0, Tensor) or isinstance(eps, Tensor)
    x0_shape = x0.shape
    eps_shape = eps.shape
    if tuple(x0_shape) != tuple(eps_shape):
        raise ShapeMismatchError('forward_diffuse', x0_shape, eps_shape)
    ndim = len(x0_shape)
    a_bar = sched.alpha_bar_at(t)
    if np.ndim(a_bar) > 0 and (ndim == 0 or np.shape(a_bar)[0] != x0_shape[0]):
        raise IllegalArgumentError('per-sample steps need one entry per batch element')
    signal = _per_sample(np.sqrt(a_bar), ndim)
    noise = _per_sample(np.sqrt(1.0 - a_bar), ndim)
    if is_tensor:
        return add(mul(x0, Tensor(signal)), mul(eps, Tensor(noise)))
    return signal * np.asarray(x0, dtype=np.float64) + noise * np.asarray(eps, dtype=np.float64)


def draw_training_inputs(x0, sched, rng, cond=None, p_uncond=0.0, uncond_token=None):
    """Sample one (t, eps) per batch element and noise the batch.

    The draw order is fixed: steps, then noise, then the condition dropout
    mask, so a seed always produces the same batch.

    Arguments:
        x0 (ndarray): clean batch [N, ...]
        sched (NoiseSchedule)
        rng (numpy.random.Generator)

    Keyword Arguments:
        cond (ndarray): integer class labels [N], or None
        p_uncond (float): probability of replacing a label by
            ``uncond_token``. Default: 0
        uncond_token (int): the reserved null-condition id

    Returns:
        NoisedBatch
    """
    x0 = np.asarray(x0, dtype=np.float64)
    n = x0.shape[0]
    t = rng.integers(1, sched.T + 1, size=n)
    eps = rng.standard_normal(x0.shape)
    x_t = forward_diffuse(x0, t, eps, sched)
    if cond is not None:
        cond = np.asarray(cond, dtype=np.int64).copy()
        if p_uncond > 0:
            if uncond_token is None:
                raise IllegalArgumentError('condition dropout needs an uncond_token')
            drop = rng.random(n) < p_uncond
            cond[drop] = uncond_token
    return NoisedBatch(t, eps, x_t, cond)


def noise_prediction_loss(model, batch):
    """mean((eps - model(x_t, t, cond))^2) over batch and elements."""
    eps_hat = model(Tensor(batch.x_t), batch.t, batch.cond)
    return mse(Tensor(batch.eps), eps_hat)


def ddpm_loss(model, x0, sched, rng, cond=None, p_uncond=0.0, uncond_token=None):
    """Simplified DDPM objective with uniform t in [1, T].

    Returns:
        scalar Tensor
    """
    batch = draw_training_inputs(x0, sched, rng, cond=cond, p_uncond=p_uncond,
                                 uncond_token=uncond_token)
    return noise_prediction_loss(model, batch)
