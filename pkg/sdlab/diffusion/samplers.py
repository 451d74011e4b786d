"""Reverse-process updates and full sampling loops.

All updates use the noise parameterization. A score estimate converts
through s = -eps / sqrt(1 - alpha_bar_t).
"""
from __future__ import absolute_import, division

import copy
import logging

import numpy as np

from sdlab.errors import (
    ConfigurationError, IllegalArgumentError, NumericalDivergenceError)
from sdlab.structs import GuidanceConfig, Snapshot
from sdlab.tensor import Tensor, no_grad, scale, sub

log = logging.getLogger(__name__)

SIGMA_CHOICES = ('beta', 'posterior')


def _array(x):
    if isinstance(x, Tensor):
        return x.data
    return np.asarray(x, dtype=np.float64)


def predict_x0(x_t, t, eps_hat, sched):
    """(x_t - sqrt(1 - alpha_bar_t) eps_hat) / sqrt(alpha_bar_t)"""
    a_bar = sched.alpha_bar_at(t)
    return (_array(x_t) - np.sqrt(1.0 - a_bar) * _array(eps_hat)) / np.sqrt(a_bar)


def eps_to_score(eps, t, sched):
    return -_array(eps) / np.sqrt(1.0 - sched.alpha_bar_at(t))


def score_to_eps(score, t, sched):
    return -_array(score) * np.sqrt(1.0 - sched.alpha_bar_at(t))


def ancestral_step(x_t, t, eps_hat, sched, z, sigma_choice='beta'):
    """One reverse step t -> t - 1.

        x_{t-1} = (x_t - beta_t / sqrt(1 - alpha_bar_t) eps_hat) / sqrt(alpha_t) + sigma_t z

    with sigma_t = sqrt(beta_t), or the posterior standard deviation
    sqrt(beta_tilde_t) when ``sigma_choice='posterior'``.

    Raises:
        IllegalArgumentError: t < 1 or an unknown sigma_choice
    """
    if t < 1:
        raise IllegalArgumentError('ancestral_step needs t >= 1, got %r' % (t,))
    if sigma_choice not in SIGMA_CHOICES:
        raise IllegalArgumentError('sigma_choice must be one of %s, got %r'
                                   % (SIGMA_CHOICES, sigma_choice))
    beta = sched.beta_at(t)
    a_bar = sched.alpha_bar_at(t)
    mean = (_array(x_t) - beta / np.sqrt(1.0 - a_bar) * _array(eps_hat)) / np.sqrt(sched.alpha_at(t))
    if sigma_choice == 'beta':
        sigma = np.sqrt(beta)
    else:
        sigma = np.sqrt(sched.posterior_variance_at(t))
    return mean + sigma * _array(z)


def ddim_sigma(t, t_prev, sched, eta):
    a_t = sched.alpha_bar_at(t)
    a_prev = sched.alpha_bar_at(t_prev)
    return eta * np.sqrt((1.0 - a_prev) / (1.0 - a_t)) * np.sqrt(1.0 - a_t / a_prev)


def ddim_step(x_t, t, t_prev, eps_hat, sched, eta=0.0, z=None):
    """Jump from step t to an earlier step t_prev (t_prev = 0 is clean data).

    With eta = 0 the update is deterministic:
    x_prev = sqrt(alpha_bar_prev) x0_hat + sqrt(1 - alpha_bar_prev) eps_hat.

    Raises:
        IllegalArgumentError: t_prev >= t, or eta > 0 without noise ``z``
    """
    if t_prev >= t:
        raise IllegalArgumentError('ddim_step needs t_prev < t, got t=%r t_prev=%r' % (t, t_prev))
    if eta < 0:
        raise IllegalArgumentError('eta must be >= 0, got %r' % (eta,))
    eps_hat = _array(eps_hat)
    x0_hat = predict_x0(x_t, t, eps_hat, sched)
    a_prev = sched.alpha_bar_at(t_prev)
    sigma = ddim_sigma(t, t_prev, sched, eta) if eta else 0.0
    direction = np.sqrt(max(0.0, 1.0 - a_prev - sigma ** 2)) * eps_hat
    out = np.sqrt(a_prev) * x0_hat + direction
    if sigma:
        if z is None:
            raise IllegalArgumentError('ddim_step with eta > 0 needs noise z')
        out = out + sigma * _array(z)
    return out


def cfg_predict(model, x_t, t, cond, g):
    """(1 + w) eps(x_t, t, cond) - w eps(x_t, t, uncond)

    For w = 0 the conditional prediction is returned as is, without an
    unconditional pass.
    """
    eps_cond = model(x_t, t, cond)
    if g is None or g.w == 0:
        return eps_cond
    if cond is None:
        raise IllegalArgumentError('guidance needs a condition')
    uncond = np.full(np.shape(cond), g.uncond_token, dtype=np.int64)
    eps_uncond = model(x_t, t, uncond)
    return sub(scale(eps_cond, 1.0 + g.w), scale(eps_uncond, g.w))


def ddim_timesteps(T, n_steps):
    """Descending, evenly spread steps from T down to 1."""
    if n_steps < 1:
        raise ConfigurationError('n_steps must be >= 1, got %r' % (n_steps,))
    n_steps = min(int(n_steps), T)
    steps = np.unique(np.round(np.linspace(1, T, n_steps)).astype(np.int64))
    return steps[::-1]


def snapshot_indices(n_iterations, n_snapshots):
    """Evenly spread loop indices, always ending at the final iteration."""
    if not n_snapshots:
        return set()
    if n_snapshots == 1:
        return {n_iterations - 1}
    picks = np.round(np.linspace(0, n_iterations - 1, n_snapshots)).astype(np.int64)
    return set(int(i) for i in picks)


class SamplerConfig(object):
    """Settings of a full sampling run.

    Keyword Arguments:
        kind (str): 'ancestral' or 'ddim'. Default: 'ddim'
        n_steps (int): DDIM step count, capped at T. Default: 200
        eta (float): DDIM stochasticity. Default: 0.0
        sigma_choice (str): ancestral noise level, 'beta' or 'posterior'.
            Default: 'beta'
        guidance_w (float): classifier-free guidance weight. Default: 0.0
        n_snapshots (int): x0 estimates kept along the trajectory.
            Default: 0
    """
    DEFAULT_CONFIG = {
        'kind': 'ddim',
        'n_steps': 200,
        'eta': 0.0,
        'sigma_choice': 'beta',
        'guidance_w': 0.0,
        'n_snapshots': 0,
    }

    def __init__(self, **configs):
        extra_configs = set(configs).difference(self.DEFAULT_CONFIG)
        if extra_configs:
            raise ConfigurationError("Unrecognized configs: %s" % (extra_configs,))
        self.config = copy.copy(self.DEFAULT_CONFIG)
        self.config.update(configs)
        if self.config['kind'] not in ('ancestral', 'ddim'):
            raise ConfigurationError('sampler kind must be ancestral or ddim, got %r'
                                     % (self.config['kind'],))
        if self.config['sigma_choice'] not in SIGMA_CHOICES:
            raise ConfigurationError('sigma_choice must be one of %s' % (SIGMA_CHOICES,))
        if self.config['guidance_w'] < 0:
            raise ConfigurationError('guidance_w must be >= 0')

    def timesteps(self, T):
        if self.config['kind'] == 'ancestral':
            return np.arange(T, 0, -1)
        return ddim_timesteps(T, self.config['n_steps'])


def sample(model, sched, sampler_config, shape, rng, cond=None, uncond_token=None,
           snapshots=None):
    """Run the reverse chain from x_T ~ N(0, I).

    Arguments:
        model (callable): model(x_t Tensor, t [N] ints, cond) -> eps_hat Tensor
        sched (NoiseSchedule)
        sampler_config (SamplerConfig or dict)
        shape (tuple): output batch shape [N, ...]
        rng (numpy.random.Generator)

    Keyword Arguments:
        cond (ndarray): class labels [N] for conditional models
        uncond_token (int): null-condition id, needed when guidance_w > 0
        snapshots (list): if given, Snapshot(index, t, x0_hat) records are
            appended for ``n_snapshots`` evenly spread iterations

    Returns:
        ndarray of ``shape``
    """
    if isinstance(sampler_config, dict):
        sampler_config = SamplerConfig(**sampler_config)
    cfg = sampler_config.config
    guidance = None
    if cfg['guidance_w']:
        if uncond_token is None:
            raise ConfigurationError('guidance_w > 0 needs an uncond_token')
        guidance = GuidanceConfig(cfg['guidance_w'], uncond_token)
    steps = sampler_config.timesteps(sched.T)
    keep = snapshot_indices(len(steps), cfg['n_snapshots'] if snapshots is not None else 0)
    n = shape[0]
    x = rng.standard_normal(shape)
    log.debug('sampling %s with %s over %d steps', shape, cfg['kind'], len(steps))
    with no_grad():
        for i, t in enumerate(steps):
            t = int(t)
            t_vec = np.full(n, t, dtype=np.int64)
            eps_hat = cfg_predict(model, Tensor(x), t_vec, cond, guidance).data
            if i in keep:
                snapshots.append(Snapshot(i, t, predict_x0(x, t, eps_hat, sched)))
            if cfg['kind'] == 'ancestral':
                z = rng.standard_normal(shape) if t > 1 else np.zeros(shape)
                x = ancestral_step(x, t, eps_hat, sched, z, cfg['sigma_choice'])
            else:
                t_prev = int(steps[i + 1]) if i + 1 < len(steps) else 0
                z = rng.standard_normal(shape) if cfg['eta'] else None
                x = ddim_step(x, t, t_prev, eps_hat, sched, eta=cfg['eta'], z=z)
            if not np.all(np.isfinite(x)):
                raise NumericalDivergenceError('sampler produced non-finite values',
                                               op=cfg['kind'], step=t)
    return x
