from __future__ import absolute_import, division

import copy
import logging

import numpy as np

from sdlab.errors import (
    ConfigurationError, IllegalArgumentError, NumericalDivergenceError,
    ShapeMismatchError)

log = logging.getLogger(__name__)


def adamw_step(params, grads, state, lr, betas=(0.9, 0.999), eps=1e-8, weight_decay=0.0):
    """Apply one AdamW update in place.

    Weight decay is decoupled: parameters are shrunk by (1 - lr*wd) before
    the bias-corrected Adam step and never pass through the moments.

    Arguments:
        params (list of ndarray): parameter arrays, updated in place
        grads (list of ndarray or None): gradients, None is treated as zero
        state (dict): ``{'step': int, 'm': [ndarray], 'v': [ndarray]}``;
            empty dict on the first call
        lr (float): learning rate for this step

    Keyword Arguments:
        betas (tuple): moment decay rates. Default: (0.9, 0.999)
        eps (float): denominator term. Default: 1e-8
        weight_decay (float): decoupled decay coefficient. Default: 0

    Returns:
        dict: the updated state
    """
    if not state:
        state['step'] = 0
        state['m'] = [np.zeros_like(p) for p in params]
        state['v'] = [np.zeros_like(p) for p in params]
    if len(state['m']) != len(params):
        raise IllegalArgumentError('optimizer state holds %d slots for %d params'
                                   % (len(state['m']), len(params)))
    beta1, beta2 = betas
    state['step'] += 1
    step = state['step']
    bias1 = 1.0 - beta1 ** step
    bias2 = 1.0 - beta2 ** step
    for i, p in enumerate(params):
        m, v = state['m'][i], state['v'][i]
        if m.shape != p.shape:
            raise ShapeMismatchError('adamw_step', p.shape, m.shape, 'state does not match param')
        g = grads[i]
        if g is None:
            g = np.zeros_like(p)
        if weight_decay:
            p *= (1.0 - lr * weight_decay)
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * g * g
        p -= lr * (m / bias1) / (np.sqrt(v / bias2) + eps)
    return state


def clip_grad_norm(params, max_norm):
    """Scale gradients so their global L2 norm is at most ``max_norm``.

    Returns:
        float: the total norm before clipping
    """
    grads = [p.grad for p in params if p.grad is not None]
    total = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads)))
    if max_norm is not None and total > max_norm > 0:
        factor = max_norm / (total + 1e-12)
        for p in params:
            if p.grad is not None:
                p.grad = p.grad * factor
    return total


class LinearDecay(object):
    """lr(step) = lr * max(final_fraction, 1 - step / total_steps)"""
    def __init__(self, lr, total_steps, final_fraction=0.0):
        if total_steps < 1:
            raise ConfigurationError('total_steps must be >= 1, got %r' % (total_steps,))
        if not 0.0 <= final_fraction <= 1.0:
            raise ConfigurationError('final_fraction must lie in [0, 1], got %r' % (final_fraction,))
        self.lr = float(lr)
        self.total_steps = int(total_steps)
        self.final_fraction = float(final_fraction)

    def lr_at(self, step):
        return self.lr * max(self.final_fraction, 1.0 - step / self.total_steps)


class AdamW(object):
    """AdamW over a list of leaf Tensors.

    Keyword Arguments:
        lr (float): base learning rate. Default: 1.28e-4
        betas (tuple): first and second moment decay. Default: (0.9, 0.999)
        eps (float): Default: 1e-8
        weight_decay (float): decoupled decay. Default: 0.0
        total_steps (int): if set, the rate decays linearly to
            ``final_lr_fraction * lr`` over this many steps. Default: None
        final_lr_fraction (float): Default: 0.0
        max_grad_norm (float): clip the global gradient norm before each
            step, None disables. Default: None
    """
    DEFAULT_CONFIG = {
        'lr': 1.28e-4,
        'betas': (0.9, 0.999),
        'eps': 1e-8,
        'weight_decay': 0.0,
        'total_steps': None,
        'final_lr_fraction': 0.0,
        'max_grad_norm': None,
    }

    def __init__(self, params, **configs):
        extra_configs = set(configs).difference(self.DEFAULT_CONFIG)
        if extra_configs:
            raise ConfigurationError("Unrecognized configs: %s" % (extra_configs,))
        self.config = copy.copy(self.DEFAULT_CONFIG)
        self.config.update(configs)
        self.params = list(params)
        if not self.params:
            raise IllegalArgumentError('AdamW needs at least one parameter')
        self.state = {}
        self.schedule = None
        if self.config['total_steps']:
            self.schedule = LinearDecay(self.config['lr'], self.config['total_steps'],
                                        self.config['final_lr_fraction'])
        self.last_grad_norm = 0.0

    @property
    def steps_taken(self):
        return self.state.get('step', 0)

    def current_lr(self):
        if self.schedule is None:
            return self.config['lr']
        return self.schedule.lr_at(self.steps_taken)

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()

    def step(self):
        self.last_grad_norm = clip_grad_norm(self.params, self.config['max_grad_norm'])
        lr = self.current_lr()
        adamw_step([p.data for p in self.params],
                   [p.grad for p in self.params],
                   self.state, lr,
                   betas=tuple(self.config['betas']),
                   eps=self.config['eps'],
                   weight_decay=self.config['weight_decay'])
        for p in self.params:
            if not np.all(np.isfinite(p.data)):
                raise NumericalDivergenceError('parameter update produced non-finite values',
                                               op='adamw_step', step=self.steps_taken)
        return lr

    def state_dict(self):
        """Moment arrays keyed by slot index plus the step counter."""
        if not self.state:
            return {'step': 0, 'm': [], 'v': []}
        return {'step': self.state['step'],
                'm': [m.copy() for m in self.state['m']],
                'v': [v.copy() for v in self.state['v']]}

    def load_state_dict(self, state):
        if state['step'] == 0:
            self.state = {}
            return
        if len(state['m']) != len(self.params) or len(state['v']) != len(self.params):
            raise IllegalArgumentError('optimizer state does not match parameter count')
        for p, m in zip(self.params, state['m']):
            if p.shape != m.shape:
                raise ShapeMismatchError('load_state_dict', p.shape, m.shape)
        self.state = {'step': int(state['step']),
                      'm': [np.array(m, dtype=np.float64) for m in state['m']],
                      'v': [np.array(v, dtype=np.float64) for v in state['v']]}
