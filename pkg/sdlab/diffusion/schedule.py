from __future__ import absolute_import, division

import numpy as np

from sdlab.errors import ConfigurationError, IllegalArgumentError


class NoiseSchedule(object):
    """beta / alpha / alpha_bar for steps t = 1 .. T.

    Lookups are 1-based. ``alpha_bar_at(0)`` is 1 so that t = 0 denotes
    clean data; ``beta_at`` and ``alpha_at`` reject t = 0.
    """
    def __init__(self, beta):
        beta = np.asarray(beta, dtype=np.float64)
        if beta.ndim != 1 or beta.size < 1:
            raise ConfigurationError('beta must be a non-empty 1D sequence')
        if np.any(beta <= 0) or np.any(beta >= 1):
            raise ConfigurationError('every beta must lie in (0, 1)')
        self.beta = beta
        self.alpha = 1.0 - beta
        self.alpha_bar = np.cumprod(self.alpha)
        self._alpha_bar0 = np.concatenate([[1.0], self.alpha_bar])

    @property
    def T(self):
        return self.beta.size

    def _check(self, t, allow_zero):
        t = np.asarray(t)
        low = 0 if allow_zero else 1
        if not np.issubdtype(t.dtype, np.integer):
            if np.any(t != np.round(t)):
                raise IllegalArgumentError('diffusion steps must be integers, got %r' % (t,))
            t = t.astype(np.int64)
        if np.any(t < low) or np.any(t > self.T):
            raise IllegalArgumentError('step %s outside [%d, %d]' % (t, low, self.T))
        return t

    def beta_at(self, t):
        return self.beta[self._check(t, False) - 1]

    def alpha_at(self, t):
        return self.alpha[self._check(t, False) - 1]

    def alpha_bar_at(self, t):
        return self._alpha_bar0[self._check(t, True)]

    def posterior_variance_at(self, t):
        """beta_tilde_t = beta_t (1 - alpha_bar_{t-1}) / (1 - alpha_bar_t)"""
        t = self._check(t, False)
        return self.beta[t - 1] * (1.0 - self._alpha_bar0[t - 1]) / (1.0 - self._alpha_bar0[t])

    def to_dict(self):
        return {'T': self.T, 'beta_start': float(self.beta[0]), 'beta_end': float(self.beta[-1])}

    def __repr__(self):
        return 'NoiseSchedule(T=%d, beta=[%g .. %g])' % (self.T, self.beta[0], self.beta[-1])


def make_linear_schedule(T, beta_start=1e-4, beta_end=0.02):
    """Linearly spaced beta, endpoints included.

    Raises:
        ConfigurationError: T < 1 or not 0 < beta_start <= beta_end < 1
    """
    if int(T) != T or T < 1:
        raise ConfigurationError('T must be a positive integer, got %r' % (T,))
    if not 0 < beta_start:
        raise ConfigurationError('beta_start (%r) must be > 0' % (beta_start,))
    if not beta_start <= beta_end:
        raise ConfigurationError('beta_start (%r) must be <= beta_end (%r)' % (beta_start, beta_end))
    if not beta_end < 1:
        raise ConfigurationError('beta_end (%r) must be < 1' % (beta_end,))
    return NoiseSchedule(np.linspace(beta_start, beta_end, int(T)))
