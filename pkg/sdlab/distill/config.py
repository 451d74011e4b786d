from __future__ import absolute_import

import copy

from sdlab.errors import ConfigurationError


class DistillConfig(object):
    """Weights of the spectrum-aware distillation objective

        L = L_ddpm + lambda_s L_spatial + lambda_f L_freq

    Keyword Arguments:
        lambda_s (float): spatial feature-matching weight. Default: 0.1
        lambda_f (float): frequency feature-matching weight. Default: 0.1
        alpha_w (float): exponent of the frequency weight |X|^alpha, must
            be negative. Default: -1.0
        eps_w (float): magnitude floor keeping the weight finite. Default: 1e-3
        pairs (list): [teacher feature, student feature] names to match;
            None pairs every activation both networks expose. Default: None
        identity_adapters (bool): start each 1x1 adapter as the identity
            on the shared channels. Default: False
        teacher (dict): architecture descriptor of the teacher. Default: None
        teacher_checkpoint (str): path of the trained teacher. Default: None
    """
    DEFAULT_CONFIG = {
        'lambda_s': 0.1,
        'lambda_f': 0.1,
        'alpha_w': -1.0,
        'eps_w': 1e-3,
        'pairs': None,
        'identity_adapters': False,
        'teacher': None,
        'teacher_checkpoint': None,
    }

    def __init__(self, **configs):
        extra_configs = set(configs).difference(self.DEFAULT_CONFIG)
        if extra_configs:
            raise ConfigurationError("Unrecognized configs: %s" % (extra_configs,))
        self.config = copy.copy(self.DEFAULT_CONFIG)
        self.config.update(configs)
        if not self.config['alpha_w'] < 0:
            raise ConfigurationError('alpha_w must be negative, got %r' % (self.config['alpha_w'],))
        if not self.config['eps_w'] > 0:
            raise ConfigurationError('eps_w must be positive, got %r' % (self.config['eps_w'],))
        for key in ('lambda_s', 'lambda_f'):
            if self.config[key] < 0:
                raise ConfigurationError('%s must be >= 0, got %r' % (key, self.config[key]))

    def __getattr__(self, name):
        config = self.__dict__.get('config')
        if config is not None and name in config:
            return config[name]
        raise AttributeError(name)

    def resolve_pairs(self, teacher, student):
        """Feature name pairs, defaulting to the names both models share."""
        if self.config['pairs'] is not None:
            pairs = [tuple(p) for p in self.config['pairs']]
        else:
            t_names = teacher.feature_channels()
            pairs = [(name, name) for name in student.feature_channels() if name in t_names]
        t_channels = teacher.feature_channels()
        s_channels = student.feature_channels()
        for t_name, s_name in pairs:
            if t_name not in t_channels or s_name not in s_channels:
                raise ConfigurationError('unknown feature pair %r' % ((t_name, s_name),))
        return pairs

    def to_dict(self):
        return copy.deepcopy(self.config)
