from __future__ import absolute_import

import copy
import hashlib
import json
import logging

from sdlab.diffusion.samplers import SamplerConfig
from sdlab.distill.config import DistillConfig
from sdlab.errors import ConfigurationError, UnknownTaskError
from sdlab.models import ARCHITECTURES

log = logging.getLogger(__name__)

TASKS = ('toy1d', 'texture2d', 'class2d')


class Section(object):
    """A flat group of settings following the ``DEFAULT_CONFIG`` idiom."""
    DEFAULT_CONFIG = {}

    def __init__(self, **configs):
        extra_configs = set(configs).difference(self.DEFAULT_CONFIG)
        if extra_configs:
            raise ConfigurationError("Unrecognized configs: %s" % (extra_configs,))
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)
        self.config.update(configs)
        self.validate()

    def validate(self):
        pass

    def __getattr__(self, name):
        config = self.__dict__.get('config')
        if config is not None and name in config:
            return config[name]
        raise AttributeError(name)

    def to_dict(self):
        return copy.deepcopy(self.config)


class DataConfig(Section):
    """
    Keyword Arguments:
        n_samples (int): training signals to synthesize. Default: 10000
        holdout (int): extra held-out signals for frequency error. Default: 1000
        length (int): points per toy1d signal on x in [0, 1). Default: 64
        size (int): image side for the 2D tasks. Default: 32
        toy_alphas (list): cosine frequencies of the toy1d mixture. Default: [3, 5]
        toy_probs (list): their probabilities. Default: [0.2, 0.8]
        alpha_s (float): power-law exponent of texture2d fields. Default: 2.0
        amplitude (float): power-law amplitude. Default: 1.0
        class_exponents (list): exponent per class of class2d. Default: [1.5, 3.0]
        path (str): dataset directory; None uses <output_dir>/data. Default: None
    """
    DEFAULT_CONFIG = {
        'n_samples': 10000,
        'holdout': 1000,
        'length': 64,
        'size': 32,
        'toy_alphas': [3, 5],
        'toy_probs': [0.2, 0.8],
        'alpha_s': 2.0,
        'amplitude': 1.0,
        'class_exponents': [1.5, 3.0],
        'path': None,
    }

    def validate(self):
        if self.config['n_samples'] < 1 or self.config['holdout'] < 0:
            raise ConfigurationError('n_samples must be >= 1 and holdout >= 0')
        if len(self.config['toy_alphas']) != len(self.config['toy_probs']):
            raise ConfigurationError('toy_alphas (%d) and toy_probs (%d) differ in length'
                                     % (len(self.config['toy_alphas']),
                                        len(self.config['toy_probs'])))
        if abs(sum(self.config['toy_probs']) - 1.0) > 1e-9:
            raise ConfigurationError('toy_probs must sum to 1, got %r' % (self.config['toy_probs'],))
        if self.config['size'] < 2 or self.config['length'] < 2:
            raise ConfigurationError('size and length must be >= 2')


class ScheduleConfig(Section):
    DEFAULT_CONFIG = {
        'T': 1000,
        'beta_start': 1e-4,
        'beta_end': 0.02,
    }


class OptimizerConfig(Section):
    """
    Keyword Arguments:
        lr (float): initial learning rate. Default: 1.28e-4
        steps (int): training steps. Default: 20000
        batch_size (int): Default: 64
        final_lr_fraction (float): linear decay floor. Default: 0.0
        weight_decay (float): decoupled decay. Default: 0.0
        betas (list): Adam moment rates. Default: [0.9, 0.999]
        eps (float): Default: 1e-8
        max_grad_norm (float): global clip, None disables. Default: None
        p_uncond (float): label dropout for guidance training. Default: 0.1
    """
    DEFAULT_CONFIG = {
        'lr': 1.28e-4,
        'steps': 20000,
        'batch_size': 64,
        'final_lr_fraction': 0.0,
        'weight_decay': 0.0,
        'betas': [0.9, 0.999],
        'eps': 1e-8,
        'max_grad_norm': None,
        'p_uncond': 0.1,
    }

    def validate(self):
        if self.config['steps'] < 0 or self.config['batch_size'] < 1:
            raise ConfigurationError('steps must be >= 0 and batch_size >= 1')
        if not 0 <= self.config['p_uncond'] < 1:
            raise ConfigurationError('p_uncond must be in [0, 1), got %r' % (self.config['p_uncond'],))

    def adamw_configs(self):
        return {
            'lr': self.config['lr'],
            'betas': tuple(self.config['betas']),
            'eps': self.config['eps'],
            'weight_decay': self.config['weight_decay'],
            'total_steps': max(self.config['steps'], 1),
            'final_lr_fraction': self.config['final_lr_fraction'],
            'max_grad_norm': self.config['max_grad_norm'],
        }


class AnalysisConfig(Section):
    """
    Keyword Arguments:
        analyses (list): what ``analyze`` runs, any of 'evolution',
            'gating', 'freq_error', 'dft_diff'. Default: all four
        n_generate (int): samples drawn for freq_error and toy1d. Default: 300
        n_snapshots (int): x0 estimates in the evolution report. Default: 10
        n_trajectories (int): sampled trajectories for gating curves. Default: 100
        n_bins (int): radial bins, None picks from the image size. Default: None
        n_boot (int): bootstrap resamples of freq_error. Default: 200
        cutoff (float): low/high split in cycles per image, None scales
            28 at 256 px to the image size. Default: None
        compare_checkpoint (str): second checkpoint for 'dft_diff'. Default: None
        alpha_bars (list): wiener-report noise levels.
            Default: [0.01, 0.1, 0.5, 0.9, 0.99]
        oracle (bool): append least-squares oracle columns. Default: False
        oracle_samples (int): signals fed to the oracle. Default: 10000
        batch_size (int): sampling batch. Default: 100
    """
    DEFAULT_CONFIG = {
        'analyses': ['evolution', 'gating', 'freq_error', 'dft_diff'],
        'n_generate': 300,
        'n_snapshots': 10,
        'n_trajectories': 100,
        'n_bins': None,
        'n_boot': 200,
        'cutoff': None,
        'compare_checkpoint': None,
        'alpha_bars': [0.01, 0.1, 0.5, 0.9, 0.99],
        'oracle': False,
        'oracle_samples': 10000,
        'batch_size': 100,
    }

    def validate(self):
        if not self.config['alpha_bars']:
            raise ConfigurationError('alpha_bars must not be empty')


def _section_dict(section):
    return section.to_dict() if isinstance(section, Section) else copy.deepcopy(section.config)


class ExperimentConfig(object):
    """Complete, JSON-serializable description of one run.

    Sections are ``data``, ``model``, ``schedule``, ``optimizer``,
    ``sampler``, ``distill`` (None for plain training) and ``analysis``.
    Every section rejects unknown keys.
    """
    DEFAULT_CONFIG = {
        'task': 'texture2d',
        'seed': 0,
        'output_dir': 'runs/default',
        'checkpoint_every': 1000,
        'log_every': 100,
        'data': None,
        'model': None,
        'schedule': None,
        'optimizer': None,
        'sampler': None,
        'distill': None,
        'analysis': None,
    }

    def __init__(self, **configs):
        extra_configs = set(configs).difference(self.DEFAULT_CONFIG)
        if extra_configs:
            raise ConfigurationError("Unrecognized configs: %s" % (extra_configs,))
        config = copy.copy(self.DEFAULT_CONFIG)
        config.update(configs)
        if config['task'] not in TASKS:
            raise UnknownTaskError('unknown task %r, expected one of %s' % (config['task'], TASKS))
        self.task = config['task']
        self.seed = int(config['seed'])
        self.output_dir = config['output_dir']
        self.checkpoint_every = int(config['checkpoint_every'])
        self.log_every = int(config['log_every'])
        if self.checkpoint_every < 1 or self.log_every < 1:
            raise ConfigurationError('checkpoint_every and log_every must be >= 1')
        self.data = DataConfig(**(config['data'] or {}))
        self.model = self._model_config(config['model'])
        self.schedule = ScheduleConfig(**(config['schedule'] or {}))
        self.optimizer = OptimizerConfig(**(config['optimizer'] or {}))
        self.sampler = SamplerConfig(**(config['sampler'] or {}))
        self.distill = (DistillConfig(**config['distill'])
                        if config['distill'] is not None else None)
        self.analysis = AnalysisConfig(**(config['analysis'] or {}))

    def _model_config(self, model):
        model = dict(model or self.default_model(self.task))
        arch = model.get('arch')
        if arch not in ARCHITECTURES:
            raise ConfigurationError('unknown architecture %r, expected one of %s'
                                     % (arch, sorted(ARCHITECTURES)))
        extra = set(model).difference(ARCHITECTURES[arch].DEFAULT_CONFIG).difference(['arch'])
        if extra:
            raise ConfigurationError("Unrecognized configs: %s" % (extra,))
        return model

    @staticmethod
    def default_model(task):
        if task == 'toy1d':
            return {'arch': 'mlp', 'length': 64, 'hidden': 64, 'time_dim': 32}
        n_classes = 2 if task == 'class2d' else 0
        return {'arch': 'wg_unet', 'in_channels': 1, 'widths': [16, 32, 64],
                'time_dim': 32, 'n_classes': n_classes, 'resampler': 'wg'}

    def to_dict(self):
        return {
            'task': self.task,
            'seed': self.seed,
            'output_dir': self.output_dir,
            'checkpoint_every': self.checkpoint_every,
            'log_every': self.log_every,
            'data': self.data.to_dict(),
            'model': copy.deepcopy(self.model),
            'schedule': self.schedule.to_dict(),
            'optimizer': self.optimizer.to_dict(),
            'sampler': _section_dict(self.sampler),
            'distill': self.distill.to_dict() if self.distill is not None else None,
            'analysis': self.analysis.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigurationError('experiment config must be a JSON object')
        return cls(**d)

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except ValueError as e:
            raise ConfigurationError('invalid JSON config: %s' % (e,))
        return cls.from_dict(d)

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.from_json(f.read())

    def save(self, path):
        with open(path, 'w') as f:
            f.write(self.to_json())
            f.write('\n')

    def config_hash(self):
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def replace(self, **overrides):
        """A copy with top-level keys replaced, e.g. ``seed`` or ``output_dir``."""
        d = self.to_dict()
        d.update(overrides)
        return self.from_dict(d)

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None
