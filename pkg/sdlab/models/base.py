from __future__ import absolute_import

import collections
import copy
import logging

import numpy as np

from sdlab.errors import ConfigurationError, IllegalArgumentError, ShapeMismatchError
from sdlab.tensor import Tensor

log = logging.getLogger(__name__)


class Module(object):
    """Container of named parameter Tensors and child modules.

    Parameters and children are discovered from instance attributes in
    assignment order, so naming is stable across runs: a Tensor attribute
    with ``requires_grad`` is a parameter, a Module attribute is a child,
    and a list of Modules is a numbered set of children.
    """
    DEFAULT_CONFIG = {}

    def _configure(self, configs):
        extra_configs = set(configs).difference(self.DEFAULT_CONFIG)
        if extra_configs:
            raise ConfigurationError("Unrecognized configs: %s" % (extra_configs,))
        self.config = copy.copy(self.DEFAULT_CONFIG)
        self.config.update(configs)

    def named_children(self):
        for name, value in vars(self).items():
            if isinstance(value, Module):
                yield name, value
            elif isinstance(value, (list, tuple)) and value and all(
                    isinstance(v, Module) for v in value):
                for i, child in enumerate(value):
                    yield '%s.%d' % (name, i), child

    def named_parameters(self, prefix=''):
        for name, value in vars(self).items():
            if isinstance(value, Tensor) and value.requires_grad:
                yield prefix + name, value
        for name, child in self.named_children():
            for item in child.named_parameters(prefix + name + '.'):
                yield item

    def parameters(self):
        return [p for _, p in self.named_parameters()]

    def num_parameters(self):
        return int(sum(p.size for p in self.parameters()))

    def zero_grad(self):
        for p in self.parameters():
            p.zero_grad()

    def state_dict(self):
        return collections.OrderedDict(
            (name, p.data.copy()) for name, p in self.named_parameters())

    def load_state_dict(self, state):
        own = collections.OrderedDict(self.named_parameters())
        missing = set(own).difference(state)
        unexpected = set(state).difference(own)
        if missing or unexpected:
            raise IllegalArgumentError('state mismatch: missing %s, unexpected %s'
                                       % (sorted(missing), sorted(unexpected)))
        for name, p in own.items():
            value = np.asarray(state[name], dtype=np.float64)
            if value.shape != p.shape:
                raise ShapeMismatchError('load_state_dict[%s]' % (name,), p.shape, value.shape)
            p.data = value.copy()

    def copy_from(self, other):
        self.load_state_dict(other.state_dict())

    def descriptor(self):
        """JSON-ready architecture description understood by build_model."""
        raise NotImplementedError('descriptor must be implemented')

    def forward(self, *args, **kwargs):
        raise NotImplementedError('forward must be implemented')

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)
