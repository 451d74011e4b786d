from __future__ import absolute_import

import copy


class MetricConfig(object):
    """How sensors window the values they record.

    Keyword Arguments:
        samples (int): windows kept per windowed stat; the oldest is
            dropped when a new one opens. Default: 2
        event_window (int): recorded values (training steps) per window.
            Default: 100
        tags (dict): tags added to every metric name. Default: {}
    """
    def __init__(self, samples=2, event_window=100, tags=None):
        if samples < 1:
            raise ValueError('samples must be >= 1, got %r' % (samples,))
        if event_window < 1:
            raise ValueError('event_window must be >= 1, got %r' % (event_window,))
        self.samples = int(samples)
        self.event_window = int(event_window)
        self.tags = dict(tags or {})

    def __repr__(self):
        return 'MetricConfig(samples=%d, event_window=%d, tags=%s)' % (
            self.samples, self.event_window, self.tags)


class MetricName(object):
    """Name, group and tags of one metric, e.g. ('l-ddpm-avg', 'train').

    Equality and hashing ignore the description so names can key the
    registry. Instances are read-only and ``tags`` hands out a copy.
    """
    __slots__ = ('_name', '_group', '_description', '_tags')

    def __init__(self, name, group, description=None, tags=None):
        if not (name and group):
            raise ValueError('name and group must be non-empty')
        if tags is not None and not isinstance(tags, dict):
            raise ValueError('tags must be a dict, got %s' % (type(tags).__name__,))
        for slot, value in zip(self.__slots__, (name, group, description, dict(tags or {}))):
            object.__setattr__(self, slot, value)

    def __setattr__(self, key, value):
        raise AttributeError('MetricName is read-only')

    name = property(lambda self: self._name)
    group = property(lambda self: self._group)
    description = property(lambda self: self._description)

    @property
    def tags(self):
        return copy.copy(self._tags)

    def _key(self):
        return (self._group, self._name, frozenset(self._tags.items()))

    def __hash__(self):
        return hash(self._key())

    def __eq__(self, other):
        return isinstance(other, MetricName) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'MetricName(%r, %r, tags=%s)' % (self._name, self._group, self._tags)


class Metric(object):
    """A registered stat under its name and config."""
    def __init__(self, metric_name, stat, config):
        if metric_name is None or stat is None:
            raise ValueError('a metric needs a name and a stat')
        self.metric_name = metric_name
        self.stat = stat
        self.config = config

    def value(self, step=None):
        return self.stat.measure(self.config, step)

    def __repr__(self):
        return 'Metric(%r, %s)' % (self.metric_name, type(self.stat).__name__)
