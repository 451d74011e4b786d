"""Statistics a sensor feeds.

Windowed stats split the recorded values into windows of
``config.event_window`` values and combine the newest ``config.samples``
windows; ``Total`` and ``Value`` never forget.
"""
from __future__ import absolute_import

import abc
import collections

NAN = float('nan')


class Stat(object):
    __metaclass__ = abc.ABCMeta

    @abc.abstractmethod
    def record(self, config, value, step):
        """Take one value recorded at training step ``step``."""
        raise NotImplementedError

    @abc.abstractmethod
    def measure(self, config, step):
        """Current value as a float."""
        raise NotImplementedError


class Window(object):
    __slots__ = ('value', 'count', 'first_step', 'last_step')

    def __init__(self, value, step):
        self.value = value
        self.count = 0
        self.first_step = step
        self.last_step = step

    def __repr__(self):
        return 'Window(value=%s, count=%d, steps=%s..%s)' % (
            self.value, self.count, self.first_step, self.last_step)


class WindowedStat(Stat):
    """Subclasses give ``initial``, ``update(acc, value)`` and ``combine(windows)``."""
    __metaclass__ = abc.ABCMeta
    initial = 0.0

    def __init__(self):
        self.windows = None

    @abc.abstractmethod
    def update(self, acc, value):
        raise NotImplementedError

    @abc.abstractmethod
    def combine(self, windows):
        raise NotImplementedError

    def record(self, config, value, step):
        if self.windows is None:
            self.windows = collections.deque(maxlen=config.samples)
        if not self.windows or self.windows[-1].count >= config.event_window:
            self.windows.append(Window(self.initial, step))
        window = self.windows[-1]
        window.value = self.update(window.value, float(value))
        window.count += 1
        window.last_step = step

    def measure(self, config, step):
        return float(self.combine(list(self.windows or ())))


class Avg(WindowedStat):
    def update(self, acc, value):
        return acc + value

    def combine(self, windows):
        count = sum(w.count for w in windows)
        return sum(w.value for w in windows) / count if count else NAN


class Max(WindowedStat):
    initial = float('-inf')

    def update(self, acc, value):
        return max(acc, value)

    def combine(self, windows):
        return max([w.value for w in windows] or [self.initial])


class Min(WindowedStat):
    initial = float('inf')

    def update(self, acc, value):
        return min(acc, value)

    def combine(self, windows):
        return min([w.value for w in windows] or [self.initial])


class Total(Stat):
    """Sum of everything ever recorded."""
    def __init__(self, value=0.0):
        self.total = float(value)

    def record(self, config, value, step):
        self.total += value

    def measure(self, config, step):
        return self.total


class Value(Stat):
    """The latest value; NaN before the first record."""
    def __init__(self):
        self.value = NAN
        self.last_step = None

    def record(self, config, value, step):
        self.value = float(value)
        self.last_step = step

    def measure(self, config, step):
        return self.value
