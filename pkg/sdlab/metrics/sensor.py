from __future__ import absolute_import

import threading

from sdlab.metrics.names import Metric


class Sensor(object):
    """Feeds every recorded value to the stats attached to it.

    One sensor per training quantity, e.g. ``l-ddpm`` with an average, a
    max and the latest value attached.
    """
    def __init__(self, registry, name, config):
        if not name:
            raise ValueError('sensor name must be non-empty')
        self._lock = threading.RLock()
        self._registry = registry
        self.name = name
        self.config = config
        self._metrics = []
        self.last_step = None

    @property
    def metrics(self):
        return tuple(self._metrics)

    def record(self, value=1.0, step=None):
        """Record ``value`` at training step ``step``, one past the last
        recorded step when omitted."""
        if step is None:
            step = 0 if self.last_step is None else self.last_step + 1
        with self._lock:
            for metric in self._metrics:
                metric.stat.record(metric.config, value, step)
            self.last_step = step

    def add(self, metric_name, stat, config=None):
        """Attach ``stat`` under ``metric_name`` and register it.

        Raises:
            ValueError: the name is already registered
        """
        metric = Metric(metric_name, stat, config or self.config)
        with self._lock:
            self._registry.register_metric(metric)
            self._metrics.append(metric)
        return metric
