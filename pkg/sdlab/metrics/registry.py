from __future__ import absolute_import

import logging
import threading

from sdlab.metrics.names import MetricConfig, MetricName
from sdlab.metrics.sensor import Sensor

log = logging.getLogger(__name__)


class Metrics(object):
    """Sensors and the metrics they feed, plus the reporters watching them.

        metrics = Metrics(MetricConfig(samples=1, event_window=100),
                          [CsvReporter('metrics.csv')])
        sensor = metrics.sensor('l-ddpm')
        sensor.add(metrics.metric_name('l-ddpm-avg', 'train'), Avg())
        sensor.record(loss, step)
        metrics.flush(step)

    Arguments:
        default_config (MetricConfig): used by sensors created without
            their own config
        reporters (list of AbstractMetricsReporter)
    """
    def __init__(self, default_config=None, reporters=None):
        self._lock = threading.RLock()
        self.config = default_config or MetricConfig()
        self.metrics = {}
        self._sensors = {}
        self._reporters = list(reporters or [])
        for reporter in self._reporters:
            reporter.init([])

    def metric_name(self, name, group, description='', tags=None):
        """MetricName carrying the default tags merged with ``tags``."""
        merged = dict(self.config.tags)
        merged.update(tags or {})
        return MetricName(name, group, description, merged)

    def get_sensor(self, name):
        if not name:
            raise ValueError('sensor name must be non-empty')
        return self._sensors.get(name)

    def sensor(self, name, config=None):
        """Get the sensor called ``name``, creating it on first use."""
        with self._lock:
            sensor = self.get_sensor(name)
            if sensor is None:
                sensor = Sensor(self, name, config or self.config)
                self._sensors[name] = sensor
                log.debug('Added sensor %s', name)
            return sensor

    def register_metric(self, metric):
        with self._lock:
            if metric.metric_name in self.metrics:
                raise ValueError('metric %r is already registered' % (metric.metric_name,))
            self.metrics[metric.metric_name] = metric
            for reporter in self._reporters:
                reporter.metric_change(metric)

    def remove_metric(self, metric_name):
        """Unregister and return a metric, or None if unknown."""
        with self._lock:
            metric = self.metrics.pop(metric_name, None)
            if metric is not None:
                for reporter in self._reporters:
                    reporter.metric_removal(metric)
            return metric

    def flush(self, step):
        for reporter in self._reporters:
            reporter.flush(step)

    def close(self):
        for reporter in self._reporters:
            reporter.close()
        self.metrics.clear()
