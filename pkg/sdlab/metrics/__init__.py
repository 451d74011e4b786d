from __future__ import absolute_import

from sdlab.metrics.names import Metric, MetricConfig, MetricName
from sdlab.metrics.registry import Metrics
from sdlab.metrics.reporter import AbstractMetricsReporter, CsvReporter, DictReporter
from sdlab.metrics.sensor import Sensor
from sdlab.metrics.stats import Avg, Max, Min, Total, Value

__all__ = [
    'Metric', 'MetricConfig', 'MetricName', 'Metrics', 'AbstractMetricsReporter',
    'CsvReporter', 'DictReporter', 'Avg', 'Max', 'Min', 'Sensor',
    'Total', 'Value',
]
