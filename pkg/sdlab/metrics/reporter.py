from __future__ import absolute_import

import abc
import csv
import logging
import os
import threading

log = logging.getLogger(__name__)


class AbstractMetricsReporter(object):
    """Listens as metrics are created or removed so they can be reported."""
    __metaclass__ = abc.ABCMeta

    @abc.abstractmethod
    def init(self, metrics):
        """Register every metric that exists when the reporter is added.

        Arguments:
            metrics (list of Metric)
        """
        raise NotImplementedError

    @abc.abstractmethod
    def metric_change(self, metric):
        raise NotImplementedError

    @abc.abstractmethod
    def metric_removal(self, metric):
        raise NotImplementedError

    def flush(self, step):
        """Called by the training loop every log interval."""
        pass

    def close(self):
        pass


def metric_key(metric, prefix=''):
    """'prefix.group.k=v,..' category joined to the metric name by ':'"""
    name = metric.metric_name
    tags = ','.join('%s=%s' % (k, v) for k, v in sorted(name.tags.items()))
    category = '.'.join(x for x in [prefix, name.group, tags] if x)
    return '%s:%s' % (category, name.name)


class DictReporter(AbstractMetricsReporter):
    """Keeps metrics in a two level dict of category > name > metric."""
    def __init__(self, prefix=''):
        self._lock = threading.Lock()
        self._prefix = prefix or ''
        self._store = {}

    def snapshot(self, step=None):
        """
        Nested dict of current values, e.g.
        {'train': {'l-ddpm-avg': 0.12, 'l-ddpm-max': 0.31}}
        """
        with self._lock:
            return dict((category, dict((name, metric.value(step))
                                        for name, metric in metrics.items()))
                        for category, metrics in self._store.items())

    def init(self, metrics):
        for metric in metrics:
            self.metric_change(metric)

    def metric_change(self, metric):
        category = metric_key(metric, self._prefix).split(':', 1)[0]
        with self._lock:
            self._store.setdefault(category, {})[metric.metric_name.name] = metric

    def metric_removal(self, metric):
        category = metric_key(metric, self._prefix).split(':', 1)[0]
        with self._lock:
            metrics = self._store.get(category, {})
            removed = metrics.pop(metric.metric_name.name, None)
            if not metrics:
                self._store.pop(category, None)
            return removed


class CsvReporter(AbstractMetricsReporter):
    """Appends one row of every metric's value per flush.

    Columns are ``step`` followed by the metric keys sorted; the header
    is fixed by the first flush, metrics added later are logged and left
    out. With ``append`` an existing file keeps its header and rows.
    """
    def __init__(self, path, prefix='', append=False):
        self.path = path
        self._prefix = prefix or ''
        self._lock = threading.Lock()
        self._metrics = {}
        self._columns = None
        if append and os.path.exists(path):
            with open(path) as f:
                header = next(csv.reader(f), None)
            if header:
                self._columns = header[1:]

    def init(self, metrics):
        for metric in metrics:
            self.metric_change(metric)

    def metric_change(self, metric):
        key = metric_key(metric, self._prefix)
        with self._lock:
            if self._columns is not None and key not in self._columns:
                log.warning('Metric %s registered after the first flush; not written', key)
            self._metrics[key] = metric

    def metric_removal(self, metric):
        with self._lock:
            return self._metrics.pop(metric_key(metric, self._prefix), None)

    def flush(self, step):
        with self._lock:
            first = self._columns is None
            if first:
                self._columns = sorted(self._metrics)
            row = [step]
            for key in self._columns:
                metric = self._metrics.get(key)
                row.append('' if metric is None else repr(metric.value(step)))
            with open(self.path, 'w' if first else 'a') as f:
                writer = csv.writer(f, lineterminator='\n')
                if first:
                    writer.writerow(['step'] + self._columns)
                writer.writerow(row)
