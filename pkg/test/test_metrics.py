import csv

import pytest

from sdlab.metrics import (
    Avg, CsvReporter, DictReporter, Max, MetricConfig, MetricName, Metrics, Min, Total,
    Value)
from sdlab.metrics.reporter import metric_key

EPS = 0.000001


@pytest.fixture
def config():
    return MetricConfig(samples=2, event_window=3)


@pytest.fixture
def reporter():
    return DictReporter()


@pytest.fixture
def metrics(request, config, reporter):
    metrics = Metrics(config, [reporter])
    yield metrics
    metrics.close()


def _value(metrics, name, group='train'):
    return metrics.metrics.get(metrics.metric_name(name, group)).value()


def test_MetricName():
    # equal iff name, group and tags match; descriptions do not matter
    name1 = MetricName('name', 'group', 'A metric.', {'a': 1, 'b': 2})
    name2 = MetricName('name', 'group', 'A description.', {'a': 1, 'b': 2})
    assert name1 == name2
    assert hash(name1) == hash(name2)

    assert MetricName('foo', 'group') != MetricName('name', 'group')
    assert MetricName('name', 'foo') != MetricName('name', 'group')

    with pytest.raises(ValueError):
        MetricName('', 'group')
    with pytest.raises(ValueError):
        MetricName('name', None)
    with pytest.raises(ValueError):
        MetricName('name', 'group', tags=set())

    tags = {'a': 1}
    name = MetricName('name', 'group', 'description', tags=tags)
    with pytest.raises(AttributeError):
        name.name = 'new name'
    # tags is a copy, so the instance isn't altered
    name.tags['b'] = 2
    assert name.tags == tags


def test_metric_config_validation():
    with pytest.raises(ValueError):
        MetricConfig(samples=0)
    with pytest.raises(ValueError):
        MetricConfig(event_window=0)


def test_simple_stats(metrics):
    sensor = metrics.sensor('l-ddpm')
    sensor.add(metrics.metric_name('avg', 'train'), Avg())
    sensor.add(metrics.metric_name('max', 'train'), Max())
    sensor.add(metrics.metric_name('min', 'train'), Min())
    sensor.add(metrics.metric_name('last', 'train'), Value())
    sensor.add(metrics.metric_name('total', 'train'), Total())

    for i in range(5):
        sensor.record(i)

    assert abs(2.0 - _value(metrics, 'avg')) < EPS
    assert _value(metrics, 'max') == 4.0
    assert _value(metrics, 'min') == 0.0
    assert _value(metrics, 'last') == 4.0
    assert _value(metrics, 'total') == 10.0
    assert sensor.last_step == 4


def test_windows_roll_over_in_events(metrics):
    sensor = metrics.sensor('loss')
    sensor.add(metrics.metric_name('avg', 'train'), Avg())
    sensor.add(metrics.metric_name('min', 'train'), Min())
    sensor.add(metrics.metric_name('total', 'train'), Total())

    for i in range(10):
        sensor.record(float(i), step=i)

    # two samples of three events: the live windows hold 6, 7, 8 and 9
    assert abs(7.5 - _value(metrics, 'avg')) < EPS
    assert _value(metrics, 'min') == 6.0
    # Total never windows
    assert _value(metrics, 'total') == 45.0


def test_empty_stats(metrics):
    sensor = metrics.sensor('empty')
    sensor.add(metrics.metric_name('avg', 'train'), Avg())
    sensor.add(metrics.metric_name('max', 'train'), Max())
    sensor.add(metrics.metric_name('last', 'train'), Value())
    assert _value(metrics, 'avg') != _value(metrics, 'avg')
    assert _value(metrics, 'max') == float('-inf')
    assert _value(metrics, 'last') != _value(metrics, 'last')


def test_sensor_is_get_or_create(metrics):
    assert metrics.sensor('a') is metrics.sensor('a')
    assert metrics.get_sensor('b') is None
    with pytest.raises(ValueError):
        metrics.get_sensor('')


def test_duplicate_metric_name(metrics):
    metrics.sensor('a').add(metrics.metric_name('x', 'grp'), Value())
    with pytest.raises(ValueError):
        metrics.sensor('b').add(metrics.metric_name('x', 'grp'), Value())


def test_default_tags_are_merged():
    metrics = Metrics(MetricConfig(tags={'run': 'r1'}))
    name = metrics.metric_name('avg', 'train', tags={'task': 'toy1d'})
    assert name.tags == {'run': 'r1', 'task': 'toy1d'}
    metrics.close()


def test_dict_reporter_snapshot(metrics, reporter):
    sensor = metrics.sensor('loss')
    sensor.add(metrics.metric_name('avg', 'train'), Avg())
    sensor.add(metrics.metric_name('last', 'eval'), Value())
    sensor.record(1.0)
    sensor.record(3.0)
    assert reporter.snapshot() == {'train': {'avg': 2.0}, 'eval': {'last': 3.0}}

    metrics.remove_metric(metrics.metric_name('last', 'eval'))
    assert reporter.snapshot() == {'train': {'avg': 2.0}}


def test_metric_key_includes_tags():
    metrics = Metrics()
    sensor = metrics.sensor('s')
    sensor.add(metrics.metric_name('avg', 'train', tags={'b': 2, 'a': 1}), Avg())
    metric = list(metrics.metrics.values())[0]
    assert metric_key(metric) == 'train.a=1,b=2:avg'
    assert metric_key(metric, 'sdlab') == 'sdlab.train.a=1,b=2:avg'


def test_csv_reporter(tmpdir, caplog):
    path = str(tmpdir.join('metrics.csv'))
    metrics = Metrics(MetricConfig(event_window=2), [CsvReporter(path)])
    sensor = metrics.sensor('loss')
    sensor.add(metrics.metric_name('max', 'train'), Max())
    sensor.add(metrics.metric_name('avg', 'train'), Avg())
    sensor.record(1.0, step=0)
    sensor.record(3.0, step=1)
    metrics.flush(1)

    # added after the header is fixed
    sensor.add(metrics.metric_name('last', 'train'), Value())
    sensor.record(5.0, step=2)
    metrics.flush(2)
    metrics.close()

    with open(path) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ['step', 'train:avg', 'train:max']
    assert rows[1] == ['1', '2.0', '3.0']
    assert rows[2][0] == '2'
    assert float(rows[2][2]) == 5.0
    assert len(rows[2]) == 3
    assert 'registered after the first flush' in caplog.text


def test_csv_reporter_append_keeps_header(tmpdir):
    path = str(tmpdir.join('metrics.csv'))
    first = Metrics(reporters=[CsvReporter(path)])
    first.sensor('loss').add(first.metric_name('last', 'train'), Value())
    first.sensor('loss').record(1.0)
    first.flush(0)

    second = Metrics(reporters=[CsvReporter(path, append=True)])
    second.sensor('loss').add(second.metric_name('last', 'train'), Value())
    second.sensor('loss').record(2.0)
    second.flush(1)

    with open(path) as f:
        rows = list(csv.reader(f))
    assert rows == [['step', 'train:last'], ['0', '1.0'], ['1', '2.0']]
