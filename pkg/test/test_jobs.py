from __future__ import absolute_import

import os

import pytest

from sdlab.errors import ConfigurationError
from sdlab.lab.jobs import THREADS_ENV, max_workers, run_jobs, run_one
from test.testutil import tiny_experiment


def test_max_workers_honours_env(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '2')
    assert max_workers(8) == 2
    assert max_workers(1) == 1
    monkeypatch.delenv(THREADS_ENV)
    assert 1 <= max_workers(3) <= 3


@pytest.mark.parametrize('value', ['x', '0', '-1'])
def test_max_workers_rejects_bad_env(monkeypatch, value):
    monkeypatch.setenv(THREADS_ENV, value)
    with pytest.raises(ConfigurationError):
        max_workers(2)


def test_distinct_output_dirs(tmpdir):
    config = tiny_experiment(tmpdir)
    with pytest.raises(ConfigurationError):
        run_jobs([config, config], 2, command='gen-data')


def test_run_one_returns_exit_codes(tmpdir):
    assert run_one('gen-data', {'task': 'audio'}) == 2
    config = tiny_experiment(tmpdir)
    assert run_one('gen-data', config.to_dict()) == 0
    assert os.path.exists(os.path.join(str(tmpdir), 'data', 'task'))


def test_sequential_jobs(tmpdir, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '1')
    configs = [tiny_experiment(tmpdir.join('a')), tiny_experiment(tmpdir.join('b'))]
    assert run_jobs(configs, 4, command='gen-data') == [0, 0]
    for c in configs:
        assert os.path.exists(os.path.join(c.output_dir, 'data', 'train.npy'))


def test_parallel_jobs(tmpdir, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '2')
    configs = [tiny_experiment(tmpdir.join(name), task='toy1d', optimizer={'steps': 2})
               for name in ('a', 'b')]
    for c in configs:
        assert run_one('gen-data', c.to_dict()) == 0
    assert run_jobs(configs, 2, command='train') == [0, 0]
    for c in configs:
        assert os.path.exists(os.path.join(c.output_dir, 'checkpoint.sdlab'))
