from __future__ import absolute_import

import os

import numpy as np
import pytest

from sdlab.errors import ConfigurationError
from sdlab.lab.config import DataConfig
from sdlab.lab.datasets import Dataset, dataset_dir, gen_data, load_for, toy1d_signals
from sdlab.spectral import dft1
from sdlab.util import make_rng
from test.testutil import tiny_experiment


def test_toy1d_signals(rng):
    signals, labels = toy1d_signals(10000, 16, [3, 5], [0.2, 0.8], rng)
    assert signals.shape == (10000, 16)
    assert set(np.unique(labels)) == {3, 5}
    assert abs(np.mean(labels == 3) - 0.2) < 0.02
    x = np.arange(16) / 16.0
    row = np.flatnonzero(labels == 5)[0]
    np.testing.assert_allclose(signals[row], np.cos(2 * np.pi * 5 * x), atol=1e-12)


def test_toy1d_rows_have_two_spectral_lines(rng):
    signals, labels = toy1d_signals(500, 16, [3, 5], [0.2, 0.8], rng)
    mags = np.abs(dft1(signals))
    for row, alpha in zip(mags, labels):
        assert list(np.flatnonzero(row > 1e-9)) == [alpha, 16 - alpha]
        np.testing.assert_allclose(row[[alpha, 16 - alpha]], 8.0, atol=1e-9)


def test_texture_dataset_shapes():
    data = DataConfig(n_samples=6, holdout=2, size=8)
    dataset = gen_data('texture2d', data, make_rng(0))
    assert dataset.train.shape == (6, 1, 8, 8)
    assert dataset.holdout.shape == (2, 1, 8, 8)
    assert dataset.sample_shape == (1, 8, 8)
    np.testing.assert_array_equal(dataset.train_labels, 0)
    np.testing.assert_allclose(dataset.train.std(axis=(1, 2, 3)), 1.0, atol=1e-12)


def test_class_dataset_labels():
    data = DataConfig(n_samples=40, holdout=0, size=8, class_exponents=[1.0, 2.0, 3.0])
    dataset = gen_data('class2d', data, make_rng(1))
    assert set(np.unique(dataset.train_labels)) <= {0, 1, 2}
    assert dataset.holdout.shape == (0, 1, 8, 8)
    # steeper classes put more energy at the lowest frequencies
    low = {}
    for k in (0, 2):
        spectra = np.abs(np.fft.fft2(dataset.train[dataset.train_labels == k, 0]))
        low[k] = spectra[:, 0, 1].mean() / spectra[:, 4, 4].mean()
    assert low[2] > low[0]


def test_generation_is_deterministic(tmpdir):
    data = DataConfig(n_samples=5, holdout=3, length=8)
    a = gen_data('toy1d', data, make_rng(3)).save(str(tmpdir.join('a')))
    b = gen_data('toy1d', data, make_rng(3)).save(str(tmpdir.join('b')))
    for name in ('train.npy', 'holdout_labels.npy'):
        with open(os.path.join(a, name), 'rb') as fa, open(os.path.join(b, name), 'rb') as fb:
            assert fa.read() == fb.read()
    loaded = Dataset.load(a)
    assert loaded.task == 'toy1d'
    assert loaded.train.shape == (5, 8)


def test_load_missing_dataset(tmpdir):
    with pytest.raises(ConfigurationError):
        Dataset.load(str(tmpdir.join('nothing')))


def test_load_for_checks_fit(tmpdir):
    config = tiny_experiment(tmpdir, task='toy1d')
    gen_data('toy1d', config.data, make_rng(0)).save(dataset_dir(config))
    assert load_for(config).sample_shape == (16,)

    wrong_length = config.replace(model={'arch': 'mlp', 'length': 8, 'hidden': 4,
                                         'time_dim': 4})
    with pytest.raises(ConfigurationError):
        load_for(wrong_length)
    with pytest.raises(ConfigurationError):
        load_for(config.replace(task='texture2d'))
