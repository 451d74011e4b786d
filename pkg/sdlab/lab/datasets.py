from __future__ import absolute_import, division

import logging
import os

import numpy as np

from sdlab.errors import ConfigurationError, UnknownTaskError
from sdlab.spectral.fields import sample_power_law_batch
from sdlab.structs import PowerLawSpectrum
from sdlab.util import ensure_dir

log = logging.getLogger(__name__)

_FILES = ('train', 'train_labels', 'holdout', 'holdout_labels')


class Dataset(object):
    """Training and held-out signals with one label per row.

    toy1d rows are [L] signals labelled by their cosine frequency; the
    2D tasks hold [1, H, W] images labelled by class (0 for texture2d).
    """
    def __init__(self, task, train, train_labels, holdout, holdout_labels):
        self.task = task
        self.train = train
        self.train_labels = train_labels
        self.holdout = holdout
        self.holdout_labels = holdout_labels

    @property
    def sample_shape(self):
        return self.train.shape[1:]

    def save(self, directory):
        """One ``.npy`` file per array plus a task marker, byte-stable for a seed."""
        ensure_dir(directory)
        for name in _FILES:
            np.save(os.path.join(directory, name + '.npy'), getattr(self, name))
        with open(os.path.join(directory, 'task'), 'w') as f:
            f.write(self.task + '\n')
        log.info('Wrote %s dataset (%d train, %d holdout) to %s', self.task,
                 len(self.train), len(self.holdout), directory)
        return directory

    @classmethod
    def load(cls, directory):
        marker = os.path.join(directory, 'task')
        if not os.path.exists(marker):
            raise ConfigurationError('no dataset in %s; run gen-data first' % (directory,))
        with open(marker) as f:
            task = f.read().strip()
        arrays = [np.load(os.path.join(directory, name + '.npy')) for name in _FILES]
        return cls(task, *arrays)


def toy1d_signals(n, length, alphas, probs, rng):
    """Rows cos(2 pi alpha x) on x = k / length, alpha drawn i.i.d. per row."""
    labels = rng.choice(np.asarray(alphas, dtype=np.int64), size=n, p=probs)
    x = np.arange(length) / length
    return np.cos(2.0 * np.pi * labels[:, None] * x[None, :]), labels


def texture_images(n, size, spec, rng):
    return sample_power_law_batch(spec, n, size, size, rng)[:, None]


def class_images(n, size, exponents, amplitude, rng):
    """Two-or-more class mixture; class k follows a power law with exponent k."""
    labels = rng.integers(0, len(exponents), size=n)
    images = np.empty((n, 1, size, size))
    for k, exponent in enumerate(exponents):
        rows = np.flatnonzero(labels == k)
        if rows.size:
            spec = PowerLawSpectrum(amplitude, exponent)
            images[rows] = texture_images(rows.size, size, spec, rng)
    return images, labels


def _draw(task, data, n, rng):
    if task == 'toy1d':
        return toy1d_signals(n, data.length, data.toy_alphas, data.toy_probs, rng)
    if task == 'texture2d':
        spec = PowerLawSpectrum(data.amplitude, data.alpha_s)
        return texture_images(n, data.size, spec, rng), np.zeros(n, dtype=np.int64)
    if task == 'class2d':
        return class_images(n, data.size, data.class_exponents, data.amplitude, rng)
    raise UnknownTaskError('unknown task %r' % (task,))


def gen_data(task, data, rng):
    """Synthesize the dataset of ``task``.

    Arguments:
        task (str): 'toy1d', 'texture2d' or 'class2d'
        data (DataConfig): sizes and distribution parameters
        rng (numpy.random.Generator): training rows are drawn first, then
            the held-out rows

    Returns:
        Dataset
    """
    train, train_labels = _draw(task, data, data.n_samples, rng)
    if data.holdout:
        holdout, holdout_labels = _draw(task, data, data.holdout, rng)
    else:
        holdout = np.empty((0,) + train.shape[1:])
        holdout_labels = np.empty((0,), dtype=np.int64)
    return Dataset(task, train, np.asarray(train_labels, dtype=np.int64),
                   holdout, np.asarray(holdout_labels, dtype=np.int64))


def dataset_dir(config):
    return config.data.path or os.path.join(config.output_dir, 'data')


def load_for(config):
    """Load the dataset of ``config`` and check it fits the model."""
    dataset = Dataset.load(dataset_dir(config))
    if dataset.task != config.task:
        raise ConfigurationError('dataset task %r does not match config task %r'
                                 % (dataset.task, config.task))
    model = config.model
    if model['arch'] == 'mlp' and dataset.sample_shape != (model.get('length', 64),):
        raise ConfigurationError('mlp length %r does not match signals of shape %s'
                                 % (model.get('length', 64), dataset.sample_shape))
    if model['arch'] == 'wg_unet' and dataset.sample_shape[0] != model.get('in_channels', 1):
        raise ConfigurationError('in_channels %r does not match images of shape %s'
                                 % (model.get('in_channels', 1), dataset.sample_shape))
    return dataset
