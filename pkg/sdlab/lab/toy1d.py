"""Frequency bias on a 1D cosine mixture.

Signals cos(2 pi alpha x) with a rare and a common alpha are learned by a
two-layer MLP denoiser; a small hidden width loses the rare frequency.
"""
from __future__ import absolute_import, division

import logging
import os

import numpy as np

from sdlab.diffusion.schedule import make_linear_schedule
from sdlab.errors import ConfigurationError
from sdlab.lab import reports
from sdlab.lab.analyze import generate, open_model
from sdlab.lab.datasets import Dataset, dataset_dir, gen_data
from sdlab.lab.trainer import train
from sdlab.spectral.fourier import rfft_magnitude
from sdlab.util import make_rng

log = logging.getLogger(__name__)

_GENERATE_STREAM = 5


class Toy1dReport(object):
    """
    Attributes:
        real_hist, gen_hist (ndarray): mean |DFT| per bin 0 .. L/2
        gen_spectra (ndarray): [n, L/2 + 1] per generated signal
        peaks (list of int): the len(alphas) strongest non-DC bins, ascending
        fidelity (dict): alpha -> generated / real mass at bin alpha
        minority_alpha (int): the alpha with the lowest mixture weight
        samples (ndarray): generated signals
    """
    def __init__(self, real_hist, gen_hist, gen_spectra, peaks, fidelity, minority_alpha,
                 samples):
        self.real_hist = real_hist
        self.gen_hist = gen_hist
        self.gen_spectra = gen_spectra
        self.peaks = peaks
        self.fidelity = fidelity
        self.minority_alpha = minority_alpha
        self.samples = samples

    @property
    def minority_fidelity(self):
        return self.fidelity[self.minority_alpha]


def histogram_peaks(hist, k):
    """Indices of the ``k`` largest bins of ``hist`` excluding DC, ascending."""
    order = np.argsort(-np.asarray(hist)[1:], kind='stable') + 1
    return sorted(int(b) for b in order[:k])


def frequency_fidelity(real_hist, gen_hist, alphas):
    """Generated spectral mass at each mixture frequency relative to real."""
    fidelity = {}
    for alpha in alphas:
        alpha = int(alpha)
        if real_hist[alpha] <= 0:
            raise ConfigurationError('no real mass at bin %d' % (alpha,))
        fidelity[alpha] = float(gen_hist[alpha] / real_hist[alpha])
    return fidelity


def toy1d_report(real, generated, alphas, probs):
    real_spectra = rfft_magnitude(real)
    gen_spectra = rfft_magnitude(generated)
    real_hist = real_spectra.mean(axis=0)
    gen_hist = gen_spectra.mean(axis=0)
    fidelity = frequency_fidelity(real_hist, gen_hist, alphas)
    minority = int(alphas[int(np.argmin(probs))])
    return Toy1dReport(real_hist, gen_hist, gen_spectra, histogram_peaks(gen_hist, len(alphas)),
                       fidelity, minority, generated)


def run_toy1d(config, max_steps=None):
    """Generate data if needed, train the MLP, sample and report.

    Returns:
        Toy1dReport
    """
    if config.task != 'toy1d':
        raise ConfigurationError('run_toy1d needs task "toy1d", got %r' % (config.task,))
    data_dir = dataset_dir(config)
    if not os.path.exists(os.path.join(data_dir, 'task')):
        gen_data(config.task, config.data, make_rng(config.seed)).save(data_dir)
    checkpoint = train(config, max_steps=max_steps)
    _, model = open_model(checkpoint)
    sched = make_linear_schedule(**config.schedule.config)
    n = config.analysis.n_generate
    generated = generate(model, sched, config.sampler, (config.data.length,), n,
                         make_rng([config.seed, _GENERATE_STREAM]),
                         batch_size=config.analysis.batch_size)
    dataset = Dataset.load(data_dir)
    report = toy1d_report(dataset.train, generated, config.data.toy_alphas,
                          config.data.toy_probs)
    reports.write_toy1d(report, os.path.join(config.output_dir, 'toy1d'))
    log.info('toy1d hidden=%s peaks %s minority alpha=%d fidelity %.3f',
             config.model.get('hidden'), report.peaks, report.minority_alpha,
             report.minority_fidelity)
    return report
