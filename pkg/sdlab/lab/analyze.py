from __future__ import absolute_import

import logging
import os

import numpy as np

from sdlab.analysis.evolution import (
    dft_difference_map, frequency_evolution_report, gating_dynamics)
from sdlab.analysis.freq_error import (
    bootstrap_freq_error, default_n_bins, freq_error, scaled_cutoff)
from sdlab.checkpoint import Checkpoint
from sdlab.diffusion.samplers import SamplerConfig, sample
from sdlab.diffusion.schedule import make_linear_schedule
from sdlab.errors import ConfigurationError, UnknownAnalysisError
from sdlab.lab import reports
from sdlab.lab.datasets import load_for
from sdlab.lab.trainer import n_classes
from sdlab.spectral.fields import sample_power_law_batch
from sdlab.structs import PowerLawSpectrum
from sdlab.util import ensure_dir, make_rng

log = logging.getLogger(__name__)

# rng stream ids, kept apart from the training streams
_SAMPLE_STREAM = 3
_BOOT_STREAM = 4
_ORACLE_STREAM = 6


def open_model(path):
    """(Checkpoint, model with its parameters) of ``path``."""
    ckpt = Checkpoint.load(path)
    return ckpt, ckpt.build_model()


def sample_shape(config):
    """Shape of one sample of the configured model and data."""
    model = config.model
    if model['arch'] == 'mlp':
        return (model.get('length', config.data.length),)
    return (model.get('in_channels', 1), config.data.size, config.data.size)


def balanced_labels(n, classes):
    """0, 1, .., classes-1, 0, 1, .. for conditional sampling."""
    return np.arange(n, dtype=np.int64) % classes


def conditioning(model, n):
    """(cond, uncond_token) for a batch of ``n`` from ``model``."""
    classes = n_classes(model)
    if not classes:
        return None, None
    return balanced_labels(n, classes), model.uncond_token


def generate(model, sched, sampler_config, sample_shape, n, rng, batch_size=100,
             snapshots=None):
    """Draw ``n`` samples in batches; labels cycle through the classes.

    Returns:
        ndarray [n, *sample_shape]
    """
    out = []
    cond_all, uncond_token = conditioning(model, n)
    for start in range(0, n, batch_size):
        m = min(batch_size, n - start)
        cond = cond_all[start:start + m] if cond_all is not None else None
        out.append(sample(model, sched, sampler_config, (m,) + tuple(sample_shape), rng,
                          cond=cond, uncond_token=uncond_token,
                          snapshots=snapshots if start == 0 else None))
    return np.concatenate(out, axis=0)


class AnalysisContext(object):
    """What every analysis needs: config, model, schedule and output dir."""
    def __init__(self, config, checkpoint_path, out_dir=None):
        self.config = config
        self.checkpoint_path = checkpoint_path
        self.ckpt, self.model = open_model(checkpoint_path)
        self.sched = make_linear_schedule(**config.schedule.config)
        self.out = ensure_dir(out_dir or os.path.join(config.output_dir, 'analysis'))
        self.rng = make_rng([config.seed, _SAMPLE_STREAM])
        self._dataset = None

    @property
    def dataset(self):
        if self._dataset is None:
            self._dataset = load_for(self.config)
        return self._dataset

    @property
    def sample_shape(self):
        return sample_shape(self.config)

    def batch_shape(self, n):
        return (n,) + tuple(self.sample_shape)


def run_evolution(ctx):
    a = ctx.config.analysis
    n = min(a.batch_size, a.n_generate)
    cond, uncond_token = conditioning(ctx.model, n)
    report = frequency_evolution_report(ctx.model, ctx.sched, ctx.rng, a.n_snapshots,
                                        ctx.batch_shape(n), sampler_config=ctx.config.sampler,
                                        n_bins=a.n_bins, cond=cond, uncond_token=uncond_token)
    out = os.path.join(ctx.out, 'evolution')
    reports.write_evolution(report, out)
    return out


def run_gating(ctx):
    if not hasattr(ctx.model, 'resamplers'):
        raise ConfigurationError('gating analysis needs a wg_unet model')
    a = ctx.config.analysis
    # one image per trajectory, as many trajectories as configured
    cond, uncond_token = conditioning(ctx.model, 1)
    recorder = gating_dynamics(ctx.model, ctx.sched, ctx.config.sampler, ctx.batch_shape(1),
                               ctx.rng, n_trajectories=a.n_trajectories, cond=cond,
                               uncond_token=uncond_token)
    return reports.write_gating(recorder, os.path.join(ctx.out, 'gating.csv'))


def run_freq_error(ctx):
    a = ctx.config.analysis
    real = ctx.dataset.holdout
    if len(real) < 2:
        raise ConfigurationError('freq_error needs data.holdout >= 2')
    gen = generate(ctx.model, ctx.sched, ctx.config.sampler, ctx.sample_shape, a.n_generate,
                   ctx.rng, batch_size=a.batch_size)
    np.save(os.path.join(ctx.out, 'generated.npy'), gen)
    cutoff = a.cutoff if a.cutoff is not None else scaled_cutoff(real.shape[-1])
    report = freq_error(real, gen, cutoff, n_bins=a.n_bins)
    sigmas = bootstrap_freq_error(real, gen, cutoff, a.n_boot,
                                  make_rng([ctx.config.seed, _BOOT_STREAM]), n_bins=a.n_bins)
    log.info('freq_error low %.4g (+-%.2g) high %.4g (+-%.2g)', report.low_error, sigmas[0],
             report.high_error, sigmas[1])
    return reports.write_freq_error(report, sigmas, os.path.join(ctx.out, 'freq_error.csv'))


def run_dft_diff(ctx):
    """|F_a - F_b| between this checkpoint and ``analysis.compare_checkpoint``.

    Both models start from the same noise, so the map isolates what the
    two trainings changed.
    """
    a = ctx.config.analysis
    if not a.compare_checkpoint:
        raise ConfigurationError('dft_diff needs analysis.compare_checkpoint')
    _, other = open_model(a.compare_checkpoint)
    n = min(a.batch_size, a.n_generate)
    seed = [ctx.config.seed, _SAMPLE_STREAM, 1]
    mine = generate(ctx.model, ctx.sched, ctx.config.sampler, ctx.sample_shape, n,
                    make_rng(seed), batch_size=n)
    theirs = generate(other, ctx.sched, ctx.config.sampler, ctx.sample_shape, n,
                      make_rng(seed), batch_size=n)
    diff_map, profile = dft_difference_map(mine, theirs, n_bins=a.n_bins)
    return reports.write_dft_diff(diff_map, profile, os.path.join(ctx.out, 'dft_diff'))


ANALYSES = {
    'evolution': run_evolution,
    'gating': run_gating,
    'freq_error': run_freq_error,
    'dft_diff': run_dft_diff,
}


def analyze(config, checkpoint_path, analyses=None, out_dir=None):
    """Run analyses against a checkpoint.

    Arguments:
        config (ExperimentConfig)
        checkpoint_path (str)

    Keyword Arguments:
        analyses (list of str): defaults to ``config.analysis.analyses``
        out_dir (str): defaults to <output_dir>/analysis

    Returns:
        dict: analysis name -> output path

    Raises:
        UnknownAnalysisError: a name not in ANALYSES
    """
    names = list(analyses or config.analysis.analyses)
    unknown = [name for name in names if name not in ANALYSES]
    if unknown:
        raise UnknownAnalysisError('unknown analysis %s, expected any of %s'
                                   % (unknown, sorted(ANALYSES)))
    ctx = AnalysisContext(config, checkpoint_path, out_dir)
    results = {}
    for name in names:
        log.info('Running %s analysis on %s', name, checkpoint_path)
        results[name] = ANALYSES[name](ctx)
    return results


def sample_command(config, checkpoint_path, n=None, out_dir=None):
    """Generate a batch with x0 snapshots and export it as frames."""
    ctx = AnalysisContext(config, checkpoint_path, out_dir or os.path.join(config.output_dir,
                                                                           'samples'))
    a = config.analysis
    n = n or min(a.batch_size, a.n_generate)
    settings = dict(config.sampler.config)
    if not settings['n_snapshots']:
        settings['n_snapshots'] = a.n_snapshots
    snaps = []
    sampler_config = SamplerConfig(**settings)
    samples = generate(ctx.model, ctx.sched, sampler_config, ctx.sample_shape, n,
                       ctx.rng, batch_size=n, snapshots=snaps)
    n_steps = len(sampler_config.timesteps(ctx.sched.T))
    return reports.export_trajectory(samples, snaps, ctx.out, n_steps)


def wiener_report(config, oracle=None, out_dir=None):
    """Closed-form filter table of the configured power law, optionally
    with least-squares oracle columns from sampled fields.

    Returns:
        str: path of wiener.csv
    """
    a = config.analysis
    size = config.data.size
    spectrum = PowerLawSpectrum(config.data.amplitude, config.data.alpha_s)
    n_bins = a.n_bins or default_n_bins(size, size)
    rng = make_rng([config.seed, _ORACLE_STREAM])
    use_oracle = a.oracle if oracle is None else oracle
    signals = None
    if use_oracle:
        signals = sample_power_law_batch(spectrum, a.oracle_samples, size, size, rng)
    header, rows = reports.wiener_table(spectrum, a.alpha_bars, size, n_bins,
                                        oracle_signals=signals, rng=rng)
    return reports.write_wiener_report(header, rows,
                                       out_dir or os.path.join(config.output_dir, 'wiener'))
