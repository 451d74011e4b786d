"""Spectral views of the sampling trajectory and of trained resamplers."""
from __future__ import absolute_import, division

import collections
import logging

import numpy as np

from sdlab.analysis.freq_error import default_n_bins, sample_profiles
from sdlab.diffusion.samplers import SamplerConfig, sample
from sdlab.errors import IllegalArgumentError, ShapeMismatchError
from sdlab.spectral.fourier import SpectrumGrid, dft2_array
from sdlab.spectral.profile import radial_profile

log = logging.getLogger(__name__)

BANDS = ('ll', 'lh', 'hl', 'hh')


class EvolutionReport(object):
    """Radial |DFT| profiles of the x0 estimate along one sampling run.

    Attributes:
        snapshots (list of Snapshot): recorded x0 estimates
        bin_centers (ndarray): radial frequency of each bin
        counts (ndarray): coefficients per bin
        profiles (ndarray): [n_snapshots, n_bins] batch-mean profiles
        final_profile (ndarray): profile of the final samples
        ratios (ndarray): profiles / final_profile, 0 where the final bin
            is empty
        samples (ndarray): the final batch
    """
    def __init__(self, snapshots, bin_centers, counts, profiles, final_profile, samples):
        self.snapshots = snapshots
        self.bin_centers = bin_centers
        self.counts = counts
        self.profiles = profiles
        self.final_profile = final_profile
        self.samples = samples
        self.ratios = np.divide(profiles, final_profile[None, :],
                                out=np.zeros_like(profiles),
                                where=final_profile[None, :] > 0)

    def quartile_masks(self):
        """Boolean masks of the lowest and highest quarter of non-empty bins."""
        filled = np.flatnonzero(self.counts > 0)
        k = max(1, len(filled) // 4)
        low = np.zeros(len(self.counts), dtype=bool)
        high = np.zeros(len(self.counts), dtype=bool)
        low[filled[:k]] = True
        high[filled[-k:]] = True
        return low, high


def convergence_index(ratios, mask, fraction=0.9):
    """First snapshot at which the masked bins reach ``fraction`` of final.

    Uses the mean ratio over the masked bins; returns len(ratios) when the
    level is never reached.
    """
    level = ratios[:, mask].mean(axis=1)
    hits = np.flatnonzero(level >= fraction)
    return int(hits[0]) if hits.size else len(ratios)


def band_convergence(report, fraction=0.9):
    """(low-quartile index, high-quartile index) of convergence."""
    low, high = report.quartile_masks()
    return (convergence_index(report.ratios, low, fraction),
            convergence_index(report.ratios, high, fraction))


def frequency_evolution_report(model, sched, rng, n_snapshots, shape, sampler_config=None,
                               n_bins=None, cond=None, uncond_token=None):
    """Sample once while recording x0 estimates and profile each of them.

    Arguments:
        model (callable): noise predictor
        sched (NoiseSchedule)
        rng (numpy.random.Generator)
        n_snapshots (int): >= 1; with 1 only the last iteration is kept
        shape (tuple): batch shape [N, ..., H, W]

    Returns:
        EvolutionReport
    """
    if n_snapshots < 1:
        raise IllegalArgumentError('n_snapshots must be >= 1, got %r' % (n_snapshots,))
    if sampler_config is None:
        sampler_config = SamplerConfig()
    elif isinstance(sampler_config, dict):
        sampler_config = SamplerConfig(**sampler_config)
    settings = dict(sampler_config.config)
    settings['n_snapshots'] = n_snapshots
    snaps = []
    x = sample(model, sched, SamplerConfig(**settings), shape, rng, cond=cond,
               uncond_token=uncond_token, snapshots=snaps)
    if n_bins is None:
        n_bins = default_n_bins(*shape[-2:])
    final, centers, counts = sample_profiles(x, n_bins)
    profiles = np.stack([sample_profiles(s.x0_hat, n_bins)[0].mean(axis=0) for s in snaps])
    log.debug('evolution report: %d snapshots, %d bins', len(snaps), n_bins)
    return EvolutionReport(snaps, centers, counts, profiles, final.mean(axis=0), x)


def dft_difference_map(a, b, n_bins=None):
    """Mean |F(a_i) - F(b_i)| over paired samples, DC centered.

    Returns:
        (map [H, W], RadialProfile of the map)
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatchError('dft_difference_map', a.shape, b.shape)
    h, w = a.shape[-2:]
    diff = np.abs(dft2_array(a.reshape((-1, h, w))) - dft2_array(b.reshape((-1, h, w))))
    grid = SpectrumGrid(diff.mean(axis=0)).centered()
    if n_bins is None:
        n_bins = default_n_bins(h, w)
    return grid.coefficients.real.copy(), radial_profile(grid, n_bins)


class GateRecorder(object):
    """Collects resampler gates per (t, layer) across sampling runs."""
    def __init__(self):
        self._values = collections.OrderedDict()

    def record(self, t, model):
        for layer, module in model.resamplers():
            gates = getattr(module, 'last_gates', None)
            if gates is None:
                continue
            key = (int(t), layer)
            bucket = self._values.setdefault(key, dict((b, []) for b in BANDS))
            for band, value in zip(BANDS, gates):
                bucket[band].append(np.ravel(value))

    def rows(self):
        """(t, layer, ll_mean, ll_std, ..., hh_mean, hh_std) sorted by t desc."""
        out = []
        for (t, layer), bucket in sorted(self._values.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
            row = [t, layer]
            for band in BANDS:
                values = np.concatenate(bucket[band])
                row.extend([float(values.mean()), float(values.std())])
            out.append(tuple(row))
        return out

    @staticmethod
    def header():
        cols = ['t', 'layer']
        for band in BANDS:
            cols.extend([band + '_mean', band + '_std'])
        return tuple(cols)


class GateTracingModel(object):
    """Model wrapper that hands the gates of every forward to a recorder."""
    def __init__(self, model, recorder):
        self.model = model
        self.recorder = recorder

    def __call__(self, x_t, t, cond=None):
        out = self.model(x_t, t, cond)
        self.recorder.record(np.ravel(t)[0], self.model)
        return out


def gating_dynamics(model, sched, sampler_config, shape, rng, n_trajectories=1,
                    cond=None, uncond_token=None):
    """Sample ``n_trajectories`` batches and return the filled GateRecorder."""
    recorder = GateRecorder()
    traced = GateTracingModel(model, recorder)
    for _ in range(n_trajectories):
        sample(traced, sched, sampler_config, shape, rng, cond=cond, uncond_token=uncond_token)
    return recorder
