from __future__ import absolute_import, division

import logging

import numpy as np

from sdlab.errors import (
    IllegalArgumentError, InsufficientSamplesError, ShapeMismatchError)
from sdlab.spectral.fourier import dft2_array
from sdlab.spectral.profile import (
    per_sample_profiles, radial_bin_edges, radial_frequencies)
from sdlab.structs import FreqErrorReport

log = logging.getLogger(__name__)

FREQ_ERROR_CSV_HEADER = ('cutoff', 'low_error', 'high_error', 'n_real', 'n_gen')

# Cut-off quoted for 256 px images; it is rescaled to other sizes relative
# to the Nyquist radius.
REFERENCE_CUTOFF = 28.0
REFERENCE_SIZE = 256


def scaled_cutoff(size, reference_cutoff=REFERENCE_CUTOFF, reference_size=REFERENCE_SIZE):
    """Keep the low/high split at the same fraction of Nyquist.

    28 cycles on 256 px becomes 3.5 cycles on 32 px.
    """
    return reference_cutoff / (reference_size / 2.0) * (size / 2.0)


def _as_maps(batch):
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim < 3:
        raise IllegalArgumentError('need a batch of [N, ..., H, W] images, got shape %s'
                                   % (batch.shape,))
    return batch


def default_n_bins(height, width):
    return max(2, int(np.ceil(radial_frequencies(height, width).max())))


def sample_profiles(batch, n_bins=None):
    """Per-image radial mean |DFT|: ([N, n_bins] means, bin centers, counts).

    Channels of a [N, C, H, W] batch are averaged per image.
    """
    batch = _as_maps(batch)
    n = batch.shape[0]
    h, w = batch.shape[-2:]
    if n_bins is None:
        n_bins = default_n_bins(h, w)
    edges = radial_bin_edges(h, w, n_bins)
    radius = radial_frequencies(h, w)
    mags = np.abs(dft2_array(batch.reshape((-1, h, w))))
    means, counts = per_sample_profiles(mags, radius, edges)
    means = means.reshape((n, -1, n_bins)).mean(axis=1)
    return means, 0.5 * (edges[1:] + edges[:-1]), counts


def _split(centers, counts, cutoff):
    if not 0 < cutoff < centers[-1]:
        raise IllegalArgumentError('cutoff %r must lie inside (0, %g)' % (cutoff, centers[-1]))
    filled = counts > 0
    low = filled & (centers < cutoff)
    high = filled & (centers >= cutoff)
    if not low.any() or not high.any():
        raise IllegalArgumentError('cutoff %r leaves one band without bins' % (cutoff,))
    return low, high


def _errors(real_mean, gen_mean, low, high):
    diff = real_mean - gen_mean
    return float(diff[low].mean()), float(diff[high].mean())


def _check_pair(real, gen):
    real, gen = _as_maps(real), _as_maps(gen)
    if real.shape[1:] != gen.shape[1:]:
        raise ShapeMismatchError('freq_error', real.shape, gen.shape, 'image sizes differ')
    for name, batch in (('real', real), ('gen', gen)):
        if batch.shape[0] < 2:
            raise InsufficientSamplesError('%s batch needs at least 2 samples, got %d'
                                           % (name, batch.shape[0]))
    return real, gen


def freq_error(real, gen, cutoff, n_bins=None):
    """Signed low/high band gap of mean DFT magnitude, real minus generated.

    Arguments:
        real, gen (ndarray): batches [N, H, W] or [N, C, H, W] of equal size
        cutoff (float): radial frequency in cycles per image splitting the
            bins into low (< cutoff) and high (>= cutoff)

    Returns:
        FreqErrorReport
    """
    real, gen = _check_pair(real, gen)
    real_p, centers, counts = sample_profiles(real, n_bins)
    gen_p, _, _ = sample_profiles(gen, n_bins)
    low, high = _split(centers, counts, cutoff)
    low_err, high_err = _errors(real_p.mean(axis=0), gen_p.mean(axis=0), low, high)
    return FreqErrorReport(float(cutoff), low_err, high_err, real.shape[0], gen.shape[0])


def bootstrap_freq_error(real, gen, cutoff, n_boot, rng, n_bins=None):
    """Bootstrap standard deviations (sigma_low, sigma_high) of freq_error.

    Both batches are re-sampled with replacement ``n_boot`` times.
    """
    real, gen = _check_pair(real, gen)
    if n_boot < 2:
        raise IllegalArgumentError('n_boot must be >= 2, got %r' % (n_boot,))
    real_p, centers, counts = sample_profiles(real, n_bins)
    gen_p, _, _ = sample_profiles(gen, n_bins)
    low, high = _split(centers, counts, cutoff)
    lows = np.empty(n_boot)
    highs = np.empty(n_boot)
    for i in range(n_boot):
        ri = rng.integers(0, real_p.shape[0], size=real_p.shape[0])
        gi = rng.integers(0, gen_p.shape[0], size=gen_p.shape[0])
        lows[i], highs[i] = _errors(real_p[ri].mean(axis=0), gen_p[gi].mean(axis=0), low, high)
    return float(lows.std(ddof=1)), float(highs.std(ddof=1))


def report_row(report):
    return ('%g' % report.cutoff, '%.17g' % report.low_error, '%.17g' % report.high_error,
            '%d' % report.n_real, '%d' % report.n_gen)
