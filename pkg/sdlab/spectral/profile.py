from __future__ import absolute_import, division

import csv

import numpy as np
from scipy import stats

from sdlab.errors import IllegalArgumentError
from sdlab.spectral.fourier import SpectrumGrid
from sdlab.structs import RadialProfile

PROFILE_CSV_HEADER = ('bin_center_freq', 'mean_magnitude', 'count')


def radial_frequencies(height, width, centered=False):
    """Radius sqrt(u^2 + v^2) in cycles per image for every DFT coefficient.

    u and v are the signed frequencies (``fftfreq * n``), so the map is
    symmetric and zero only at DC.
    """
    fu = np.fft.fftfreq(height) * height
    fv = np.fft.fftfreq(width) * width
    radius = np.sqrt(fu[:, None] ** 2 + fv[None, :] ** 2)
    if centered:
        radius = np.fft.fftshift(radius)
    return radius


def radial_bin_edges(height, width, n_bins, r_max=None):
    if n_bins < 2:
        raise IllegalArgumentError('n_bins must be >= 2, got %r' % (n_bins,))
    if r_max is None:
        r_max = float(radial_frequencies(height, width).max())
    return np.linspace(0.0, r_max, n_bins + 1)


def binned_mean(values, radius, edges):
    """Mean and count of ``values`` per radial bin, DC excluded.

    ``values`` and ``radius`` share the trailing [H, W] shape; any leading
    axes of ``values`` are averaged first. Empty bins report mean 0.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim > 2:
        values = values.reshape((-1,) + values.shape[-2:]).mean(axis=0)
    keep = radius > 0
    r = radius[keep]
    v = values[keep]
    rng = (edges[0], edges[-1])
    means, _, _ = stats.binned_statistic(r, v, statistic='mean', bins=edges, range=rng)
    counts, _, _ = stats.binned_statistic(r, v, statistic='count', bins=edges, range=rng)
    means = np.where(counts > 0, means, 0.0)
    return means, counts.astype(np.int64)


def radial_profile(spec, n_bins, r_max=None):
    """Radially binned mean |X(u, v)| of a spectrum.

    Arguments:
        spec (SpectrumGrid): coefficients of shape [..., H, W]; leading axes
            are averaged
        n_bins (int): number of linear bins over (0, r_max]

    Keyword Arguments:
        r_max (float): outer edge of the last bin. Default: the largest
            radius present in the grid

    Returns:
        RadialProfile
    """
    if not isinstance(spec, SpectrumGrid):
        spec = SpectrumGrid(spec)
    radius = radial_frequencies(spec.height, spec.width, centered=spec.dc_centered)
    edges = radial_bin_edges(spec.height, spec.width, n_bins, r_max=r_max)
    means, counts = binned_mean(spec.magnitude(), radius, edges)
    centers = 0.5 * (edges[1:] + edges[:-1])
    return RadialProfile(edges, centers, means, counts)


def profile_rows(profile):
    for center, mean, count in zip(profile.bin_centers, profile.mean_magnitude, profile.counts):
        yield ('%.10g' % center, '%.17g' % mean, '%d' % count)


def write_profile_csv(profile, path):
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(PROFILE_CSV_HEADER)
        writer.writerows(profile_rows(profile))
    return path


def per_sample_profiles(magnitudes, radius, edges):
    """Radial bin means of every map in ``magnitudes`` [N, H, W] -> [N, n_bins].

    Empty bins read 0. Returns (means, counts).
    """
    magnitudes = np.asarray(magnitudes, dtype=np.float64)
    flat = magnitudes.reshape((-1,) + magnitudes.shape[-2:])
    keep = radius > 0
    rng = (edges[0], edges[-1])
    values = flat[:, keep]
    means, _, _ = stats.binned_statistic(radius[keep], values, statistic='mean',
                                         bins=edges, range=rng)
    counts, _, _ = stats.binned_statistic(radius[keep], values[0], statistic='count',
                                          bins=edges, range=rng)
    means = np.where(counts[None, :] > 0, means, 0.0)
    return means, counts.astype(np.int64)
