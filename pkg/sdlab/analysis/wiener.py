"""Optimal linear denoising filters.

For a wide-sense stationary signal with power P(f) = E|X0(f)|^2 / (H W)
observed as x_t = sqrt(a) x0 + sqrt(1 - a) eps with white unit-variance
eps, the least-squares filter that maps x_t to the score-scaled noise
eps / sqrt(1 - a) is

    H*(f) = 1 / (a P(f) + 1 - a)

applied independently to every frequency.
"""
from __future__ import absolute_import, division

import logging

import numpy as np

from sdlab.errors import (
    DegenerateSignalError, IllegalArgumentError, InsufficientSamplesError)
from sdlab.spectral.fourier import dft2_array
from sdlab.spectral.profile import radial_bin_edges, radial_frequencies
from sdlab.structs import (
    EmpiricalPowerSpectrum, EmpiricalResponse, PowerLawSpectrum, WienerResponse)

log = logging.getLogger(__name__)

RECONSTRUCTION_VARIANTS = ('caption', 'text')
FIT_TARGETS = ('score', 'noise')

# DFT batches are transformed in slices of this many signals
_CHUNK = 1000


def _check_alpha_bar(alpha_bar):
    if not 0.0 <= alpha_bar <= 1.0:
        raise IllegalArgumentError('alpha_bar must lie in [0, 1], got %r' % (alpha_bar,))


def wiener_response(ps, alpha_bar, freqs=None):
    """H*(f) = 1 / (alpha_bar |X0(f)|^2 + 1 - alpha_bar)

    Arguments:
        ps (PowerLawSpectrum or EmpiricalPowerSpectrum): signal power
        alpha_bar (float): in [0, 1]

    Keyword Arguments:
        freqs (array): radial frequencies to evaluate a power law at;
            ignored for empirical spectra, which carry their own bins

    Raises:
        IllegalArgumentError: alpha_bar outside [0, 1], missing freqs, or
            f <= 0 requested from a power law
    """
    _check_alpha_bar(alpha_bar)
    if isinstance(ps, EmpiricalPowerSpectrum):
        freqs = np.asarray(ps.freqs, dtype=np.float64)
        power = np.asarray(ps.power, dtype=np.float64)
    elif isinstance(ps, PowerLawSpectrum):
        if freqs is None:
            raise IllegalArgumentError('a power-law spectrum needs explicit freqs')
        freqs = np.asarray(freqs, dtype=np.float64)
        power = ps.power(freqs)
    else:
        raise IllegalArgumentError('unsupported spectrum %r' % (type(ps).__name__,))
    response = 1.0 / (alpha_bar * power + 1.0 - alpha_bar)
    return WienerResponse(freqs, response, float(alpha_bar))


def reconstruction_response(wr, variant='caption'):
    """Signal reconstruction curve of a Wiener response.

    ``caption``: 1 - (1 - a) H*(f)^2
    ``text``:    1 - sqrt(1 - a) H*(f)
    """
    a = wr.alpha_bar
    h = np.asarray(wr.response, dtype=np.float64)
    if variant == 'caption':
        return 1.0 - (1.0 - a) * h ** 2
    if variant == 'text':
        return 1.0 - np.sqrt(1.0 - a) * h
    raise IllegalArgumentError('unknown reconstruction variant %r, expected one of %s'
                               % (variant, RECONSTRUCTION_VARIANTS))


def _batches(signals):
    signals = np.asarray(signals, dtype=np.float64)
    if signals.ndim == 2:
        signals = signals[None]
    if signals.ndim != 3:
        raise IllegalArgumentError('signals must be [N, H, W], got shape %s' % (signals.shape,))
    return signals


def _bin_index(height, width, edges):
    radius = radial_frequencies(height, width)
    idx = np.digitize(radius, edges[1:-1], right=False)
    idx[radius == 0] = -1
    idx[radius > edges[-1]] = -1
    return idx


def _bin_sums(values, idx, n_bins):
    mask = idx >= 0
    return np.bincount(idx[mask], weights=values[mask], minlength=n_bins)


def empirical_power_spectrum(signals, n_bins, r_max=None):
    """Radially binned E|X(f)|^2 / (H W) over a batch [N, H, W]."""
    signals = _batches(signals)
    n, h, w = signals.shape
    edges = radial_bin_edges(h, w, n_bins, r_max=r_max)
    idx = _bin_index(h, w, edges)
    power = np.zeros((h, w))
    for start in range(0, n, _CHUNK):
        spec = dft2_array(signals[start:start + _CHUNK])
        power += np.sum(np.abs(spec) ** 2, axis=0)
    power /= n * h * w
    counts = np.bincount(idx[idx >= 0], minlength=n_bins)
    sums = _bin_sums(power, idx, n_bins)
    mean = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    centers = 0.5 * (edges[1:] + edges[:-1])
    return EmpiricalPowerSpectrum(centers, mean, counts)


def fit_optimal_linear_filter(signals, alpha_bar, rng, n_bins=8, target='score',
                              min_samples=1000, r_max=None):
    """Brute-force least-squares filter from sampled (x_t, eps) pairs.

    Each signal is noised with a fresh eps; per radial bin one real gain h
    minimizes sum |h X_t(f) - E(f)|^2 over all coefficients in the bin and
    all samples, giving h = sum Re(conj(X_t) E) / sum |X_t|^2.

    Keyword Arguments:
        n_bins (int): radial bins. Default: 8
        target (str): 'score' regresses eps / sqrt(1 - a), whose optimum is
            H*; 'noise' regresses eps itself, optimum sqrt(1 - a) H*.
            Default: 'score'
        min_samples (int): smallest accepted batch. Default: 1000

    Returns:
        EmpiricalResponse

    Raises:
        InsufficientSamplesError: fewer than ``min_samples`` signals
        DegenerateSignalError: a bin where the clean signals carry no power
    """
    _check_alpha_bar(alpha_bar)
    if target not in FIT_TARGETS:
        raise IllegalArgumentError('target must be one of %s, got %r' % (FIT_TARGETS, target))
    if target == 'score' and alpha_bar >= 1.0:
        raise IllegalArgumentError('score target is undefined at alpha_bar = 1')
    signals = _batches(signals)
    n, h, w = signals.shape
    if n < min_samples:
        raise InsufficientSamplesError('need at least %d signals, got %d' % (min_samples, n))
    edges = radial_bin_edges(h, w, n_bins, r_max=r_max)
    idx = _bin_index(h, w, edges)
    counts = np.bincount(idx[idx >= 0], minlength=n_bins)

    num = np.zeros((h, w))
    den = np.zeros((h, w))
    clean = np.zeros((h, w))
    scale = 1.0 / np.sqrt(1.0 - alpha_bar) if target == 'score' else 1.0
    for start in range(0, n, _CHUNK):
        x0 = signals[start:start + _CHUNK]
        eps = rng.standard_normal(x0.shape)
        x_t = np.sqrt(alpha_bar) * x0 + np.sqrt(1.0 - alpha_bar) * eps
        spec_x = dft2_array(x_t)
        spec_e = dft2_array(eps) * scale
        num += np.sum(np.real(np.conj(spec_x) * spec_e), axis=0)
        den += np.sum(np.abs(spec_x) ** 2, axis=0)
        clean += np.sum(np.abs(dft2_array(x0)) ** 2, axis=0)

    clean_bins = _bin_sums(clean, idx, n_bins)
    dead = (counts > 0) & (clean_bins <= 1e-12 * max(1.0, clean.sum()))
    if np.any(dead):
        raise DegenerateSignalError('no signal power in radial bins %s'
                                    % (np.flatnonzero(dead).tolist(),))
    num_bins = _bin_sums(num, idx, n_bins)
    den_bins = _bin_sums(den, idx, n_bins)
    response = np.where(counts > 0, num_bins / np.where(den_bins > 0, den_bins, 1.0), 0.0)
    centers = 0.5 * (edges[1:] + edges[:-1])
    log.debug('least-squares filter at alpha_bar=%g from %d signals', alpha_bar, n)
    return EmpiricalResponse(centers, response, counts, float(alpha_bar))
