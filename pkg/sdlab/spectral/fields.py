from __future__ import absolute_import, division

import logging

import numpy as np

from sdlab.errors import DegenerateSignalError, IllegalArgumentError
from sdlab.spectral.fourier import dft2_array, idft2_array
from sdlab.spectral.profile import radial_frequencies
from sdlab.tensor import Tensor

log = logging.getLogger(__name__)


def power_law_magnitude(spec, height, width):
    """sqrt(A) * f^(-alpha/2) on the uncentered DFT grid, zero at DC."""
    radius = radial_frequencies(height, width)
    mag = np.zeros_like(radius)
    nz = radius > 0
    mag[nz] = np.sqrt(spec.amplitude) * radius[nz] ** (-spec.exponent / 2.0)
    return mag


def sample_power_law_batch(spec, n, height, width, rng):
    """Draw ``n`` standardized power-law fields as an [n, H, W] array.

    Phases come from the spectrum of real white noise, so the Hermitian
    symmetry needed for a real field holds exactly. Each field is shifted
    to zero mean and scaled to unit variance.

    Raises:
        DegenerateSignalError: the grid is too small to carry any non-DC
            frequency
    """
    if height < 1 or width < 1 or n < 1:
        raise IllegalArgumentError('need n, H, W >= 1, got %r' % ((n, height, width),))
    noise = rng.standard_normal((n, height, width))
    phase = dft2_array(noise)
    size = np.abs(phase)
    phase = np.where(size > 0, phase / np.where(size > 0, size, 1.0), 0.0)
    coeffs = phase * power_law_magnitude(spec, height, width)
    fields = idft2_array(coeffs).real
    fields -= fields.mean(axis=(-2, -1), keepdims=True)
    std = fields.std(axis=(-2, -1), keepdims=True)
    if np.any(std == 0):
        raise DegenerateSignalError('power-law field of size %dx%d has zero variance'
                                    % (height, width))
    return fields / std


def sample_power_law_field(spec, height, width, rng):
    """One zero-mean, unit-variance field with E|X(f)| proportional to
    sqrt(A) f^(-alpha/2).

    Arguments:
        spec (PowerLawSpectrum): amplitude and exponent
        height, width (int): grid size
        rng (numpy.random.Generator): randomness source

    Returns:
        Tensor of shape [H, W]
    """
    return Tensor(sample_power_law_batch(spec, 1, height, width, rng)[0])
