from __future__ import absolute_import

from collections import namedtuple

import numpy as np

from sdlab.errors import IllegalArgumentError


# Spectral structs

# Single-level Haar coefficients. In 2D every band is [.., C, H/2, W/2];
# the 1D transform returns a plain (approx, detail) pair instead.
WaveletBands = namedtuple("WaveletBands",
    ["ll", "lh", "hl", "hh"])


class PowerLawSpectrum(namedtuple("PowerLawSpectrum", ["amplitude", "exponent"])):
    """Expected power E|X(f)|^2 = amplitude / f**exponent."""
    __slots__ = ()

    def __new__(cls, amplitude=1.0, exponent=2.0):
        if not amplitude > 0:
            raise IllegalArgumentError('amplitude must be positive, got %r' % (amplitude,))
        if not exponent >= 0:
            raise IllegalArgumentError('exponent must be non-negative, got %r' % (exponent,))
        return super(PowerLawSpectrum, cls).__new__(cls, float(amplitude), float(exponent))

    def power(self, freqs):
        freqs = np.asarray(freqs, dtype=np.float64)
        if np.any(freqs <= 0):
            raise IllegalArgumentError('power law is only defined for f > 0')
        return self.amplitude / freqs ** self.exponent


# Mean |X| per radial frequency bin; DC is never counted
RadialProfile = namedtuple("RadialProfile",
    ["bin_edges", "bin_centers", "mean_magnitude", "counts"])


# Radially binned E|X(f)|^2 / (H*W) of a batch of signals
EmpiricalPowerSpectrum = namedtuple("EmpiricalPowerSpectrum",
    ["freqs", "power", "counts"])


# Analysis structs

WienerResponse = namedtuple("WienerResponse",
    ["freqs", "response", "alpha_bar"])

EmpiricalResponse = namedtuple("EmpiricalResponse",
    ["freqs", "response", "counts", "alpha_bar"])

FreqErrorReport = namedtuple("FreqErrorReport",
    ["cutoff", "low_error", "high_error", "n_real", "n_gen"])


# Diffusion structs

GuidanceConfig = namedtuple("GuidanceConfig",
    ["w", "uncond_token"])

# One draw of (t, eps) per batch element together with the noised input
NoisedBatch = namedtuple("NoisedBatch",
    ["t", "eps", "x_t", "cond"])

Snapshot = namedtuple("Snapshot",
    ["index", "t", "x0_hat"])


# Model structs

GatingVector = namedtuple("GatingVector",
    ["ll", "lh", "hl", "hh"])


# Distillation structs

DistillLosses = namedtuple("DistillLosses",
    ["l_ddpm", "l_spatial", "l_freq", "total"])
