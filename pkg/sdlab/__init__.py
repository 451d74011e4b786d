from __future__ import absolute_import

__title__ = 'sdlab'
from sdlab.version import __version__
__license__ = 'Apache License 2.0'

# Set default logging handler to avoid "No handler found" warnings.
import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())


from sdlab.tensor import Tensor, no_grad
from sdlab.spectral import (
    dft2, idft2, dwt_haar_2d, idwt_haar_2d, dwt_haar_1d, idwt_haar_1d,
    radial_profile, sample_power_law_field)
from sdlab.diffusion import (
    make_linear_schedule, forward_diffuse, ddpm_loss, ancestral_step,
    ddim_step, cfg_predict, sample)
from sdlab.models import MlpDenoiser, WgUnet, build_model
from sdlab.structs import PowerLawSpectrum, GuidanceConfig, WaveletBands
from sdlab.checkpoint import Checkpoint


__all__ = [
    'Tensor', 'no_grad',
    'dft2', 'idft2', 'dwt_haar_2d', 'idwt_haar_2d', 'dwt_haar_1d',
    'idwt_haar_1d', 'radial_profile', 'sample_power_law_field',
    'make_linear_schedule', 'forward_diffuse', 'ddpm_loss', 'ancestral_step',
    'ddim_step', 'cfg_predict', 'sample',
    'MlpDenoiser', 'WgUnet', 'build_model',
    'PowerLawSpectrum', 'GuidanceConfig', 'WaveletBands', 'Checkpoint',
]
