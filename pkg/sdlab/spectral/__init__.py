from __future__ import absolute_import

from sdlab.spectral.fourier import (
    SpectrumGrid, dft1, idft1, dft2, idft2, dft2_array, idft2_array,
    rfft_magnitude)
from sdlab.spectral.wavelet import (
    dwt_haar_1d, idwt_haar_1d, dwt_haar_2d, idwt_haar_2d, haar_analysis,
    haar_synthesis)
from sdlab.spectral.profile import (
    radial_frequencies, radial_profile, write_profile_csv)
from sdlab.spectral.fields import sample_power_law_batch, sample_power_law_field


__all__ = [
    'SpectrumGrid', 'dft1', 'idft1', 'dft2', 'idft2', 'dft2_array',
    'idft2_array', 'rfft_magnitude',
    'dwt_haar_1d', 'idwt_haar_1d', 'dwt_haar_2d', 'idwt_haar_2d',
    'haar_analysis', 'haar_synthesis',
    'radial_frequencies', 'radial_profile', 'write_profile_csv',
    'sample_power_law_batch', 'sample_power_law_field',
]
