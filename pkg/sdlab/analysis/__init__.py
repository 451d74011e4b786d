from __future__ import absolute_import

from sdlab.analysis.wiener import (
    wiener_response, reconstruction_response, empirical_power_spectrum,
    fit_optimal_linear_filter)
from sdlab.analysis.freq_error import (
    freq_error, bootstrap_freq_error, scaled_cutoff, sample_profiles)
from sdlab.analysis.evolution import (
    EvolutionReport, GateRecorder, GateTracingModel, band_convergence,
    convergence_index, dft_difference_map, frequency_evolution_report,
    gating_dynamics)


__all__ = [
    'wiener_response', 'reconstruction_response', 'empirical_power_spectrum',
    'fit_optimal_linear_filter', 'freq_error', 'bootstrap_freq_error',
    'scaled_cutoff', 'sample_profiles', 'EvolutionReport', 'GateRecorder',
    'GateTracingModel', 'band_convergence', 'convergence_index',
    'dft_difference_map', 'frequency_evolution_report', 'gating_dynamics',
]
