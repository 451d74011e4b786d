from __future__ import absolute_import

from sdlab.diffusion.schedule import NoiseSchedule, make_linear_schedule
from sdlab.diffusion.loss import (
    forward_diffuse, draw_training_inputs, noise_prediction_loss, ddpm_loss)
from sdlab.diffusion.samplers import (
    SamplerConfig, predict_x0, eps_to_score, score_to_eps, ancestral_step,
    ddim_step, ddim_timesteps, cfg_predict, sample)


__all__ = [
    'NoiseSchedule', 'make_linear_schedule',
    'forward_diffuse', 'draw_training_inputs', 'noise_prediction_loss',
    'ddpm_loss',
    'SamplerConfig', 'predict_x0', 'eps_to_score', 'score_to_eps',
    'ancestral_step', 'ddim_step', 'ddim_timesteps', 'cfg_predict', 'sample',
]
