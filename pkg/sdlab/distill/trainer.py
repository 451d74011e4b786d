from __future__ import absolute_import

import logging

from sdlab.diffusion.loss import draw_training_inputs
from sdlab.distill.adapters import AdapterSet
from sdlab.distill.losses import freq_distill_loss, spatial_distill_loss
from sdlab.structs import DistillLosses
from sdlab.tensor import Tensor, add, mse, no_grad, scale

log = logging.getLogger(__name__)


def build_adapters(teacher, student, cfg, rng):
    pairs = cfg.resolve_pairs(teacher, student)
    return AdapterSet(pairs, teacher.feature_channels(), student.feature_channels(), rng,
                      identity=cfg.identity_adapters)


def distill_losses(teacher, student, adapters, batch, x0, cfg):
    """Build the combined objective for one noised batch.

    The teacher runs without a graph. A term whose weight is zero is never
    built, so with both weights at zero the graph and the total are exactly
    those of plain noise-prediction training.

    Returns:
        (total Tensor, DistillLosses of floats)
    """
    x_t = Tensor(batch.x_t)
    use_spatial = cfg.lambda_s != 0
    use_freq = cfg.lambda_f != 0
    if not (use_spatial or use_freq):
        eps_hat = student(x_t, batch.t, batch.cond)
        l_ddpm = mse(Tensor(batch.eps), eps_hat)
        value = l_ddpm.item()
        return l_ddpm, DistillLosses(value, 0.0, 0.0, value)

    with no_grad():
        _, teacher_feats = teacher.forward_features(x_t, batch.t, batch.cond)
    eps_hat, student_feats = student.forward_features(x_t, batch.t, batch.cond)
    l_ddpm = mse(Tensor(batch.eps), eps_hat)
    adapted = adapters(student_feats)
    pairs = [(teacher_feats[t_name], feat)
             for (t_name, _), feat in zip(adapters.pairs, adapted)]
    total = l_ddpm
    l_spatial = l_freq = 0.0
    if use_spatial:
        spatial = spatial_distill_loss(pairs)
        l_spatial = spatial.item()
        total = add(total, scale(spatial, cfg.lambda_s))
    if use_freq:
        freq = freq_distill_loss(pairs, x0, cfg)
        l_freq = freq.item()
        total = add(total, scale(freq, cfg.lambda_f))
    return total, DistillLosses(l_ddpm.item(), l_spatial, l_freq, total.item())


def distill_train_step(teacher, student, adapters, optimizer, x0, sched, cfg, rng,
                       cond=None, p_uncond=0.0, uncond_token=None):
    """One optimizer step of the student (and adapters) against a frozen teacher.

    The same (t, eps) draw feeds both networks.

    Arguments:
        teacher, student (WgUnet): noise predictors exposing forward_features
        adapters (AdapterSet): student -> teacher channel maps
        optimizer (AdamW): over student and adapter parameters only
        x0 (ndarray): clean batch
        sched (NoiseSchedule)
        cfg (DistillConfig)
        rng (numpy.random.Generator)

    Returns:
        DistillLosses
    """
    batch = draw_training_inputs(x0, sched, rng, cond=cond, p_uncond=p_uncond,
                                 uncond_token=uncond_token)
    optimizer.zero_grad()
    total, losses = distill_losses(teacher, student, adapters, batch, x0, cfg)
    total.backward()
    optimizer.step()
    return losses
