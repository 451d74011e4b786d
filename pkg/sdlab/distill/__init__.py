from __future__ import absolute_import

from sdlab.distill.config import DistillConfig
from sdlab.distill.adapters import AdapterSet
from sdlab.distill.losses import (
    WeightedSpectralEnergy, freq_distill_loss, freq_weight, resize_bilinear,
    spatial_distill_loss)
from sdlab.distill.trainer import build_adapters, distill_losses, distill_train_step


__all__ = [
    'DistillConfig', 'AdapterSet', 'WeightedSpectralEnergy',
    'freq_distill_loss', 'freq_weight', 'resize_bilinear',
    'spatial_distill_loss', 'build_adapters', 'distill_losses',
    'distill_train_step',
]
