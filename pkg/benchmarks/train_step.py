#!/usr/bin/env python3
from __future__ import print_function

import perf

from sdlab.diffusion import ddpm_loss, make_linear_schedule
from sdlab.models import MlpDenoiser, WgUnet
from sdlab.tensor import AdamW
from sdlab.util import make_rng

BATCH = 32


def build(arch, resampler='wg'):
    rng = make_rng(0)
    if arch == 'mlp':
        return MlpDenoiser(rng=rng, length=64, hidden=1024, time_dim=32), (BATCH, 64)
    model = WgUnet(rng=rng, in_channels=1, widths=[16, 32], time_dim=32, resampler=resampler)
    return model, (BATCH, 1, 16, 16)


def func(loops, arch, resampler):
    model, shape = build(arch, resampler)
    optimizer = AdamW(model.parameters(), lr=1e-3)
    sched = make_linear_schedule(1000)
    rng = make_rng(1)
    x0 = rng.standard_normal(shape)

    t0 = perf.perf_counter()
    for _ in range(loops):
        optimizer.zero_grad()
        ddpm_loss(model, x0, sched, rng).backward()
        optimizer.step()
    return perf.perf_counter() - t0


runner = perf.Runner()
runner.bench_time_func('train_step_mlp_1024', func, 'mlp', None)
runner.bench_time_func('train_step_unet_wg', func, 'wg_unet', 'wg')
runner.bench_time_func('train_step_unet_plain', func, 'wg_unet', 'plain')
