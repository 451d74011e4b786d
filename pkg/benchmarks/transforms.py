#!/usr/bin/env python3
from __future__ import print_function

import perf

from sdlab.spectral import dft2_array, dwt_haar_2d, idwt_haar_2d
from sdlab.tensor import Tensor
from sdlab.util import make_rng

SIZES = [16, 32, 64]
BATCH = 64


def prepare(size):
    return make_rng(size).standard_normal((BATCH, 1, size, size))


def dft_func(loops, size, method):
    x = prepare(size)
    t0 = perf.perf_counter()
    for _ in range(loops):
        dft2_array(x, method=method)
    return perf.perf_counter() - t0


def haar_func(loops, size):
    x = Tensor(prepare(size))
    t0 = perf.perf_counter()
    for _ in range(loops):
        idwt_haar_2d(dwt_haar_2d(x))
    return perf.perf_counter() - t0


runner = perf.Runner()
for size in SIZES:
    runner.bench_time_func('dft2_direct_%d' % size, dft_func, size, 'direct')
    runner.bench_time_func('dft2_radix2_%d' % size, dft_func, size, 'fft')
    runner.bench_time_func('haar_roundtrip_%d' % size, haar_func, size)
