from __future__ import absolute_import

import binascii
import json
import os

import numpy as np


def crc32(data):
    """Unsigned CRC-32 of ``data`` (bytes)."""
    return binascii.crc32(data) & 0xffffffff


def is_power_of_two(n):
    return n > 0 and (n & (n - 1)) == 0


def make_rng(seed):
    """Return the generator every run derives its randomness from.

    PCG64 is pinned so the stream does not depend on numpy's default.
    """
    return np.random.Generator(np.random.PCG64(seed))


def rng_state_to_json(rng):
    return json.dumps(rng.bit_generator.state, sort_keys=True)


def rng_from_json(state_json):
    state = json.loads(state_json)
    bit_generator = getattr(np.random, state['bit_generator'])()
    bit_generator.state = state
    return np.random.Generator(bit_generator)


def ensure_dir(path):
    if path and not os.path.isdir(path):
        os.makedirs(path)
    return path
