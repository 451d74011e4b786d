import binascii
import os

import numpy as np

from sdlab.util import (
    crc32, ensure_dir, is_power_of_two, make_rng, rng_from_json, rng_state_to_json)


def test_crc32_is_unsigned():
    data = b'\xff' * 64
    assert crc32(data) == binascii.crc32(data) & 0xffffffff
    assert crc32(data) >= 0
    assert crc32(b'123456789') == 0xcbf43926


def test_is_power_of_two():
    assert [n for n in range(20) if is_power_of_two(n)] == [1, 2, 4, 8, 16]


def test_make_rng_streams_are_independent():
    a = make_rng([7, 0]).standard_normal(4)
    b = make_rng([7, 1]).standard_normal(4)
    assert not np.array_equal(a, b)
    np.testing.assert_array_equal(a, make_rng([7, 0]).standard_normal(4))
    assert type(make_rng(0).bit_generator).__name__ == 'PCG64'


def test_rng_state_json_resumes_stream():
    rng = make_rng(11)
    rng.standard_normal(5)
    restored = rng_from_json(rng_state_to_json(rng))
    np.testing.assert_array_equal(rng.standard_normal(3), restored.standard_normal(3))


def test_ensure_dir(tmpdir):
    path = str(tmpdir.join('a', 'b'))
    assert ensure_dir(path) == path
    assert os.path.isdir(path)
    ensure_dir(path)
    assert ensure_dir('') == ''
