from __future__ import absolute_import

import os

import numpy as np
import pytest

from sdlab.checkpoint import MAGIC, Checkpoint
from sdlab.distill import AdapterSet
from sdlab.errors import BufferUnderflowError, CheckpointError, ChecksumError
from sdlab.protocol import Int64
from sdlab.tensor import AdamW, Tensor, ops
from sdlab.util import crc32, make_rng


def _train(model, optimizer, rng, steps):
    for _ in range(steps):
        x = Tensor(rng.standard_normal((2, 8)))
        optimizer.zero_grad()
        ops.mse(model(x, rng.integers(1, 100, size=2)), x).backward()
        optimizer.step()


@pytest.fixture
def trained(mlp):
    optimizer = AdamW(mlp.parameters(), lr=1e-2)
    rng = make_rng(5)
    _train(mlp, optimizer, rng, 3)
    return mlp, optimizer, rng


def test_save_load_is_bit_exact(tmpdir, trained):
    model, optimizer, rng = trained
    path = str(tmpdir.join('ckpt', 'model.sdlab'))
    Checkpoint.capture(model, step=3, config_hash='abc', optimizer=optimizer, rng=rng,
                       extra={'task': 'toy1d'}).save(path)
    assert not os.path.exists(path + '.tmp')

    loaded = Checkpoint.load(path)
    assert loaded.step == 3
    assert loaded.config_hash == 'abc'
    assert loaded.extra == {'task': 'toy1d'}
    assert loaded.descriptor == model.descriptor()
    assert list(loaded.params) == [n for n, _ in model.named_parameters()]
    for name, value in model.state_dict().items():
        np.testing.assert_array_equal(loaded.params[name], value)

    saved = optimizer.state_dict()
    assert loaded.optimizer_state['step'] == saved['step'] == 3
    for a, b in zip(loaded.optimizer_state['m'] + loaded.optimizer_state['v'],
                    saved['m'] + saved['v']):
        np.testing.assert_array_equal(a, b)


def test_resume_continues_identically(tmpdir, trained):
    model, optimizer, rng = trained
    path = str(tmpdir.join('model.sdlab'))
    Checkpoint.capture(model, step=3, optimizer=optimizer, rng=rng).save(path)
    _train(model, optimizer, rng, 2)

    ckpt = Checkpoint.load(path)
    resumed = ckpt.build_model()
    resumed_opt = AdamW(resumed.parameters(), lr=1e-2)
    resumed_rng = ckpt.restore(resumed, optimizer=resumed_opt)
    _train(resumed, resumed_opt, resumed_rng, 2)

    for a, b in zip(model.parameters(), resumed.parameters()):
        np.testing.assert_array_equal(a.data, b.data)


def test_without_optimizer_or_rng(tmpdir, unet):
    path = str(tmpdir.join('unet.sdlab'))
    Checkpoint.capture(unet).save(path)
    ckpt = Checkpoint.load(path)
    assert ckpt.optimizer_state is None
    assert ckpt.adapter_params is None
    assert ckpt.restore(ckpt.build_model()) is None


def test_adapter_params(tmpdir, rng):
    adapters = AdapterSet([('f', 'f')], {'f': 3}, {'f': 2}, rng)
    teacher_like = AdapterSet([('f', 'f')], {'f': 3}, {'f': 2}, make_rng(99))
    ckpt = Checkpoint({'arch': 'mlp', 'length': 8, 'hidden': 6, 'time_dim': 4},
                      {}, adapter_params=adapters.state_dict())
    path = str(tmpdir.join('a.sdlab'))
    ckpt.save(path)
    loaded = Checkpoint.load(path)
    assert list(loaded.adapter_params) == ['adapters.0.weight', 'adapters.0.bias']
    teacher_like.load_state_dict(loaded.adapter_params)
    for a, b in zip(adapters.parameters(), teacher_like.parameters()):
        np.testing.assert_array_equal(a.data, b.data)


def test_restore_adapters_missing(mlp, rng):
    adapters = AdapterSet([('f', 'f')], {'f': 1}, {'f': 1}, rng)
    with pytest.raises(CheckpointError):
        Checkpoint.capture(mlp).restore(mlp, adapters=adapters)


def test_reserved_names(mlp):
    with pytest.raises(CheckpointError):
        Checkpoint(mlp.descriptor(), {'optim.m.0': np.zeros(2)}).encode()


def test_corruption_is_detected(trained):
    data = bytearray(Checkpoint.capture(trained[0]).encode())
    assert bytes(data).startswith(MAGIC)
    data[len(MAGIC) + 12] ^= 0x01
    with pytest.raises(ChecksumError):
        Checkpoint.decode(bytes(data))


def test_not_a_checkpoint():
    with pytest.raises(CheckpointError):
        Checkpoint.decode(b'PK\x03\x04' + b'\x00' * 20)
    with pytest.raises(CheckpointError):
        Checkpoint.decode(MAGIC)


def test_truncated_body_with_valid_trailer(mlp):
    body = Checkpoint.capture(mlp).encode()[:-8]
    cut = body[:len(body) - 5]
    with pytest.raises(BufferUnderflowError):
        Checkpoint.decode(cut + Int64.encode(crc32(cut)))
