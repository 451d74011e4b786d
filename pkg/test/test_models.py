from __future__ import absolute_import

import numpy as np
import pytest

from sdlab.errors import ConfigurationError, IllegalArgumentError, ShapeMismatchError
from sdlab.models import (
    ARCHITECTURES, MlpDenoiser, WaveletGate, WgUnet, build_model, mlp_forward,
    sinusoidal_embedding, unet_forward, wavelet_gate, wg_down, wg_up)
from sdlab.spectral import dwt_haar_2d
from sdlab.structs import GatingVector
from sdlab.tensor import Tensor, concat, ops
from sdlab.tensor.gradcheck import check_grad
from sdlab.util import make_rng
from test.testutil import leaf, tiny_unet_config

ONES = GatingVector(1.0, 1.0, 1.0, 1.0)
LL_ONLY = GatingVector(1.0, 0.0, 0.0, 0.0)


def _zero_params(module):
    for p in module.parameters():
        p.data = np.zeros_like(p.data)


def _unet(rng, **overrides):
    config = tiny_unet_config(**overrides)
    config.pop('arch')
    return WgUnet(rng=rng, **config)


def test_zero_gate_network_gives_half(rng):
    gate = WaveletGate(3, 3, rng)
    _zero_params(gate)
    gates = wavelet_gate(Tensor(rng.standard_normal((3, 4, 4))), gate)
    for g in gates:
        assert g.shape == (3,)
        np.testing.assert_array_equal(g.data, 0.5)


def test_gate_bias_saturates_one_band(rng):
    gate = WaveletGate(2, 2, rng)
    _zero_params(gate)
    gate.fc2.bias.data[:2] = 10.0
    ll, lh, hl, hh = gate(Tensor(rng.standard_normal((2, 4, 4))))
    assert np.all(ll.data > 0.9999)
    np.testing.assert_array_equal(lh.data, 0.5)


def test_gate_gradient(rng):
    gate = WaveletGate(2, 2, rng)
    x = leaf(rng, 1, 2, 4, 4)

    def fn():
        g = gate(x)
        return ops.add(ops.mse(g.ll, Tensor(np.zeros((1, 2)))), ops.sum_all(ops.mul(g.hh, g.lh)))

    assert check_grad(fn, gate.parameters() + [x]) < 1e-4


def test_gate_channel_mismatch(rng):
    with pytest.raises(ShapeMismatchError):
        WaveletGate(3, 3, rng)(Tensor(np.zeros((1, 2, 4, 4))))


def test_wg_down_ll_only_is_scaled_block_average():
    x = np.arange(16, dtype=float).reshape(1, 4, 4)
    out, _ = wg_down(Tensor(x), gates=LL_ONLY)
    assert out.shape == (1, 2, 2)
    blocks = x.reshape(1, 2, 2, 2, 2).mean(axis=(2, 4))
    np.testing.assert_allclose(out.data, 2.0 * blocks)


def test_wg_down_of_constant_ignores_detail_gates():
    out, _ = wg_down(Tensor(np.full((2, 4, 4), 1.5)),
                     gates=GatingVector(0.3, 0.9, 0.1, 0.7))
    np.testing.assert_allclose(out.data, 0.3 * 2 * 1.5)


def test_wg_down_odd_dims(rng):
    with pytest.raises(ShapeMismatchError):
        wg_down(Tensor(np.zeros((1, 5, 4))), gates=ONES)


def test_wg_up_inverts_band_split(rng):
    y = rng.standard_normal((2, 3, 8, 8))
    packed = concat(list(dwt_haar_2d(y)), axis=1)
    out, _ = wg_up(packed, gates=ONES)
    assert out.shape == y.shape
    np.testing.assert_allclose(out.data, y, atol=1e-10)


def test_wg_up_zero_and_constant():
    out, _ = wg_up(Tensor(np.zeros((8, 2, 2))), gates=GatingVector(0.2, 0.4, 0.6, 0.8))
    np.testing.assert_array_equal(out.data, 0.0)
    x = np.zeros((4, 2, 2))
    x[0] = 2 * 0.75
    x[1:] = 5.0
    out, _ = wg_up(Tensor(x), gates=LL_ONLY)
    np.testing.assert_allclose(out.data, np.full((1, 4, 4), 0.75))


def test_wg_up_channels_divisible_by_four():
    with pytest.raises(ShapeMismatchError):
        wg_up(Tensor(np.zeros((6, 2, 2))), gates=ONES)


def test_per_channel_gates_scale_channels(rng):
    x = Tensor(np.ones((2, 4, 4)))
    gates = GatingVector(np.array([1.0, 0.5]), np.zeros(2), np.zeros(2), np.zeros(2))
    out, _ = wg_down(x, gates=gates)
    np.testing.assert_allclose(out.data[0], 2.0)
    np.testing.assert_allclose(out.data[1], 1.0)


def test_mlp_zero_weights_give_zero(rng, mlp):
    _zero_params(mlp)
    out = mlp_forward(mlp, Tensor(rng.standard_normal((3, 8))), np.array([1, 2, 3]))
    assert out.shape == (3, 8)
    np.testing.assert_array_equal(out.data, 0.0)


def test_mlp_single_signal_shape(rng, mlp):
    out = mlp(Tensor(rng.standard_normal(8)), 5)
    assert out.shape == (8,)


def test_mlp_gradient(rng):
    model = MlpDenoiser(rng=rng, length=8, hidden=4, time_dim=4)
    x = leaf(rng, 2, 8)
    target = Tensor(rng.standard_normal((2, 8)))
    t = np.array([3, 70])
    assert check_grad(lambda: ops.mse(model(x, t), target), model.parameters() + [x]) < 1e-4


def test_mlp_dim_mismatch(mlp):
    with pytest.raises(ShapeMismatchError):
        mlp(Tensor(np.zeros((2, 7))), 1)


def test_unet_shape_and_zero_output(rng, unet):
    x = Tensor(rng.standard_normal((1, 16, 16)))
    out = unet_forward(unet, x, 10)
    assert out.shape == (1, 16, 16)
    np.testing.assert_array_equal(out.data, 0.0)
    batch = unet(Tensor(rng.standard_normal((3, 1, 8, 8))), np.array([1, 2, 3]))
    assert batch.shape == (3, 1, 8, 8)


def test_unet_indivisible_dims(unet):
    with pytest.raises(ShapeMismatchError):
        unet(Tensor(np.zeros((1, 1, 6, 6))), 1)
    with pytest.raises(ShapeMismatchError):
        unet(Tensor(np.zeros((1, 2, 8, 8))), 1)


def test_unet_features(rng, unet):
    eps, features = unet.forward_features(Tensor(rng.standard_normal((2, 1, 8, 8))), 4)
    assert list(features) == ['down0', 'down1', 'up1', 'up0', 'out']
    assert features['out'] is eps
    channels = unet.feature_channels()
    assert set(channels) == set(features)
    for name, f in features.items():
        assert f.shape[1] == channels[name]
    assert features['down0'].shape[-1] == 4
    assert features['down1'].shape[-1] == 2
    assert features['up0'].shape[-1] == 8


def test_unet_gates_in_open_interval(rng, unet):
    unet(Tensor(rng.standard_normal((2, 1, 8, 8))), np.array([5, 50]))
    names = [name for name, _ in unet.resamplers()]
    assert names == ['down0', 'down1', 'up1', 'up0']
    for _, module in unet.resamplers():
        for g in module.last_gates:
            assert g.shape == (2, 4)
            assert np.all((g > 0) & (g < 1))


def test_unet_forced_gates(rng, unet):
    unet.forward_features(Tensor(rng.standard_normal((1, 1, 8, 8))), 3,
                          gates={'down0': LL_ONLY})
    assert tuple(float(g) for g in unet.down[0].last_gates) == (1.0, 0.0, 0.0, 0.0)


def test_unet_gradient(rng):
    model = _unet(rng, n_classes=2)
    model.out.weight.data = 0.1 * rng.standard_normal(model.out.weight.shape)
    x = leaf(rng, 2, 1, 4, 4)
    target = Tensor(rng.standard_normal((2, 1, 4, 4)))
    t = np.array([7, 90])
    cond = np.array([0, 2])
    params = [model.stem.weight, model.down[0].gate.fc2.bias, model.up[0].proj.bias,
              model.class_emb.weight, model.out.weight, x]
    assert check_grad(lambda: ops.mse(model(x, t, cond), target), params) < 1e-4


def test_unet_conditioning(rng):
    model = _unet(rng, n_classes=3)
    assert model.uncond_token == 3
    assert model.class_emb.weight.shape[0] == 4
    model.out.weight.data = rng.standard_normal(model.out.weight.shape)
    x = Tensor(rng.standard_normal((2, 1, 8, 8)))
    a = model(x, 10, np.array([0, 0]))
    b = model(x, 10, np.array([1, 1]))
    assert not np.allclose(a.data, b.data)
    # a missing condition is the null token
    np.testing.assert_array_equal(model(x, 10).data, model(x, 10, np.array([3, 3])).data)


def test_plain_resampler_differs_only_in_resamplers():
    wg = _unet(make_rng(0), resampler='wg')
    plain = _unet(make_rng(0), resampler='plain')

    def backbone(model):
        return model.num_parameters() - sum(m.num_parameters() for _, m in model.resamplers())

    assert backbone(wg) == backbone(plain)
    assert wg.num_parameters() > plain.num_parameters()
    assert plain(Tensor(np.zeros((1, 1, 8, 8))), 1).shape == (1, 1, 8, 8)


def test_unet_configuration_errors(rng):
    with pytest.raises(ConfigurationError):
        _unet(rng, resampler='pixelshuffle')
    with pytest.raises(ConfigurationError):
        _unet(rng, widths=[])
    with pytest.raises(ConfigurationError):
        _unet(rng, depth=3)


def test_state_dict_roundtrip(rng, unet):
    other = _unet(make_rng(77))
    other.copy_from(unet)
    for (name, a), (other_name, b) in zip(unet.named_parameters(), other.named_parameters()):
        assert name == other_name
        np.testing.assert_array_equal(a.data, b.data)
    state = unet.state_dict()
    state[list(state)[0]] += 1.0
    assert not np.array_equal(unet.parameters()[0].data, state[list(state)[0]])


def test_load_state_dict_is_strict(unet):
    state = unet.state_dict()
    name = list(state)[0]
    missing = dict(state)
    del missing[name]
    with pytest.raises(IllegalArgumentError):
        unet.load_state_dict(missing)
    wrong = dict(state)
    wrong[name] = np.zeros((1,))
    with pytest.raises(ShapeMismatchError):
        unet.load_state_dict(wrong)


def test_parameter_names_are_stable(rng):
    names = [n for n, _ in _unet(make_rng(1)).named_parameters()]
    assert names == [n for n, _ in _unet(make_rng(2)).named_parameters()]
    assert 'stem.weight' in names
    assert 'down.0.gate.fc1.weight' in names
    assert 'enc.1.conv2.bias' in names


@pytest.mark.parametrize('name', sorted(ARCHITECTURES))
def test_build_model_from_descriptor(rng, mlp, unet, name):
    model = {'mlp': mlp, 'wg_unet': unet}[name]
    rebuilt = build_model(model.descriptor())
    assert type(rebuilt) is type(model)
    assert rebuilt.descriptor() == model.descriptor()
    assert [p.shape for p in rebuilt.parameters()] == [p.shape for p in model.parameters()]


def test_build_model_unknown_arch():
    with pytest.raises(ConfigurationError):
        build_model({'arch': 'transformer'})
    with pytest.raises(ConfigurationError):
        build_model({'arch': 'mlp', 'width': 3})


def test_sinusoidal_embedding():
    emb = sinusoidal_embedding(np.array([0, 5]), 6)
    assert emb.shape == (2, 6)
    np.testing.assert_array_equal(emb[0], [0, 0, 0, 1, 1, 1])
    assert emb[1, 0] == pytest.approx(np.sin(5.0))
    with pytest.raises(IllegalArgumentError):
        sinusoidal_embedding([1], 5)
