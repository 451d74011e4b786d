from __future__ import absolute_import

import json

import pytest

from sdlab.errors import ConfigurationError, UnknownTaskError
from sdlab.lab.config import ExperimentConfig
from test.testutil import tiny_experiment


def test_defaults_per_task():
    toy = ExperimentConfig(task='toy1d')
    assert toy.model['arch'] == 'mlp'
    assert toy.schedule.T == 1000
    assert toy.optimizer.lr == 1.28e-4
    assert toy.distill is None
    assert ExperimentConfig(task='class2d').model['n_classes'] == 2
    assert ExperimentConfig().model['n_classes'] == 0


def test_json_roundtrip_and_hash(tmpdir):
    config = tiny_experiment(tmpdir, distill={'lambda_f': 0.2})
    path = str(tmpdir.join('config.json'))
    config.save(path)
    loaded = ExperimentConfig.load(path)
    assert loaded == config
    assert loaded.config_hash() == config.config_hash()
    assert loaded.distill.lambda_f == 0.2
    assert json.loads(open(path).read())['sampler']['kind'] == 'ddim'


def test_hash_tracks_every_field(tmpdir):
    config = tiny_experiment(tmpdir)
    assert config.replace(seed=8).config_hash() != config.config_hash()
    other = tiny_experiment(tmpdir, optimizer={'lr': 2e-3})
    assert other.config_hash() != config.config_hash()
    assert len(config.config_hash()) == 64


def test_replace_keeps_sections(tmpdir):
    config = tiny_experiment(tmpdir)
    moved = config.replace(output_dir='elsewhere')
    assert moved.output_dir == 'elsewhere'
    assert moved.data.to_dict() == config.data.to_dict()


def test_unknown_task():
    with pytest.raises(UnknownTaskError):
        ExperimentConfig(task='audio')


@pytest.mark.parametrize('configs', [
    {'epochs': 3},
    {'data': {'n_sample': 10}},
    {'data': {'toy_alphas': [3], 'toy_probs': [0.5, 0.5]}},
    {'data': {'toy_probs': [0.3, 0.3]}},
    {'data': {'size': 1}},
    {'model': {'arch': 'resnet'}},
    {'model': {'arch': 'mlp', 'depth': 3}},
    {'schedule': {'warmup': 1}},
    {'optimizer': {'batch_size': 0}},
    {'optimizer': {'p_uncond': 1.0}},
    {'sampler': {'kind': 'dpm'}},
    {'sampler': {'guidance_w': -1.0}},
    {'distill': {'alpha_w': 1.0}},
    {'analysis': {'alpha_bars': []}},
    {'analysis': {'plots': True}},
    {'log_every': 0},
])
def test_configuration_errors(configs):
    with pytest.raises(ConfigurationError):
        ExperimentConfig(**configs)


def test_invalid_json():
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_json('{"task": ')
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_json('[1, 2]')


def test_adamw_configs(tmpdir):
    config = tiny_experiment(tmpdir, optimizer={'steps': 0, 'betas': [0.8, 0.9]})
    adamw = config.optimizer.adamw_configs()
    assert adamw['total_steps'] == 1
    assert adamw['betas'] == (0.8, 0.9)
