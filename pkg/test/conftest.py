from __future__ import absolute_import

import pytest

from sdlab.diffusion import make_linear_schedule
from sdlab.lab.datasets import dataset_dir, gen_data
from sdlab.models import MlpDenoiser, WgUnet
from sdlab.util import make_rng
from test.testutil import tiny_experiment, tiny_unet_config


@pytest.fixture
def rng():
    return make_rng(1234)


@pytest.fixture
def sched():
    return make_linear_schedule(100)


@pytest.fixture
def mlp(rng):
    return MlpDenoiser(rng=rng, length=8, hidden=6, time_dim=4)


@pytest.fixture
def unet(rng):
    config = tiny_unet_config()
    config.pop('arch')
    return WgUnet(rng=rng, **config)


@pytest.fixture
def experiment(tmpdir):
    """Tiny texture2d config with its dataset already generated."""
    config = tiny_experiment(tmpdir)
    gen_data(config.task, config.data, make_rng(config.seed)).save(dataset_dir(config))
    return config


@pytest.fixture
def experiment_factory(tmpdir):
    """Build tiny configs in numbered sub-directories, data included."""
    counter = [0]

    def factory(task='texture2d', with_data=True, **sections):
        counter[0] += 1
        config = tiny_experiment(tmpdir.join('run%d' % (counter[0],)), task=task, **sections)
        if with_data:
            gen_data(config.task, config.data, make_rng(config.seed)).save(dataset_dir(config))
        return config

    return factory
