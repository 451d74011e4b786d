from __future__ import absolute_import

import collections
import logging

import numpy as np

from sdlab.errors import ConfigurationError, ShapeMismatchError
from sdlab.models.base import Module
from sdlab.models.embedding import sinusoidal_embedding
from sdlab.models.gating import RESAMPLERS
from sdlab.models.layers import Conv2d, Embedding, Linear
from sdlab.tensor import Tensor, add, as_tensor, reshape, silu

log = logging.getLogger(__name__)


class ResBlock(Module):
    """conv(silu(x)) + emb projection -> conv(silu(h)) + skip(x)"""
    def __init__(self, in_channels, out_channels, emb_dim, rng):
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.conv1 = Conv2d(in_channels, out_channels, 3, rng)
        self.emb_proj = Linear(emb_dim, out_channels, rng)
        self.conv2 = Conv2d(out_channels, out_channels, 3, rng)
        self.skip = None
        if in_channels != out_channels:
            self.skip = Conv2d(in_channels, out_channels, 1, rng)

    def forward(self, x, emb):
        h = self.conv1(silu(x))
        h = add(h, reshape(self.emb_proj(emb), (emb.shape[0], self.out_channels, 1, 1)))
        h = self.conv2(silu(h))
        shortcut = x if self.skip is None else self.skip(x)
        return add(h, shortcut)


class WgUnet(Module):
    """Small UNet noise predictor with pluggable resamplers.

    Every encoder level runs a residual block then halves the resolution;
    every decoder level doubles it, adds the matching encoder activation
    and runs a residual block. The time embedding (plus the class
    embedding, when ``n_classes`` > 0) is projected into every block.

    Keyword Arguments:
        in_channels (int): image channels. Default: 1
        widths (list): channels per level; one down/up pair per entry.
            Default: [16, 32, 64]
        time_dim (int): sinusoidal embedding size. Default: 32
        n_classes (int): number of classes for conditioning; row
            ``n_classes`` of the table is the null token. 0 disables
            conditioning. Default: 0
        resampler (str): 'wg' for wavelet gating, 'plain' for average
            pooling and nearest upsampling. Default: 'wg'
    """
    DEFAULT_CONFIG = {
        'in_channels': 1,
        'widths': [16, 32, 64],
        'time_dim': 32,
        'n_classes': 0,
        'resampler': 'wg',
    }

    def __init__(self, rng=None, **configs):
        self._configure(configs)
        self.config['widths'] = [int(w) for w in self.config['widths']]
        widths = self.config['widths']
        if not widths:
            raise ConfigurationError('widths must name at least one level')
        if self.config['resampler'] not in RESAMPLERS:
            raise ConfigurationError('resampler must be one of %s, got %r'
                                     % (sorted(RESAMPLERS), self.config['resampler']))
        down_cls, up_cls = RESAMPLERS[self.config['resampler']]
        emb_dim = self.config['time_dim']
        c_in = self.config['in_channels']

        self.time_fc1 = Linear(emb_dim, emb_dim, rng)
        self.time_fc2 = Linear(emb_dim, emb_dim, rng)
        self.class_emb = None
        if self.config['n_classes']:
            self.class_emb = Embedding(self.config['n_classes'] + 1, emb_dim, rng)

        self.stem = Conv2d(c_in, widths[0], 3, rng)
        self.enc = []
        self.down = []
        prev = widths[0]
        for w in widths:
            self.enc.append(ResBlock(prev, w, emb_dim, rng))
            self.down.append(down_cls(w, rng))
            prev = w
        self.mid = ResBlock(prev, prev, emb_dim, rng)
        self.up = []
        self.dec = []
        for i in reversed(range(len(widths))):
            self.up.append(up_cls(prev, widths[i], rng))
            self.dec.append(ResBlock(widths[i], widths[i], emb_dim, rng))
            prev = widths[i]
        self.out = Conv2d(prev, c_in, 3, None, zero_init=True)
        log.debug('WgUnet(widths=%s, resampler=%s): %d parameters',
                  widths, self.config['resampler'], self.num_parameters())

    @property
    def n_levels(self):
        return len(self.config['widths'])

    @property
    def uncond_token(self):
        if not self.config['n_classes']:
            return None
        return self.config['n_classes']

    def resamplers(self):
        """(name, module) for every down and up resampler, encoder first."""
        named = [('down%d' % i, m) for i, m in enumerate(self.down)]
        levels = list(reversed(range(self.n_levels)))
        named.extend(('up%d' % lvl, m) for lvl, m in zip(levels, self.up))
        return named

    def feature_channels(self):
        """Channel count of every activation returned by forward_features."""
        widths = self.config['widths']
        channels = collections.OrderedDict()
        for i, w in enumerate(widths):
            channels['down%d' % i] = w
        for i in reversed(range(len(widths))):
            channels['up%d' % i] = widths[i]
        channels['out'] = self.config['in_channels']
        return channels

    def _embed(self, t, cond, n):
        t = np.broadcast_to(np.asarray(t), (n,))
        emb = Tensor(sinusoidal_embedding(t, self.config['time_dim']))
        if self.class_emb is not None:
            if cond is None:
                cond = np.full(n, self.uncond_token, dtype=np.int64)
            emb = add(emb, self.class_emb(np.broadcast_to(np.asarray(cond), (n,))))
        return self.time_fc2(silu(self.time_fc1(emb)))

    def forward_features(self, x_t, t, cond=None, gates=None):
        """Run the network and keep the activations used for distillation.

        Keyword Arguments:
            gates (dict): optional forced gates per resampler name

        Returns:
            (eps_hat, OrderedDict name -> Tensor) with keys ``down<i>``,
            ``up<i>`` and ``out``
        """
        x = as_tensor(x_t)
        single = x.ndim == 3
        if single:
            x = reshape(x, (1,) + x.shape)
        if x.ndim != 4 or x.shape[1] != self.config['in_channels']:
            raise ShapeMismatchError('unet_forward', x.shape, (self.config['in_channels'],),
                                     'expected [N, C, H, W]')
        factor = 2 ** self.n_levels
        if x.shape[2] % factor or x.shape[3] % factor:
            raise ShapeMismatchError('unet_forward', x.shape, (factor, factor),
                                     'spatial dims must be divisible by %d' % (factor,))
        gates = gates or {}
        features = collections.OrderedDict()
        emb = self._embed(t, cond, x.shape[0])

        h = self.stem(x)
        skips = []
        for i, (block, down) in enumerate(zip(self.enc, self.down)):
            h = block(h, emb)
            skips.append(h)
            h = down(h, gates.get('down%d' % i))
            features['down%d' % i] = h
        h = self.mid(h, emb)
        for up, block, level in zip(self.up, self.dec, reversed(range(self.n_levels))):
            h = up(h, gates.get('up%d' % level))
            features['up%d' % level] = h
            h = block(add(h, skips[level]), emb)
        out = self.out(silu(h))
        if single:
            out = reshape(out, out.shape[1:])
        features['out'] = out
        return out, features

    def forward(self, x_t, t, cond=None):
        return self.forward_features(x_t, t, cond)[0]

    def descriptor(self):
        desc = {'arch': 'wg_unet'}
        desc.update(self.config)
        desc['widths'] = list(self.config['widths'])
        return desc


def unet_forward(model, x_t, t, cond=None):
    return model(x_t, t, cond)
