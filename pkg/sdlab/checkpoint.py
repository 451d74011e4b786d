"""Bit-exact persistence of models, optimizer state and run metadata.

Layout (all little-endian)::

    b'SDLAB\\x01'
    CheckpointHeader
    Array(String)            name table
    Float64Array per name    in name-table order
    Int64                    CRC-32 of every preceding byte

Names are model parameters as-is, then ``optim.m.<i>`` / ``optim.v.<i>``,
then ``adapter.<name>``.
"""
from __future__ import absolute_import

import collections
import io
import json
import logging
import os

from sdlab.errors import CheckpointError, ChecksumError
from sdlab.models import build_model
from sdlab.protocol import Array, Float64Array, Int64, Schema, String, Struct
from sdlab.util import crc32, ensure_dir, rng_from_json, rng_state_to_json

log = logging.getLogger(__name__)

MAGIC = b'SDLAB\x01'
OPTIM_M = 'optim.m.'
OPTIM_V = 'optim.v.'
ADAPTER = 'adapter.'


class CheckpointHeader(Struct):
    SCHEMA = Schema(
        ('config_hash', String()),
        ('step', Int64),
        ('descriptor', String()),
        ('rng_state', String()),
        ('optim_step', Int64),
        ('extra', String()),
    )


NameTable = Array(String())


class Checkpoint(object):
    """Everything needed to resume a run or rebuild its model.

    Arguments:
        descriptor (dict): model architecture, see ``Module.descriptor``
        params (OrderedDict): model parameter arrays by name

    Keyword Arguments:
        step (int): training steps completed. Default: 0
        config_hash (str): hash of the experiment config. Default: ''
        optimizer_state (dict): ``AdamW.state_dict()``. Default: None
        adapter_params (OrderedDict): distillation adapter arrays. Default: None
        rng_state (str): JSON bit-generator state. Default: None
        extra (dict): JSON-serializable metadata. Default: {}
    """
    def __init__(self, descriptor, params, step=0, config_hash='',
                 optimizer_state=None, adapter_params=None, rng_state=None,
                 extra=None):
        self.descriptor = dict(descriptor)
        self.params = collections.OrderedDict(params)
        self.step = int(step)
        self.config_hash = config_hash or ''
        self.optimizer_state = optimizer_state
        self.adapter_params = (collections.OrderedDict(adapter_params)
                               if adapter_params is not None else None)
        self.rng_state = rng_state
        self.extra = dict(extra or {})

    @classmethod
    def capture(cls, model, step=0, config_hash='', optimizer=None, adapters=None,
                rng=None, extra=None):
        """Snapshot live training objects."""
        return cls(model.descriptor(), model.state_dict(), step=step,
                   config_hash=config_hash,
                   optimizer_state=optimizer.state_dict() if optimizer is not None else None,
                   adapter_params=adapters.state_dict() if adapters is not None else None,
                   rng_state=rng_state_to_json(rng) if rng is not None else None,
                   extra=extra)

    def build_model(self):
        """A fresh model from the descriptor holding the saved parameters."""
        model = build_model(self.descriptor)
        model.load_state_dict(self.params)
        return model

    def restore(self, model, optimizer=None, adapters=None):
        """Load saved state into existing objects; returns the saved rng or None."""
        model.load_state_dict(self.params)
        if optimizer is not None and self.optimizer_state is not None:
            optimizer.load_state_dict(self.optimizer_state)
        if adapters is not None:
            if self.adapter_params is None:
                raise CheckpointError('checkpoint holds no adapter parameters')
            adapters.load_state_dict(self.adapter_params)
        if self.rng_state is None:
            return None
        return rng_from_json(self.rng_state)

    def _named_arrays(self):
        arrays = collections.OrderedDict()
        for name, value in self.params.items():
            if name.startswith((OPTIM_M, OPTIM_V, ADAPTER)):
                raise CheckpointError('reserved parameter name %r' % (name,))
            arrays[name] = value
        optim_step = 0
        if self.optimizer_state is not None:
            optim_step = int(self.optimizer_state['step'])
            for i, m in enumerate(self.optimizer_state['m']):
                arrays[OPTIM_M + str(i)] = m
            for i, v in enumerate(self.optimizer_state['v']):
                arrays[OPTIM_V + str(i)] = v
        if self.adapter_params is not None:
            for name, value in self.adapter_params.items():
                arrays[ADAPTER + name] = value
        return arrays, optim_step

    def encode(self):
        arrays, optim_step = self._named_arrays()
        extra = dict(self.extra)
        extra['has_optimizer'] = self.optimizer_state is not None
        extra['has_adapters'] = self.adapter_params is not None
        header = CheckpointHeader(
            config_hash=self.config_hash,
            step=self.step,
            descriptor=json.dumps(self.descriptor, sort_keys=True),
            rng_state=self.rng_state,
            optim_step=optim_step,
            extra=json.dumps(extra, sort_keys=True))
        parts = [MAGIC, header.encode(), NameTable.encode(list(arrays))]
        parts.extend(Float64Array.encode(value) for value in arrays.values())
        body = b''.join(parts)
        return body + Int64.encode(crc32(body))

    @classmethod
    def decode(cls, data):
        """
        Raises:
            CheckpointError: bad magic or trailing bytes
            ChecksumError: the CRC trailer does not match
            BufferUnderflowError: the data is truncated
        """
        if len(data) < len(MAGIC) + 8 or not data.startswith(MAGIC):
            raise CheckpointError('not an sdlab checkpoint')
        body, trailer = data[:-8], data[-8:]
        expected = Int64.decode(io.BytesIO(trailer))
        actual = crc32(body)
        if expected != actual:
            raise ChecksumError('crc mismatch: stored %08x, computed %08x' % (expected, actual))
        buf = io.BytesIO(body)
        buf.seek(len(MAGIC))
        header = CheckpointHeader.decode(buf)
        names = NameTable.decode(buf) or []
        arrays = collections.OrderedDict((name, Float64Array.decode(buf)) for name in names)
        if buf.read(1):
            raise CheckpointError('trailing bytes after the last array')

        extra = json.loads(header.extra)
        has_optimizer = extra.pop('has_optimizer', False)
        has_adapters = extra.pop('has_adapters', False)
        params = collections.OrderedDict()
        moments = {OPTIM_M: {}, OPTIM_V: {}}
        adapter_params = collections.OrderedDict() if has_adapters else None
        for name, value in arrays.items():
            if name.startswith(ADAPTER):
                adapter_params[name[len(ADAPTER):]] = value
            elif name.startswith((OPTIM_M, OPTIM_V)):
                prefix = name[:len(OPTIM_M)]
                moments[prefix][int(name[len(prefix):])] = value
            else:
                params[name] = value
        optimizer_state = None
        if has_optimizer:
            optimizer_state = {
                'step': header.optim_step,
                'm': [moments[OPTIM_M][i] for i in sorted(moments[OPTIM_M])],
                'v': [moments[OPTIM_V][i] for i in sorted(moments[OPTIM_V])],
            }
        return cls(json.loads(header.descriptor), params, step=header.step,
                   config_hash=header.config_hash, optimizer_state=optimizer_state,
                   adapter_params=adapter_params, rng_state=header.rng_state,
                   extra=extra)

    def save(self, path):
        """Write atomically: the file either holds the old or the new checkpoint."""
        ensure_dir(os.path.dirname(path))
        tmp = path + '.tmp'
        with open(tmp, 'wb') as f:
            f.write(self.encode())
        os.replace(tmp, path)
        log.info('Saved checkpoint at step %d to %s', self.step, path)

    @classmethod
    def load(cls, path):
        with open(path, 'rb') as f:
            data = f.read()
        ckpt = cls.decode(data)
        log.debug('Loaded checkpoint %s (step %d)', path, ckpt.step)
        return ckpt
