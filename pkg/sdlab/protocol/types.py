"""Little-endian field codecs used by the checkpoint format."""
from __future__ import absolute_import

import abc
import struct
from struct import error

import numpy as np

from sdlab.errors import BufferUnderflowError, CheckpointError


class AbstractType(object):
    """A field codec: ``encode`` gives bytes, ``decode`` reads them back
    from a file-like buffer."""
    __metaclass__ = abc.ABCMeta

    @abc.abstractmethod
    def encode(cls, value):  # pylint: disable=no-self-argument
        pass

    @abc.abstractmethod
    def decode(cls, data):  # pylint: disable=no-self-argument
        pass

    @classmethod
    def repr(cls, value):
        return repr(value)


def _pack(f, value):
    try:
        return f(value)
    except error as e:
        raise CheckpointError("cannot encode {!r}: {}".format(value, e))


def _read(data, n, what):
    raw = data.read(n)
    if len(raw) != n:
        raise BufferUnderflowError('need %d bytes for %s, got %d' % (n, what, len(raw)))
    return raw


class _Fixed(AbstractType):
    _struct = None
    _name = None

    @classmethod
    def encode(cls, value):
        return _pack(cls._struct.pack, value)

    @classmethod
    def decode(cls, data):
        (value,) = cls._struct.unpack(_read(data, cls._struct.size, cls._name))
        return value


class Int32(_Fixed):
    _struct = struct.Struct('<i')
    _name = 'Int32'


class Int64(_Fixed):
    _struct = struct.Struct('<q')
    _name = 'Int64'


class Float64(_Fixed):
    _struct = struct.Struct('<d')
    _name = 'Float64'


class String(AbstractType):
    """Int32 byte length then the encoded text; -1 encodes None."""
    def __init__(self, encoding='utf-8'):
        self.encoding = encoding

    def encode(self, value):
        if value is None:
            return Int32.encode(-1)
        value = str(value).encode(self.encoding)
        return Int32.encode(len(value)) + value

    def decode(self, data):
        length = Int32.decode(data)
        if length < 0:
            return None
        return _read(data, length, 'String').decode(self.encoding)


class Bytes(AbstractType):
    @classmethod
    def encode(cls, value):
        if value is None:
            return Int32.encode(-1)
        return Int32.encode(len(value)) + value

    @classmethod
    def decode(cls, data):
        length = Int32.decode(data)
        if length < 0:
            return None
        return _read(data, length, 'Bytes')

    @classmethod
    def repr(cls, value):
        return repr(value[:100] + b'...' if value is not None and len(value) > 100 else value)


class Float64Array(AbstractType):
    """Int32 rank, Int64 per dim, then the row-major ``<f8`` payload."""
    _dtype = np.dtype('<f8')

    @classmethod
    def encode(cls, value):
        arr = np.asarray(value, dtype=cls._dtype, order='C')
        head = [Int32.encode(arr.ndim)] + [Int64.encode(d) for d in arr.shape]
        return b''.join(head) + arr.tobytes()

    @classmethod
    def decode(cls, data):
        rank = Int32.decode(data)
        if rank < 0:
            raise CheckpointError('negative array rank %d' % (rank,))
        shape = tuple(Int64.decode(data) for _ in range(rank))
        count = int(np.prod(shape, dtype=np.int64))
        raw = _read(data, count * cls._dtype.itemsize, 'Float64Array')
        return np.frombuffer(raw, dtype=cls._dtype).reshape(shape).astype(np.float64)

    @classmethod
    def repr(cls, value):
        return 'array(shape=%s)' % (np.shape(value),)


class Schema(AbstractType):
    """An ordered record of (name, codec) fields, encoded back to back."""
    def __init__(self, *fields):
        self.names = tuple(name for name, _ in fields)
        self.fields = tuple(codec for _, codec in fields)

    def encode(self, item):
        if len(item) != len(self.fields):
            raise ValueError('expected %d fields (%s), got %d'
                             % (len(self.fields), ', '.join(self.names), len(item)))
        return b''.join(codec.encode(value) for codec, value in zip(self.fields, item))

    def decode(self, data):
        return tuple(codec.decode(data) for codec in self.fields)

    def __len__(self):
        return len(self.fields)

    def repr(self, value):
        parts = []
        for i, (name, codec) in enumerate(zip(self.names, self.fields)):
            field = getattr(value, name) if hasattr(value, name) else value[i]
            parts.append('%s=%s' % (name, codec.repr(field)))
        return '(%s)' % (', '.join(parts),)


def _is_codec(obj):
    return isinstance(obj, AbstractType) or (isinstance(obj, type) and
                                             issubclass(obj, AbstractType))


class Array(AbstractType):
    """Int32 count then each item; -1 encodes None.

    ``Array(codec)`` repeats one codec, ``Array(('a', A), ('b', B))``
    repeats an inline Schema.
    """
    def __init__(self, *item_type):
        if len(item_type) == 1 and _is_codec(item_type[0]):
            self.item = item_type[0]
        elif len(item_type) > 1:
            self.item = Schema(*item_type)
        else:
            raise ValueError('Array needs an item codec')

    def encode(self, items):
        if items is None:
            return Int32.encode(-1)
        return Int32.encode(len(items)) + b''.join(self.item.encode(x) for x in items)

    def decode(self, data):
        count = Int32.decode(data)
        if count < 0:
            return None
        return [self.item.decode(data) for _ in range(count)]

    def repr(self, items):
        if items is None:
            return 'NULL'
        return '[%s]' % (', '.join(self.item.repr(x) for x in items),)
