from __future__ import absolute_import

from io import BytesIO

from sdlab.protocol.types import AbstractType, Schema


class _hybridmethod(object):
    """Bind to the class when accessed there and to the instance otherwise."""
    def __init__(self, on_class):
        self.on_class = on_class
        self.on_instance = on_class

    def instance(self, on_instance):
        self.on_instance = on_instance
        return self

    def __get__(self, obj, cls):
        if obj is None:
            return self.on_class.__get__(cls, type(cls))
        return self.on_instance.__get__(obj, cls)


class Struct(AbstractType):
    """A record whose attributes are the fields of ``SCHEMA``.

    Build it positionally (all fields) or by keyword (missing ones are
    None). ``Header.encode((step, ...))`` encodes a plain tuple,
    ``header.encode()`` the instance.
    """
    SCHEMA = Schema()

    def __init__(self, *args, **kwargs):
        names = self.SCHEMA.names
        if args and len(args) != len(names):
            raise ValueError('%s takes %d positional fields, got %d'
                             % (type(self).__name__, len(names), len(args)))
        values = args or [kwargs.pop(name, None) for name in names]
        if kwargs:
            raise ValueError('unknown fields %s for %s, expected %s'
                             % (sorted(kwargs), type(self).__name__, list(names)))
        self.__dict__.update(zip(names, values))

    def fields(self):
        return tuple(self.__dict__[name] for name in self.SCHEMA.names)

    @_hybridmethod
    def encode(cls, item):  # pylint: disable=E0202
        return cls.SCHEMA.encode(item)

    @encode.instance
    def encode(self):  # pylint: disable=E0102
        return self.SCHEMA.encode(self.fields())

    @classmethod
    def decode(cls, data):
        if isinstance(data, bytes):
            data = BytesIO(data)
        return cls(*cls.SCHEMA.decode(data))

    def __repr__(self):
        return type(self).__name__ + self.SCHEMA.repr(self)

    def __eq__(self, other):
        return type(self) is type(other) and self.fields() == other.fields()

    def __ne__(self, other):
        return not self == other

    __hash__ = None
