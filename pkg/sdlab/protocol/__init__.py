from __future__ import absolute_import

from sdlab.protocol.struct import Struct
from sdlab.protocol.types import (
    Array, Bytes, Float64, Float64Array, Int32, Int64, Schema, String)

__all__ = [
    'Struct', 'Array', 'Bytes', 'Float64', 'Float64Array', 'Int32', 'Int64',
    'Schema', 'String',
]
