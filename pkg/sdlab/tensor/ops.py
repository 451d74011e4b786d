"""Differentiable operations on :class:`~sdlab.tensor.Tensor`.

Broadcasting is deliberately narrow: two operands combine when their
shapes are equal, when one of them holds a single element of rank 0, or
when both have the same rank and every axis either matches or is a
singleton on one side. Anything else raises ShapeMismatchError.
"""
from __future__ import absolute_import, division

import numpy as np
from scipy.special import expit

from sdlab.errors import IllegalArgumentError, ShapeMismatchError
from sdlab.tensor.tensor import Function, Tensor


def as_tensor(value):
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _broadcast_shape(op, a, b):
    if a.shape == b.shape:
        return a.shape
    if a.ndim == 0:
        return b.shape
    if b.ndim == 0:
        return a.shape
    if a.ndim != b.ndim:
        raise ShapeMismatchError(op, a.shape, b.shape, 'ranks differ')
    out = []
    for da, db in zip(a.shape, b.shape):
        if da == db or db == 1:
            out.append(da)
        elif da == 1:
            out.append(db)
        else:
            raise ShapeMismatchError(op, a.shape, b.shape)
    return tuple(out)


def _unbroadcast(grad, shape):
    if grad.shape == shape:
        return grad
    if len(shape) == 0:
        return np.asarray(grad.sum())
    axes = tuple(i for i, (g, s) in enumerate(zip(grad.shape, shape)) if s == 1 and g != 1)
    return grad.sum(axis=axes, keepdims=True)


# elementwise

class Add(Function):
    def forward(self, a, b):
        _broadcast_shape('add', a, b)
        self.shapes = (a.shape, b.shape)
        return a + b

    def backward(self, grad):
        return _unbroadcast(grad, self.shapes[0]), _unbroadcast(grad, self.shapes[1])


class Sub(Function):
    def forward(self, a, b):
        _broadcast_shape('sub', a, b)
        self.shapes = (a.shape, b.shape)
        return a - b

    def backward(self, grad):
        return _unbroadcast(grad, self.shapes[0]), _unbroadcast(-grad, self.shapes[1])


class Mul(Function):
    def forward(self, a, b):
        _broadcast_shape('mul', a, b)
        self.a, self.b = a, b
        return a * b

    def backward(self, grad):
        return (_unbroadcast(grad * self.b, self.a.shape),
                _unbroadcast(grad * self.a, self.b.shape))


class Scale(Function):
    def forward(self, a, factor=1.0):
        self.factor = float(factor)
        return a * self.factor

    def backward(self, grad):
        return (grad * self.factor,)


class Sigmoid(Function):
    def forward(self, a):
        self.out = expit(a)
        return self.out

    def backward(self, grad):
        return (grad * self.out * (1.0 - self.out),)


class SiLU(Function):
    def forward(self, a):
        self.a = a
        self.s = expit(a)
        return a * self.s

    def backward(self, grad):
        s = self.s
        return (grad * (s + self.a * s * (1.0 - s)),)


class ReLU(Function):
    def forward(self, a):
        self.mask = a > 0
        return np.where(self.mask, a, 0.0)

    def backward(self, grad):
        return (grad * self.mask,)


def add(a, b):
    return Add.apply(as_tensor(a), as_tensor(b))


def sub(a, b):
    return Sub.apply(as_tensor(a), as_tensor(b))


def mul(a, b):
    return Mul.apply(as_tensor(a), as_tensor(b))


def scale(a, factor):
    return Scale.apply(as_tensor(a), factor=factor)


def sigmoid(a):
    return Sigmoid.apply(as_tensor(a))


def silu(a):
    return SiLU.apply(as_tensor(a))


def relu(a):
    return ReLU.apply(as_tensor(a))


_BINARY = {'add': add, 'sub': sub, 'mul': mul}
_UNARY = {'sigmoid': sigmoid, 'silu': silu, 'relu': relu}


def elementwise(kind, a, b=None):
    """Dispatch an elementwise op by name.

    ``scale`` takes a python number as ``b``; the binary kinds take a
    second tensor; the unary kinds reject ``b``.
    """
    if kind in _BINARY:
        if b is None:
            raise IllegalArgumentError('%s needs two operands' % (kind,))
        return _BINARY[kind](a, b)
    if kind == 'scale':
        return scale(a, b)
    if kind in _UNARY:
        if b is not None:
            raise IllegalArgumentError('%s takes a single operand' % (kind,))
        return _UNARY[kind](a)
    raise IllegalArgumentError('unknown elementwise op %r' % (kind,))


# linear algebra

class MatMul(Function):
    def forward(self, a, b):
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
            raise ShapeMismatchError('matmul', a.shape, b.shape, 'inner dimensions differ')
        self.a, self.b = a, b
        return a.dot(b)

    def backward(self, grad):
        return grad.dot(self.b.T), self.a.T.dot(grad)


def matmul(a, b):
    return MatMul.apply(as_tensor(a), as_tensor(b))


class Conv2d(Function):
    """Direct cross-correlation, looped over kernel taps.

    Works on [N, C, H, W]; the single-image [C, H, W] form is handled by
    :func:`conv2d` through a reshape.
    """
    def forward(self, x, w, stride=1, pad=0):
        n, c, h, wd = x.shape
        o, cw, kh, kw = w.shape
        if cw != c:
            raise ShapeMismatchError('conv2d', x.shape, w.shape, 'input channels differ')
        if kh % 2 == 0 or kw % 2 == 0:
            raise ShapeMismatchError('conv2d', x.shape, w.shape, 'kernel sizes must be odd')
        h_out = (h + 2 * pad - kh) // stride + 1
        w_out = (wd + 2 * pad - kw) // stride + 1
        if h_out < 1 or w_out < 1:
            raise ShapeMismatchError('conv2d', x.shape, w.shape, 'kernel larger than input')
        xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad))) if pad else x
        out = np.zeros((n, o, h_out, w_out))
        for i in range(kh):
            for j in range(kw):
                patch = xp[:, :, i:i + stride * h_out:stride, j:j + stride * w_out:stride]
                # (O, C) x (N, C, Ho, Wo) -> (O, N, Ho, Wo)
                out += np.moveaxis(np.tensordot(w[:, :, i, j], patch, axes=([1], [1])), 0, 1)
        self.xp, self.w = xp, w
        self.geometry = (stride, pad, h_out, w_out, x.shape)
        return out

    def backward(self, grad):
        stride, pad, h_out, w_out, x_shape = self.geometry
        xp, w = self.xp, self.w
        kh, kw = w.shape[2], w.shape[3]
        grad_xp = np.zeros_like(xp)
        grad_w = np.zeros_like(w)
        for i in range(kh):
            for j in range(kw):
                rows = slice(i, i + stride * h_out, stride)
                cols = slice(j, j + stride * w_out, stride)
                patch = xp[:, :, rows, cols]
                grad_w[:, :, i, j] = np.tensordot(grad, patch, axes=([0, 2, 3], [0, 2, 3]))
                # (N, O, Ho, Wo) x (O, C) -> (N, Ho, Wo, C)
                contrib = np.tensordot(grad, w[:, :, i, j], axes=([1], [0]))
                grad_xp[:, :, rows, cols] += np.moveaxis(contrib, 3, 1)
        if pad:
            grad_x = grad_xp[:, :, pad:pad + x_shape[2], pad:pad + x_shape[3]]
        else:
            grad_x = grad_xp
        return grad_x, grad_w


def conv2d(x, w, b=None, stride=1, pad=0):
    """Cross-correlate ``x`` [C,H,W] or [N,C,H,W] with ``w`` [O,C,kh,kw].

    Output spatial size is (H + 2*pad - kh) // stride + 1.
    """
    x, w = as_tensor(x), as_tensor(w)
    if w.ndim != 4:
        raise ShapeMismatchError('conv2d', x.shape, w.shape, 'weight must be [O,C,kh,kw]')
    single = x.ndim == 3
    if single:
        x = reshape(x, (1,) + x.shape)
    elif x.ndim != 4:
        raise ShapeMismatchError('conv2d', x.shape, w.shape, 'input must be [C,H,W] or [N,C,H,W]')
    out = Conv2d.apply(x, w, stride=stride, pad=pad)
    if b is not None:
        b = as_tensor(b)
        out = add(out, reshape(b, (1, b.shape[0], 1, 1)))
    if single:
        out = reshape(out, out.shape[1:])
    return out


# pooling and resampling

class AvgPoolGlobal(Function):
    def forward(self, x):
        if x.ndim < 3 or x.shape[-1] < 1 or x.shape[-2] < 1:
            raise ShapeMismatchError('avgpool_global', x.shape, (), 'need [..., C, H, W]')
        self.x_shape = x.shape
        return x.mean(axis=(-2, -1))

    def backward(self, grad):
        h, w = self.x_shape[-2:]
        return (np.broadcast_to(grad[..., None, None] / (h * w), self.x_shape).copy(),)


def avgpool_global(x):
    """Per-channel spatial mean: [C,H,W] -> [C], [N,C,H,W] -> [N,C]."""
    return AvgPoolGlobal.apply(as_tensor(x))


class AvgPool2x2(Function):
    def forward(self, x):
        h, w = x.shape[-2:]
        if h % 2 or w % 2:
            raise ShapeMismatchError('avgpool2x2', x.shape, (2, 2), 'spatial dims must be even')
        self.x_shape = x.shape
        blocks = x.reshape(x.shape[:-2] + (h // 2, 2, w // 2, 2))
        return blocks.mean(axis=(-3, -1))

    def backward(self, grad):
        up = np.repeat(np.repeat(grad, 2, axis=-2), 2, axis=-1)
        return (up / 4.0,)


def avgpool2x2(x):
    return AvgPool2x2.apply(as_tensor(x))


class UpsampleNearest2x(Function):
    def forward(self, x):
        return np.repeat(np.repeat(x, 2, axis=-2), 2, axis=-1)

    def backward(self, grad):
        h, w = grad.shape[-2:]
        blocks = grad.reshape(grad.shape[:-2] + (h // 2, 2, w // 2, 2))
        return (blocks.sum(axis=(-3, -1)),)


def upsample_nearest2x(x):
    return UpsampleNearest2x.apply(as_tensor(x))


# structural

class Reshape(Function):
    def forward(self, x, shape=None):
        self.x_shape = x.shape
        try:
            return x.reshape(shape)
        except ValueError:
            raise ShapeMismatchError('reshape', x.shape, shape)

    def backward(self, grad):
        return (grad.reshape(self.x_shape),)


def reshape(x, shape):
    return Reshape.apply(as_tensor(x), shape=tuple(shape))


class Concat(Function):
    def forward(self, *arrays, **kwargs):
        axis = kwargs.get('axis', 0)
        ref = arrays[0]
        for arr in arrays[1:]:
            other = list(arr.shape)
            expect = list(ref.shape)
            if len(other) != len(expect):
                raise ShapeMismatchError('concat', ref.shape, arr.shape, 'ranks differ')
            other[axis] = expect[axis] = 0
            if other != expect:
                raise ShapeMismatchError('concat', ref.shape, arr.shape)
        self.axis = axis
        self.sizes = [a.shape[axis] for a in arrays]
        return np.concatenate(arrays, axis=axis)

    def backward(self, grad):
        cuts = np.cumsum(self.sizes)[:-1]
        return tuple(np.split(grad, cuts, axis=self.axis))


def concat(tensors, axis=0):
    return Concat.apply(*[as_tensor(t) for t in tensors], axis=axis)


class Narrow(Function):
    def forward(self, x, axis=0, start=0, length=1):
        if start < 0 or start + length > x.shape[axis]:
            raise ShapeMismatchError('narrow', x.shape, (start, start + length),
                                     'slice out of range on axis %d' % (axis,))
        self.x_shape = x.shape
        self.index = [slice(None)] * x.ndim
        self.index[axis] = slice(start, start + length)
        self.index = tuple(self.index)
        return x[self.index].copy()

    def backward(self, grad):
        out = np.zeros(self.x_shape)
        out[self.index] = grad
        return (out,)


def narrow(x, axis, start, length):
    return Narrow.apply(as_tensor(x), axis=axis, start=start, length=length)


def chunk(x, n, axis=0):
    """Split ``x`` into ``n`` equal parts along ``axis``."""
    x = as_tensor(x)
    size = x.shape[axis]
    if size % n:
        raise ShapeMismatchError('chunk', x.shape, (n,),
                                 'axis %d of size %d is not divisible by %d' % (axis, size, n))
    step = size // n
    return [narrow(x, axis, i * step, step) for i in range(n)]


class SumAll(Function):
    def forward(self, x):
        self.x_shape = x.shape
        return np.asarray(x.sum())

    def backward(self, grad):
        return (np.full(self.x_shape, float(grad)),)


class MeanAll(Function):
    def forward(self, x):
        self.x_shape = x.shape
        return np.asarray(x.mean())

    def backward(self, grad):
        return (np.full(self.x_shape, float(grad) / max(1, int(np.prod(self.x_shape)))),)


def sum_all(x):
    return SumAll.apply(as_tensor(x))


def mean_all(x):
    return MeanAll.apply(as_tensor(x))


def mse(a, b):
    """Mean over all elements of (a - b)**2."""
    diff = sub(a, b)
    return mean_all(mul(diff, diff))


class EmbeddingLookup(Function):
    def forward(self, table, indices=None):
        indices = np.asarray(indices, dtype=np.int64)
        if indices.min() < 0 or indices.max() >= table.shape[0]:
            raise IllegalArgumentError('embedding index out of range [0, %d)' % (table.shape[0],))
        self.indices = indices
        self.table_shape = table.shape
        return table[indices]

    def backward(self, grad):
        out = np.zeros(self.table_shape)
        np.add.at(out, self.indices, grad)
        return (out,)


def embedding(table, indices):
    return EmbeddingLookup.apply(as_tensor(table), indices=indices)
