from __future__ import absolute_import

import contextlib
import logging
import threading

import numpy as np

from sdlab.errors import (
    IllegalArgumentError, IllegalStateError, NumericalDivergenceError, ShapeMismatchError)

log = logging.getLogger(__name__)

_grad_mode = threading.local()


def is_grad_enabled():
    return getattr(_grad_mode, 'enabled', True)


@contextlib.contextmanager
def no_grad():
    """Run forward passes without recording a compute graph.

    The flag is thread-local; a graph is always owned by a single thread.
    """
    previous = is_grad_enabled()
    _grad_mode.enabled = False
    try:
        yield
    finally:
        _grad_mode.enabled = previous


class Function(object):
    """Base class for differentiable operations.

    A Function instance is the graph record of one op application: it keeps
    references to its input tensors (``parents``) plus whatever
    intermediates ``forward`` chose to save for the backward rule.

    Subclasses implement ``forward(*arrays, **kwargs)`` returning a numpy
    array and ``backward(grad)`` returning one gradient array (or None) per
    parent.
    """
    def __init__(self, *parents):
        self.parents = parents

    def forward(self, *arrays, **kwargs):
        raise NotImplementedError('forward must be implemented')

    def backward(self, grad):
        raise NotImplementedError('backward must be implemented')

    @classmethod
    def apply(cls, *tensors, **kwargs):
        ctx = cls(*tensors)
        out = ctx.forward(*[t.data for t in tensors], **kwargs)
        requires_grad = is_grad_enabled() and any(t.requires_grad for t in tensors)
        return Tensor(out, requires_grad=requires_grad,
                      _ctx=ctx if requires_grad else None,
                      _op=cls.__name__)


class Tensor(object):
    """Dense row-major f64 array that takes part in reverse-mode autodiff.

    Arguments:
        data (array_like): values, converted to float64
        requires_grad (bool): whether backward() should populate ``grad``
            for this tensor (only meaningful for leaves)
    """
    __array_priority__ = 1000

    def __init__(self, data, requires_grad=False, _ctx=None, _op=None):
        self.data = np.asarray(data, dtype=np.float64)
        if not np.all(np.isfinite(self.data)):
            raise NumericalDivergenceError(
                'non-finite value in tensor of shape %s' % (self.data.shape,),
                op=_op)
        self.requires_grad = bool(requires_grad)
        self.grad = None
        self._ctx = _ctx

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    @property
    def is_leaf(self):
        return self._ctx is None

    def numpy(self):
        return self.data

    def item(self):
        if self.data.size != 1:
            raise IllegalArgumentError('item requires a single-element tensor, got shape %s'
                                       % (self.shape,))
        return float(self.data.reshape(-1)[0])

    def detach(self):
        return Tensor(self.data)

    def zero_grad(self):
        self.grad = None

    def backward(self, grad=None):
        """Accumulate d(self)/d(leaf) into ``grad`` of every requires_grad leaf.

        Gradients of intermediate nodes are held only for the duration of
        the call. Repeated calls add into leaf gradients.
        """
        if grad is None:
            if self.data.size != 1:
                raise IllegalArgumentError(
                    'backward needs a scalar loss, got shape %s' % (self.shape,))
            grad = np.ones_like(self.data)
        else:
            grad = np.asarray(grad, dtype=np.float64)
            if grad.shape != self.shape:
                raise ShapeMismatchError('backward', self.shape, grad.shape)
        if not self.requires_grad:
            raise IllegalStateError('backward called on a tensor that does not require grad')

        order = self._topological_order()
        pending = {id(self): grad}
        for node in order:
            g = pending.pop(id(node), None)
            if g is None:
                continue
            if node._ctx is None:
                node.grad = g.copy() if node.grad is None else node.grad + g
                continue
            parent_grads = node._ctx.backward(g)
            for parent, pg in zip(node._ctx.parents, parent_grads):
                if pg is None or not parent.requires_grad:
                    continue
                if pg.shape != parent.shape:
                    raise ShapeMismatchError(
                        type(node._ctx).__name__ + '.backward', parent.shape, pg.shape)
                if id(parent) in pending:
                    pending[id(parent)] = pending[id(parent)] + pg
                else:
                    pending[id(parent)] = pg
        return self

    def _topological_order(self):
        # iterative post-order walk; returned list starts at self
        post = []
        visited = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                post.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            if node._ctx is not None:
                for parent in node._ctx.parents:
                    if parent.requires_grad and id(parent) not in visited:
                        stack.append((parent, False))
        post.reverse()
        return post

    # operator sugar, implemented in ops

    def __add__(self, other):
        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return ops.sub(self, other)

    def __rsub__(self, other):
        return ops.sub(ops.as_tensor(other), self)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return ops.scale(self, other)
        return ops.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, float)):
            raise IllegalArgumentError('only division by a python scalar is supported')
        return ops.scale(self, 1.0 / other)

    def __neg__(self):
        return ops.scale(self, -1.0)

    def __matmul__(self, other):
        return ops.matmul(self, other)

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return ops.reshape(self, shape)

    def sum(self):
        return ops.sum_all(self)

    def mean(self):
        return ops.mean_all(self)

    def __repr__(self):
        return 'Tensor(shape=%s, requires_grad=%s, data=%s)' % (
            self.shape, self.requires_grad,
            np.array2string(self.data, precision=4, threshold=8))


from sdlab.tensor import ops  # noqa: E402  pylint: disable=wrong-import-position
