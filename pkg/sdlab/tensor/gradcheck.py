from __future__ import absolute_import, division

import logging

import numpy as np

from sdlab.tensor.tensor import no_grad

log = logging.getLogger(__name__)


def numerical_grad(fn, tensors, h=1e-6):
    """Central finite differences of scalar ``fn()`` w.r.t. each tensor.

    ``fn`` takes no arguments and reads the tensors' ``data`` directly, so
    the data arrays are perturbed in place and restored afterwards.
    """
    grads = []
    with no_grad():
        for t in tensors:
            t.data = np.ascontiguousarray(t.data)
            g = np.zeros_like(t.data)
            flat = t.data.reshape(-1)
            gflat = g.reshape(-1)
            for i in range(flat.size):
                orig = flat[i]
                flat[i] = orig + h
                plus = fn().item()
                flat[i] = orig - h
                minus = fn().item()
                flat[i] = orig
                gflat[i] = (plus - minus) / (2.0 * h)
            grads.append(g)
    return grads


def analytic_grad(fn, tensors):
    for t in tensors:
        t.zero_grad()
    fn().backward()
    return [np.zeros_like(t.data) if t.grad is None else t.grad.copy() for t in tensors]


def relative_error(a, b):
    """Norm-wise relative error ||a - b|| / max(||a||, ||b||, tiny)."""
    a = np.concatenate([np.ravel(x) for x in a]) if isinstance(a, (list, tuple)) else np.ravel(a)
    b = np.concatenate([np.ravel(x) for x in b]) if isinstance(b, (list, tuple)) else np.ravel(b)
    denom = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return float(np.linalg.norm(a - b) / denom)


def check_grad(fn, tensors, h=1e-6):
    """Compare reverse-mode and finite-difference gradients.

    Arguments:
        fn (callable): builds and returns a scalar Tensor from ``tensors``
        tensors (list of Tensor): leaves with ``requires_grad=True``

    Returns:
        float: norm-wise relative error over all tensors
    """
    analytic = analytic_grad(fn, tensors)
    numeric = numerical_grad(fn, tensors, h=h)
    err = relative_error(analytic, numeric)
    log.debug('gradcheck over %d tensors: rel err %.3e', len(tensors), err)
    return err
