from __future__ import absolute_import

import inspect
import sys


class SdlabError(RuntimeError):
    # process exit status used by the command line runner
    exit_code = 1

    def __str__(self):
        if not self.args:
            return self.__class__.__name__
        return '{0}: {1}'.format(self.__class__.__name__,
                                 super(SdlabError, self).__str__())


class IllegalStateError(SdlabError):
    pass


class IllegalArgumentError(SdlabError):
    pass


class ShapeMismatchError(SdlabError):
    """Raised when two operands cannot be combined.

    Arguments:
        op (str): name of the operation being applied
        shape_a (tuple): shape of the first operand
        shape_b (tuple): shape of the second operand
    """
    def __init__(self, op, shape_a, shape_b, detail=None):
        self.op = op
        self.shape_a = tuple(shape_a)
        self.shape_b = tuple(shape_b)
        msg = '{0}: incompatible shapes {1} and {2}'.format(
            op, self.shape_a, self.shape_b)
        if detail:
            msg += ' ({0})'.format(detail)
        super(ShapeMismatchError, self).__init__(msg)


class NumericalDivergenceError(SdlabError):
    """A NaN or Inf was produced.

    ``step`` is filled in by the training loop when the error escapes a
    training step; ``op`` names the operation whose output was non-finite.
    """
    exit_code = 3

    def __init__(self, message='non-finite value produced', op=None, step=None):
        self.op = op
        self.step = step
        super(NumericalDivergenceError, self).__init__(message)

    def __str__(self):
        base = super(NumericalDivergenceError, self).__str__()
        extra = []
        if self.op is not None:
            extra.append('op=%s' % (self.op,))
        if self.step is not None:
            extra.append('step=%d' % (self.step,))
        if extra:
            return '%s [%s]' % (base, ', '.join(extra))
        return base


class ConfigurationError(SdlabError):
    exit_code = 2


class UnknownTaskError(ConfigurationError):
    pass


class UnknownAnalysisError(ConfigurationError):
    pass


class InsufficientSamplesError(SdlabError):
    pass


class DegenerateSignalError(SdlabError):
    pass


class CheckpointError(SdlabError):
    pass


class ChecksumError(CheckpointError):
    pass


class BufferUnderflowError(CheckpointError):
    pass


def _iter_errors():
    for name, obj in inspect.getmembers(sys.modules[__name__]):
        if inspect.isclass(obj) and issubclass(obj, SdlabError):
            yield obj


def exit_code_for(exc):
    """Map an exception instance to the command line exit status."""
    if isinstance(exc, SdlabError):
        return exc.exit_code
    return 1


def for_exit_code(code):
    """Return the most general error class reported with ``code``."""
    candidates = [e for e in _iter_errors() if e.exit_code == code]
    if not candidates:
        return SdlabError
    # the base of each family is the one with the shortest mro
    return min(candidates, key=lambda cls: len(cls.__mro__))
