from __future__ import absolute_import

import csv
import logging
import os

import numpy as np

from sdlab.errors import IllegalArgumentError
from sdlab.util import ensure_dir

try:
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

log = logging.getLogger(__name__)


def has_plotting():
    return plt is not None


def to_uint8(image, lo=-1.0, hi=1.0):
    """Affine map [lo, hi] -> [0, 255], clipped and rounded."""
    image = np.asarray(image, dtype=np.float64)
    scaled = (image - lo) / (hi - lo) * 255.0
    return np.clip(np.rint(scaled), 0, 255).astype(np.uint8)


def write_pgm(path, image, lo=-1.0, hi=1.0):
    """Write a 2D array as binary 8-bit PGM (P5)."""
    image = np.asarray(image)
    if image.ndim == 3 and image.shape[0] == 1:
        image = image[0]
    if image.ndim != 2:
        raise IllegalArgumentError('PGM needs a single-channel 2D image, got shape %s'
                                   % (image.shape,))
    pixels = image if image.dtype == np.uint8 else to_uint8(image, lo, hi)
    height, width = pixels.shape
    ensure_dir(os.path.dirname(path))
    with open(path, 'wb') as f:
        f.write(b'P5\n%d %d\n255\n' % (width, height))
        f.write(pixels.tobytes())
    return path


def read_pgm(path):
    """Read a P5 PGM with maxval 255 back into a uint8 [H, W] array."""
    with open(path, 'rb') as f:
        data = f.read()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b'#':
            pos = data.index(b'\n', pos) + 1
            continue
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    magic, width, height, maxval = tokens[0], int(tokens[1]), int(tokens[2]), int(tokens[3])
    if magic != b'P5' or maxval != 255:
        raise IllegalArgumentError('%s is not an 8-bit binary PGM' % (path,))
    pos += 1
    pixels = np.frombuffer(data[pos:pos + width * height], dtype=np.uint8)
    if pixels.size != width * height:
        raise IllegalArgumentError('%s is truncated' % (path,))
    return pixels.reshape(height, width).copy()


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_csv(path, header, rows):
    """Write rows under a header; floats keep full precision."""
    ensure_dir(os.path.dirname(path))
    with open(path, 'w') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    log.debug('Wrote %s', path)
    return path


def read_csv(path):
    """Header and rows as lists of strings."""
    with open(path) as f:
        reader = csv.reader(f)
        rows = list(reader)
    if not rows:
        return [], []
    return rows[0], rows[1:]


def save_plot(path, x, series, xlabel='', ylabel='', title='', logy=False):
    """Line plot of ``series`` ({label: y}) against ``x``; skipped without matplotlib."""
    if not has_plotting():
        log.info('matplotlib not installed, skipping %s', path)
        return None
    ensure_dir(os.path.dirname(path))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for label, y in series.items():
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if logy:
        ax.set_yscale('log')
    if len(series) > 1:
        ax.legend(fontsize='small')
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
