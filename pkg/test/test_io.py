from __future__ import absolute_import

import numpy as np
import pytest

from sdlab.errors import IllegalArgumentError
from sdlab.lab.io import read_csv, read_pgm, save_plot, to_uint8, write_csv, write_pgm
import sdlab.lab.io as io_module


def test_to_uint8_mapping():
    np.testing.assert_array_equal(to_uint8([-1.0, 0.0, 1.0, 5.0, -3.0]), [0, 128, 255, 255, 0])


def test_pgm_layout(tmpdir):
    image = np.array([[-1.0, 1.0, 0.0], [1.0, -1.0, 0.0]])
    path = write_pgm(str(tmpdir.join('img', 'x.pgm')), image)
    data = open(path, 'rb').read()
    assert data.startswith(b'P5\n3 2\n255\n')
    assert data[-6:] == bytes(bytearray([0, 255, 128, 255, 0, 128]))
    np.testing.assert_array_equal(read_pgm(path), [[0, 255, 128], [255, 0, 128]])


def test_pgm_single_channel_and_comments(tmpdir):
    path = str(tmpdir.join('c.pgm'))
    write_pgm(path, np.zeros((1, 2, 2)))
    with open(path, 'wb') as f:
        f.write(b'P5\n# made by hand\n2 1\n255\n\x07\x09')
    np.testing.assert_array_equal(read_pgm(path), [[7, 9]])


def test_pgm_errors(tmpdir):
    with pytest.raises(IllegalArgumentError):
        write_pgm(str(tmpdir.join('x.pgm')), np.zeros((2, 2, 2)))
    path = str(tmpdir.join('t.pgm'))
    with open(path, 'wb') as f:
        f.write(b'P5\n4 4\n255\n\x00\x00')
    with pytest.raises(IllegalArgumentError):
        read_pgm(path)
    with open(path, 'wb') as f:
        f.write(b'P2\n1 1\n255\n0')
    with pytest.raises(IllegalArgumentError):
        read_pgm(path)


def test_csv_keeps_precision(tmpdir):
    path = write_csv(str(tmpdir.join('out', 'x.csv')), ['a', 'b'],
                     [[np.float64(0.1) + np.float64(0.2), np.int64(3)], ['x', 1]])
    header, rows = read_csv(path)
    assert header == ['a', 'b']
    assert float(rows[0][0]) == 0.1 + 0.2
    assert rows[0][1] == '3'
    assert rows[1] == ['x', '1']


def test_save_plot_without_matplotlib(tmpdir, monkeypatch):
    monkeypatch.setattr(io_module, 'plt', None)
    assert not io_module.has_plotting()
    assert save_plot(str(tmpdir.join('p.png')), [0, 1], {'a': [1, 2]}) is None
    assert not tmpdir.join('p.png').check()


def test_save_plot(tmpdir):
    pytest.importorskip('matplotlib')
    assert io_module.has_plotting()
    path = save_plot(str(tmpdir.join('plots', 'p.png')), [1, 2, 3],
                     {'a': [1, 2, 3], 'b': [3, 2, 1]}, logy=True, title='t')
    assert tmpdir.join('plots', 'p.png').check()
    assert path.endswith('p.png')
