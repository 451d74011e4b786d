from __future__ import absolute_import, division

import numpy as np
import pytest

from sdlab.errors import IllegalArgumentError, ShapeMismatchError
from sdlab.spectral import (
    SpectrumGrid, dft1, dft2, dwt_haar_1d, dwt_haar_2d, idft1, idft2, idwt_haar_1d,
    idwt_haar_2d, radial_frequencies, radial_profile, rfft_magnitude,
    sample_power_law_batch, sample_power_law_field, write_profile_csv)
from sdlab.spectral.profile import radial_bin_edges
from sdlab.structs import PowerLawSpectrum
from sdlab.tensor import Tensor, ops
from sdlab.tensor.gradcheck import check_grad
from sdlab.util import make_rng
from test.testutil import leaf


@pytest.mark.parametrize('n,method', [(8, 'fft'), (8, 'direct'), (6, 'auto'), (1, 'auto')])
def test_dft1_matches_numpy(rng, n, method):
    x = rng.standard_normal((3, n))
    np.testing.assert_allclose(dft1(x, method=method), np.fft.fft(x), atol=1e-10)
    np.testing.assert_allclose(idft1(dft1(x, method=method), method=method).real, x,
                               atol=1e-12)


def test_radix2_rejects_other_lengths(rng):
    with pytest.raises(IllegalArgumentError):
        dft1(rng.standard_normal(6), method='fft')
    with pytest.raises(IllegalArgumentError):
        dft1(rng.standard_normal(4), method='bluestein')


@pytest.mark.parametrize('shape', [(8, 8), (2, 6, 4), (5, 3)])
def test_dft2_matches_numpy_and_inverts(rng, shape):
    x = rng.standard_normal(shape)
    spec = dft2(x)
    np.testing.assert_allclose(spec.coefficients, np.fft.fft2(x), atol=1e-10)
    np.testing.assert_allclose(idft2(spec), x, atol=1e-12)


@pytest.mark.parametrize('shape,method', [((8, 8), 'fft'), ((8, 8), 'direct'), ((6, 10), 'auto')])
def test_dft2_of_real_input_is_hermitian(rng, shape, method):
    coeffs = dft2(rng.uniform(-2, 2, size=shape), method=method).coefficients
    mirrored = np.roll(coeffs[::-1, ::-1], 1, axis=(0, 1))
    np.testing.assert_allclose(coeffs, np.conj(mirrored), rtol=0, atol=1e-12)


def test_dft2_parseval(rng):
    x = rng.standard_normal((16, 16))
    coeffs = dft2(Tensor(x)).coefficients
    assert np.sum(x ** 2) == pytest.approx(np.sum(np.abs(coeffs) ** 2) / x.size, rel=1e-12)


def test_constant_image_has_only_dc():
    spec = dft2(np.full((4, 4), 2.0))
    assert spec.coefficients[0, 0] == pytest.approx(32.0)
    mags = spec.magnitude()
    mags[0, 0] = 0.0
    assert mags.max() < 1e-12


def test_centered_layout_roundtrip(rng):
    x = rng.standard_normal((4, 6))
    centered = dft2(x, centered=True)
    assert centered.dc_centered
    assert centered.coefficients[2, 3] == pytest.approx(x.sum())
    assert centered.centered() is centered
    np.testing.assert_allclose(idft2(centered), x, atol=1e-12)


def test_spectrum_grid_needs_two_axes():
    with pytest.raises(IllegalArgumentError):
        SpectrumGrid(np.zeros(4))


def test_rfft_magnitude_of_cosine():
    n = 16
    x = np.cos(2 * np.pi * 3 * np.arange(n) / n)
    mag = rfft_magnitude(x)
    assert mag.shape == (n // 2 + 1,)
    assert np.argmax(mag) == 3
    assert mag[3] == pytest.approx(n / 2)


def test_haar_2d_inverts_and_preserves_energy(rng):
    x = rng.standard_normal((2, 3, 8, 6))
    bands = dwt_haar_2d(x)
    assert bands.ll.shape == (2, 3, 4, 3)
    energy = sum(np.sum(b.data ** 2) for b in bands)
    assert energy == pytest.approx(np.sum(x ** 2), rel=1e-12)
    np.testing.assert_allclose(idwt_haar_2d(bands).data, x, atol=1e-12)


def test_haar_2d_band_definitions():
    block = np.array([[[1.0, 2.0], [3.0, 4.0]]])
    ll, lh, hl, hh = [b.data.item() for b in dwt_haar_2d(block)]
    assert ll == pytest.approx(5.0)
    assert lh == pytest.approx(-1.0)
    assert hl == pytest.approx(-2.0)
    assert hh == pytest.approx(0.0)


def test_haar_constant_has_no_detail():
    bands = dwt_haar_2d(np.full((1, 4, 4), 3.0))
    for band in bands[1:]:
        assert np.abs(band.data).max() == 0.0


def test_haar_odd_dims():
    with pytest.raises(ShapeMismatchError):
        dwt_haar_2d(np.zeros((1, 5, 4)))
    with pytest.raises(ShapeMismatchError):
        dwt_haar_1d(np.zeros(7))


def test_haar_1d_roundtrip(rng):
    x = rng.standard_normal((4, 10))
    approx, detail = dwt_haar_1d(x)
    assert approx.shape == (4, 5)
    np.testing.assert_allclose(idwt_haar_1d(approx, detail).data, x, atol=1e-12)


def test_haar_gradients(rng):
    x = leaf(rng, 1, 2, 4, 4)
    target = Tensor(rng.standard_normal((1, 2, 2, 2)))

    def fn():
        ll, lh, hl, hh = dwt_haar_2d(x)
        return ops.add(ops.mse(ll, target), ops.mse(ops.mul(lh, hh), hl))

    assert check_grad(fn, [x]) < 1e-6

    y = leaf(rng, 3, 6)

    def fn1d():
        a, d = dwt_haar_1d(y)
        return ops.mse(idwt_haar_1d(ops.mul(a, a), d), Tensor(np.ones((3, 6))))

    assert check_grad(fn1d, [y]) < 1e-6


def test_radial_frequencies():
    radius = radial_frequencies(4, 4)
    assert radius[0, 0] == 0.0
    assert radius[0, 1] == 1.0
    assert radius[2, 2] == pytest.approx(np.sqrt(8.0))
    np.testing.assert_array_equal(radius, radius.T)
    centered = radial_frequencies(4, 4, centered=True)
    assert centered[2, 2] == 0.0


def test_radial_profile_excludes_dc():
    grid = np.zeros((8, 8))
    grid[0, 0] = 100.0
    profile = radial_profile(SpectrumGrid(grid), n_bins=4)
    assert np.all(profile.mean_magnitude == 0.0)
    assert profile.counts.sum() == 63


def test_radial_profile_bins(rng):
    x = rng.standard_normal((5, 8, 8))
    profile = radial_profile(dft2(x), n_bins=5)
    assert len(profile.bin_centers) == 5
    assert len(profile.bin_edges) == 6
    assert np.all(profile.counts > 0)
    mags = np.abs(np.fft.fft2(x)).mean(axis=0)
    radius = radial_frequencies(8, 8)
    first = (radius > 0) & (radius < profile.bin_edges[1])
    assert profile.mean_magnitude[0] == pytest.approx(mags[first].mean())


def test_radial_bins_need_two():
    with pytest.raises(IllegalArgumentError):
        radial_bin_edges(8, 8, 1)


def test_write_profile_csv(tmpdir, rng):
    profile = radial_profile(dft2(rng.standard_normal((8, 8))), n_bins=3)
    path = write_profile_csv(profile, str(tmpdir.join('profile.csv')))
    lines = open(path).read().splitlines()
    assert lines[0] == 'bin_center_freq,mean_magnitude,count'
    assert len(lines) == 4
    assert float(lines[1].split(',')[1]) == profile.mean_magnitude[0]


def test_power_law_field_statistics(rng):
    fields = sample_power_law_batch(PowerLawSpectrum(1.0, 2.0), 40, 32, 32, rng)
    assert fields.shape == (40, 32, 32)
    np.testing.assert_allclose(fields.mean(axis=(1, 2)), 0.0, atol=1e-12)
    np.testing.assert_allclose(fields.std(axis=(1, 2)), 1.0, atol=1e-12)

    # every non-DC coefficient has |X| proportional to f^(-alpha/2)
    mags = np.abs(np.fft.fft2(fields[0]))
    radius = radial_frequencies(32, 32)
    nz = radius > 0
    ratio = mags[nz] * radius[nz]
    assert ratio.std() / ratio.mean() < 1e-8
    assert mags[0, 0] < 1e-9


def test_power_law_is_seeded():
    a = sample_power_law_field(PowerLawSpectrum(), 8, 8, make_rng(3))
    b = sample_power_law_field(PowerLawSpectrum(), 8, 8, make_rng(3))
    np.testing.assert_array_equal(a.data, b.data)


def test_power_law_spectrum_validation():
    with pytest.raises(IllegalArgumentError):
        PowerLawSpectrum(0.0, 2.0)
    with pytest.raises(IllegalArgumentError):
        PowerLawSpectrum(1.0, -1.0)
    assert PowerLawSpectrum(2.0, 1.0).power([4.0])[0] == 0.5
    with pytest.raises(IllegalArgumentError):
        PowerLawSpectrum().power([0.0, 1.0])


def test_power_law_needs_positive_sizes(rng):
    with pytest.raises(IllegalArgumentError):
        sample_power_law_batch(PowerLawSpectrum(), 0, 8, 8, rng)
