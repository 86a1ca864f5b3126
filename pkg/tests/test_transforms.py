import math

import numpy as np

from fakery.transforms import db2_filters, dct2, dwt2

from oracles import dct2_naive, dwt2_naive


class TestDct2:
    def test_constant_grid_is_dc_only(self):
        coeffs = dct2(np.ones((32, 32)))
        assert abs(coeffs[0, 0] - 32.0) <= 1e-12
        coeffs[0, 0] = 0.0
        assert np.abs(coeffs).max() <= 1e-12

    def test_single_cosine_mode(self):
        i = np.arange(32)
        x = np.tile(np.cos(np.pi * (2 * i + 1) * 3 / 64), (32, 1))
        coeffs = dct2(x)
        expected = dct2_naive(x)
        assert np.abs(coeffs - expected).max() <= 1e-9
        mask = np.ones((32, 32), dtype=bool)
        mask[0, 3] = False
        assert np.abs(coeffs[mask]).max() <= 1e-9

    def test_matches_naive_and_parseval(self, rng):
        x = rng.normal(size=(32, 32))
        coeffs = dct2(x)
        assert np.abs(coeffs - dct2_naive(x)).max() <= 1e-9
        assert abs((x**2).sum() - (coeffs**2).sum()) <= 1e-9


class TestDb2Filters:
    def test_low_pass_sums_to_sqrt2(self):
        low, _ = db2_filters()
        assert abs(low.sum() - math.sqrt(2)) <= 1e-12

    def test_orthonormal_pair(self):
        low, high = db2_filters()
        assert abs(low @ low - 1.0) <= 1e-12
        assert abs(high @ high - 1.0) <= 1e-12
        assert abs(low @ high) <= 1e-12


class TestDwt2:
    def test_constant_input(self):
        a, lh, hl, hh = dwt2(np.full((32, 32), 100.0))
        assert np.abs(a - 200.0).max() <= 1e-12
        for band in (lh, hl, hh):
            assert np.abs(band).max() <= 1e-12

    def test_energy_conservation(self, rng):
        x = rng.normal(size=(32, 32))
        bands = dwt2(x)
        total = sum((b**2).sum() for b in bands)
        assert abs(total - (x**2).sum()) / (x**2).sum() <= 1e-9

    def test_matches_convolution_oracle(self, rng):
        x = rng.normal(size=(32, 32))
        low, high = db2_filters()
        expected = dwt2_naive(x, low, high)
        for got, want in zip(dwt2(x), expected):
            assert np.abs(got - want).max() <= 1e-9

    def test_subband_shapes(self):
        for band in dwt2(np.zeros((32, 32))):
            assert band.shape == (16, 16)
