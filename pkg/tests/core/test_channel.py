#
# This file is part of the pyrotcon package.
#
# Copyright (c) 2024 pyrotcon Developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
# THE SOFTWARE.
#

import math

import numpy as np
import pytest

from pyrotcon.core.channel import NoiseSpec, SnrConvention, awgn, frame_streams, sigma_from_snr
from pyrotcon.errors import InvalidParameter


class Test_sigma_from_snr:
    def test_ebn0(self):
        spec = sigma_from_snr(0.0, rate=0.5, m=2)
        assert spec.sigma2 == pytest.approx(1.0)
        assert spec.convention == SnrConvention.EBN0

    def test_ebn0_16qam(self):
        assert sigma_from_snr(3.0, 0.5, 4).sigma2 == pytest.approx(1 / (2 * 10 ** 0.3))

    def test_esn0(self):
        spec = sigma_from_snr(10.0, rate=0.5, m=2, convention="esn0")
        assert spec.sigma2 == pytest.approx(0.1)
        assert spec.snr_db == 10.0

    @pytest.mark.parametrize("rate, m", ((0, 2), (1.5, 2), (0.5, 0)))
    def test_invalid(self, rate, m):
        with pytest.raises(InvalidParameter):
            sigma_from_snr(1.0, rate, m)


@pytest.mark.parametrize("sigma2", (0, -1, math.nan))
def test_noise_spec_invalid(sigma2):
    with pytest.raises(InvalidParameter):
        NoiseSpec(sigma2=sigma2)


class Test_awgn:
    def test_variance(self):
        rng = np.random.default_rng(3)
        noise = awgn(np.zeros(200_000), NoiseSpec(sigma2=0.5), rng)
        assert np.mean(np.abs(noise) ** 2) == pytest.approx(0.5, rel=0.02)
        assert np.var(noise.real) == pytest.approx(0.25, rel=0.02)
        assert np.var(noise.imag) == pytest.approx(0.25, rel=0.02)
        assert abs(np.mean(noise.real * noise.imag)) < 0.005

    def test_shape(self):
        y = awgn(np.ones((3, 4)), NoiseSpec(sigma2=1.0), np.random.default_rng(0))
        assert y.shape == (3, 4)
        assert y.dtype == complex

    def test_deterministic(self):
        x = np.ones(16, dtype=complex)
        spec = NoiseSpec(sigma2=1.0)
        first = awgn(x, spec, np.random.default_rng(9))
        assert np.array_equal(first, awgn(x, spec, np.random.default_rng(9)))


class Test_frame_streams:
    def test_reproducible(self):
        a, b = frame_streams(7, 3, 1), frame_streams(7, 3, 1)
        assert np.array_equal(a.data.integers(0, 2, 32), b.data.integers(0, 2, 32))
        assert np.array_equal(a.noise.standard_normal(8), b.noise.standard_normal(8))

    @pytest.mark.parametrize("other", ((7, 4, 1), (7, 3, 0), (8, 3, 1)))
    def test_distinct(self, other):
        a, b = frame_streams(7, 3, 1), frame_streams(*other)
        assert not np.array_equal(a.noise.standard_normal(8), b.noise.standard_normal(8))

    def test_data_and_noise_differ(self):
        streams = frame_streams(0, 0)
        assert not np.array_equal(streams.data.standard_normal(8),
                                  streams.noise.standard_normal(8))

    def test_negative_seed(self):
        with pytest.raises(InvalidParameter):
            frame_streams(-1, 0)
