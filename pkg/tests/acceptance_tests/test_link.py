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

"""End-to-end checks of the rotated constellation link against exhaustive references."""

import math

import numpy as np
import pytest

from pyrotcon.core.channel import NoiseSpec, awgn, frame_streams, sigma_from_snr
from pyrotcon.core.ldpc import construct_code
from pyrotcon.core.modem import make_constellation
from pyrotcon.core.rotation import ExtraBits
from pyrotcon.link.estimator import objective
from pyrotcon.link.pipeline import (Frame, TxConfig, decode_frame, encode_frame,
                                    simulate_frame)
from pyrotcon.test import all_codewords, joint_ml_detect, small_code


@pytest.fixture(scope="module")
def code():
    return construct_code(96, 48, 3, seed=1, profile="mixed")


@pytest.fixture(scope="module")
def full_code():
    return construct_code(2304, 1152, 3, seed=0, profile="mixed")


@pytest.mark.parametrize("kind", ("qpsk", "16qam"))
@pytest.mark.parametrize("ell", (1, 2, 3, 4))
def test_noiseless_round_trip(code, kind, ell):
    h, enc = code
    cfg = TxConfig.build(h, make_constellation(kind), ell, encoder=enc)
    rng = np.random.default_rng(ell)
    for d in range(1 << ell):
        v = ExtraBits.from_int(d, ell)
        for _ in range(20):
            u = rng.integers(0, 2, size=cfg.k, dtype=np.uint8)
            result = decode_frame(encode_frame(u, v, cfg), cfg, sigma2=0.05)
            assert result.v_hat == v
            assert np.array_equal(result.u_hat, u)


@pytest.mark.parametrize("kind", ("qpsk", "16qam"))
def test_objective_quarter_turn_symmetry(code, kind):
    h, enc = code
    cfg = TxConfig.build(h, make_constellation(kind), 4, encoder=enc)
    noise = NoiseSpec(sigma2=0.3)
    deviation = 0.0
    for i in range(100):
        streams = frame_streams(21, i)
        frame = Frame.random(cfg, streams.data)
        y = awgn(encode_frame(frame.u, frame.v, cfg), noise, streams.noise)
        theta = float(streams.data.uniform(0, 2 * math.pi))
        f = objective(y, cfg.cons, theta, noise.sigma2)
        g = objective(y, cfg.cons, theta + math.pi / 2, noise.sigma2)
        deviation = max(deviation, abs(f - g) / abs(f))
    assert deviation < 1e-6


@pytest.mark.parametrize("kind, ell", (("qpsk", 1), ("qpsk", 2), ("qpsk", 4), ("16qam", 3),
                                       ("16qam", 5)))
def test_complexity_counters(code, kind, ell):
    h, enc = code
    cfg = TxConfig.build(h, make_constellation(kind), ell, encoder=enc)
    noise = sigma_from_snr(6.0, cfg.rate, cfg.cons.m)
    for i in range(20):
        outcome = simulate_frame(cfg, noise, frame_streams(4, i))
        assert outcome.objective_evaluations == 1 << ell
        assert outcome.list_size == min(4, 1 << ell)
        assert outcome.syndrome_computations == outcome.list_size


def test_joint_ml_agreement():
    h, enc = small_code()
    cfg = TxConfig.build(h, make_constellation("qpsk"), 3, encoder=enc)
    codewords = all_codewords(enc)
    noise = NoiseSpec(sigma2=0.1)
    frames = 1000
    agreeing = far_off = 0
    for i in range(frames):
        streams = frame_streams(8, i)
        frame = Frame.random(cfg, streams.data)
        y = awgn(encode_frame(frame.u, frame.v, cfg), noise, streams.noise)
        chosen = decode_frame(y, cfg, noise.sigma2).v_hat.d
        detection = joint_ml_detect(y, cfg, noise.sigma2, codewords)
        gap = detection.gap(chosen)
        # rotations mapping codewords onto codewords tie exactly
        if chosen == detection.grid_index or gap < 1e-9:
            agreeing += 1
        elif gap >= 1:
            far_off += 1
    assert agreeing >= 0.95 * frames
    assert far_off == 0


def test_baseline_identical_on_correct_angle(code):
    h, enc = code
    cfg = TxConfig.build(h, make_constellation("16qam"), 4, encoder=enc)
    noise = sigma_from_snr(7.0, cfg.rate, cfg.cons.m)
    compared = 0
    for i in range(100):
        outcome = simulate_frame(cfg, noise, frame_streams(6, i), baseline=True)
        if not outcome.extra_error:
            compared += 1
            assert outcome.baseline_bit_errors == outcome.payload_bit_errors
    assert compared > 50


@pytest.mark.slow
@pytest.mark.parametrize("kind", ("qpsk", "16qam"))
def test_noiseless_round_trip_full_code(full_code, kind):
    h, enc = full_code
    cfg = TxConfig.build(h, make_constellation(kind), 4, encoder=enc)
    rng = np.random.default_rng(0)
    for d in range(16):
        u = rng.integers(0, 2, size=cfg.k, dtype=np.uint8)
        v = ExtraBits.from_int(d, 4)
        result = decode_frame(encode_frame(u, v, cfg), cfg, sigma2=0.05)
        assert result.v_hat == v
        assert np.array_equal(result.u_hat, u)
