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

"""
Complex AWGN channel, SNR conversion and per-frame random streams.

The modem normalizes the symbol energy to Es = 1, so the noise variance follows from the SNR
alone. `sigma2` is the total complex variance E|w|^2, each real dimension gets sigma2/2.
"""

from __future__ import annotations
from dataclasses import dataclass
import math
from typing import Union

import numpy as np

from ..errors import InvalidParameter
from ..utils.enums import StrEnum


class SnrConvention(StrEnum):
    EBN0 = "ebn0"
    ESN0 = "esn0"


@dataclass(frozen=True)
class NoiseSpec:
    """Noise variance together with the SNR it was derived from."""

    sigma2: float
    snr_db: float = math.nan
    convention: SnrConvention = SnrConvention.ESN0

    def __post_init__(self) -> None:
        if not self.sigma2 > 0:
            raise InvalidParameter(f"sigma2 has to be positive, got {self.sigma2}.")


def sigma_from_snr(snr_db: float, rate: float, m: int,
                   convention: Union[SnrConvention, str] = SnrConvention.EBN0) -> NoiseSpec:
    """Convert an SNR in dB into the noise variance for unit symbol energy.

    Es/N0: sigma2 = 10**(-snr/10); Eb/N0: sigma2 = 1 / (rate * m * 10**(snr/10)).
    """
    convention = SnrConvention(convention)
    if not 0 < rate <= 1:
        raise InvalidParameter(f"The code rate has to be in (0, 1], got {rate}.")
    if m < 1:
        raise InvalidParameter(f"Bits per symbol have to be positive, got {m}.")
    linear = 10 ** (snr_db / 10)
    if convention == SnrConvention.EBN0:
        sigma2 = 1 / (rate * m * linear)
    else:
        sigma2 = 1 / linear
    return NoiseSpec(sigma2=sigma2, snr_db=snr_db, convention=convention)


def awgn(x: np.ndarray, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    """Add circularly symmetric complex Gaussian noise CN(0, sigma2) to `x`."""
    samples = np.asarray(x, dtype=complex)
    normal = rng.standard_normal((2, samples.size))
    noise = math.sqrt(spec.sigma2 / 2) * (normal[0] + 1j * normal[1])
    return samples + noise.reshape(samples.shape)


@dataclass(frozen=True, eq=False)
class FrameStreams:
    """Independent generators of one frame: `data` draws payload and extra bits, `noise` the
    channel noise."""

    data: np.random.Generator
    noise: np.random.Generator


def frame_streams(master_seed: int, frame_index: int, point_index: int = 0) -> FrameStreams:
    """Derive the random streams of a frame from the master seed alone.

    The streams do not depend on which worker simulates the frame or on the order of frames.
    """
    if master_seed < 0:
        raise InvalidParameter(f"The seed has to be non-negative, got {master_seed}.")
    sequence = np.random.SeedSequence(master_seed, spawn_key=(point_index, frame_index))
    data, noise = sequence.spawn(2)
    return FrameStreams(data=np.random.default_rng(data), noise=np.random.default_rng(noise))
