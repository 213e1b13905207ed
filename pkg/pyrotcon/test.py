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
Helpers for unit tests: small codes and exhaustive reference decoders.

The exhaustive decoders enumerate all 2**K codewords and are only meant for codes with K of a
few bits.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .core.ldpc import Encoder, ParityCheckMatrix, build_encoder, encode
from .core.rotation import RotationAngle, grid_angles, rotate
from .link.pipeline import TxConfig, modulate


HAMMING_7_4 = ((1, 1, 0, 1, 1, 0, 0),
               (1, 0, 1, 1, 0, 1, 0),
               (0, 1, 1, 1, 0, 0, 1))


def hamming_code() -> tuple[ParityCheckMatrix, Encoder]:
    """The [7, 4] Hamming code."""
    h = ParityCheckMatrix.from_dense(HAMMING_7_4)
    return h, build_encoder(h)


def small_code(n: int = 16, k: int = 4, column_weight: int = 3, seed: int = 5
               ) -> tuple[ParityCheckMatrix, Encoder]:
    """A full rank code [P | B] with `column_weight` ones in every information column of P.

    B is lower bidiagonal, so the matrix has full rank.
    """
    m = n - k
    rng = np.random.default_rng(seed)
    p = np.zeros((m, k), dtype=np.uint8)
    for col in range(k):
        p[rng.choice(m, size=column_weight, replace=False), col] = 1
    parity = np.eye(m, dtype=np.uint8) + np.eye(m, k=-1, dtype=np.uint8)
    h = ParityCheckMatrix.from_dense(np.hstack((p, parity)))
    return h, build_encoder(h)


def all_codewords(encoder: Encoder) -> np.ndarray:
    """All 2**K codewords, row i encodes the information word with value i (MSB first)."""
    k = encoder.k
    words = (np.arange(1 << k)[:, np.newaxis] >> np.arange(k - 1, -1, -1)) & 1
    return np.array([encode(encoder, u) for u in words.astype(np.uint8)])


def ml_decode(llrs: np.ndarray, codewords: np.ndarray) -> np.ndarray:
    """Codeword maximizing the likelihood for the channel LLRs (positive means bit 0)."""
    metric = (1 - 2 * codewords.astype(float)) @ np.asarray(llrs, dtype=float)
    return codewords[int(np.argmax(metric))]


def bitwise_map_llrs(llrs: np.ndarray, codewords: np.ndarray) -> np.ndarray:
    """A posteriori LLRs of every code bit, summing over all codewords."""
    metric = (1 - 2 * codewords.astype(float)) @ np.asarray(llrs, dtype=float) / 2
    result = np.empty(codewords.shape[1])
    for i in range(codewords.shape[1]):
        zero = codewords[:, i] == 0
        result[i] = logsumexp(metric[zero]) - logsumexp(metric[~zero])
    return result


@dataclass(frozen=True, eq=False)
class JointDetection:
    """Best (angle, codeword) pair of the exhaustive joint detector.

    `metrics[a, w]` is -|y - r_a x_w|^2 / sigma2 for grid angle a and codeword w.
    """

    grid_index: int
    codeword_index: int
    metrics: np.ndarray

    @property
    def angle(self) -> RotationAngle:
        return RotationAngle.on_grid(self.grid_index, int(np.log2(self.metrics.shape[0])))

    def best_per_angle(self) -> np.ndarray:
        return self.metrics.max(axis=1)

    def gap(self, grid_index: int) -> float:
        """Metric distance between the best pair and the best pair with another angle."""
        best = self.best_per_angle()
        return float(best[self.grid_index] - best[grid_index])


def joint_ml_detect(y: np.ndarray, cfg: TxConfig, sigma2: float,
                    codewords: Optional[np.ndarray] = None) -> JointDetection:
    """Search all grid angles and all codewords for the most likely transmission."""
    if codewords is None:
        codewords = all_codewords(cfg.encoder)
    symbols = np.array([modulate(c, cfg) for c in codewords])
    samples = np.asarray(y, dtype=complex)
    metrics = np.empty((1 << cfg.ell, codewords.shape[0]))
    for a, radians in enumerate(grid_angles(cfg.ell)):
        candidates = rotate(symbols, radians)
        metrics[a] = -np.sum(np.abs(samples - candidates) ** 2, axis=1) / sigma2
    a, w = np.unravel_index(int(np.argmax(metrics)), metrics.shape)
    return JointDetection(grid_index=int(a), codeword_index=int(w), metrics=metrics)

