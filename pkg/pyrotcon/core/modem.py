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
Signal constellations, bit-to-symbol mapping and hard/soft demapping.

Bits are grouped into symbols of `m` bits, the first bit of a group being the most significant
bit of the label. LLRs are positive if bit 0 is more likely.
"""

from __future__ import annotations
import csv
from dataclasses import dataclass
from functools import cached_property
import io
import logging
from typing import Sequence, Union

import numpy as np
from scipy.special import logsumexp

from . import LLR_CLAMP
from ..errors import InvalidParameter, LengthMismatch
from ..utils.enums import StrEnum


log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

# Tolerance of the geometric constellation checks
GEOMETRY_TOLERANCE = 1e-12


class ConstellationKind(StrEnum):
    QPSK = "qpsk"
    GRAY16QAM = "16qam"


@dataclass(frozen=True, eq=False)
class Constellation:
    """A labeled two-dimensional constellation with unit average energy.

    :param points: complex points, the position in the array is the point index.
    :param labels: label (integer of m bits) of each point.
    :param symmetry_order: q such that a rotation by 2*pi/q maps the point set onto itself.
    """

    kind: ConstellationKind
    points: np.ndarray
    labels: np.ndarray
    m: int
    symmetry_order: int

    def __post_init__(self) -> None:
        size = 1 << self.m
        if self.points.shape != (size,) or self.labels.shape != (size,):
            raise InvalidParameter(f"A constellation with m={self.m} needs {size} points.")
        if sorted(self.labels.tolist()) != list(range(size)):
            raise InvalidParameter("Labels have to be a permutation of 0..2**m-1.")
        distances = np.abs(self.points[:, np.newaxis] - self.points[np.newaxis, :])
        np.fill_diagonal(distances, np.inf)
        if distances.min() <= GEOMETRY_TOLERANCE:
            raise InvalidParameter("Constellation points have to be distinct.")
        if abs(np.mean(np.abs(self.points) ** 2) - 1) > GEOMETRY_TOLERANCE:
            raise InvalidParameter("The average energy has to be 1.")
        rotated = self.points * np.exp(2j * np.pi / self.symmetry_order)
        if np.abs(rotated[:, np.newaxis] - self.points).min(axis=1).max() > GEOMETRY_TOLERANCE:
            raise InvalidParameter(
                f"Rotation by 2*pi/{self.symmetry_order} does not preserve the point set.")

    @property
    def size(self) -> int:
        return self.points.size

    @cached_property
    def label_bits(self) -> np.ndarray:
        """Bits of the label of each point, most significant bit first."""
        shifts = np.arange(self.m - 1, -1, -1)
        return ((self.labels[:, np.newaxis] >> shifts) & 1).astype(np.uint8)

    @cached_property
    def point_of_label(self) -> np.ndarray:
        inverse = np.empty(self.size, dtype=np.int64)
        inverse[self.labels] = np.arange(self.size)
        return inverse


# Gray map of two bits onto one axis, in units of the 16QAM grid spacing
_AXIS_LEVELS = {0b00: -3, 0b01: -1, 0b11: 1, 0b10: 3}


def make_constellation(kind: Union[ConstellationKind, str]) -> Constellation:
    """Create the Gray labeled QPSK or 16QAM constellation."""
    kind = ConstellationKind(kind)
    if kind == ConstellationKind.QPSK:
        # 00 -> (+,+), 01 -> (+,-), 11 -> (-,-), 10 -> (-,+)
        signs = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        points = np.array([complex(i, q) for i, q in signs]) / np.sqrt(2)
        return Constellation(kind=kind, points=points, labels=np.arange(4), m=2,
                             symmetry_order=4)
    labels = np.arange(16)
    points = np.array([complex(_AXIS_LEVELS[label >> 2], _AXIS_LEVELS[label & 0b11])
                       for label in labels]) / np.sqrt(10)
    return Constellation(kind=kind, points=points, labels=labels, m=4, symmetry_order=4)


def map_bits(c: Union[np.ndarray, Sequence[int]], cons: Constellation) -> np.ndarray:
    """Map groups of `m` bits onto constellation points."""
    bits = np.asarray(c, dtype=np.int64)
    if bits.ndim != 1 or bits.size % cons.m:
        raise LengthMismatch("c", expected=bits.size + (-bits.size) % cons.m, actual=bits.size)
    weights = 1 << np.arange(cons.m - 1, -1, -1)
    labels = bits.reshape(-1, cons.m) @ weights
    return cons.points[cons.point_of_label[labels]]


def _squared_distances(y: np.ndarray, cons: Constellation) -> np.ndarray:
    samples = np.asarray(y, dtype=complex).reshape(-1)
    return np.abs(samples[:, np.newaxis] - cons.points[np.newaxis, :]) ** 2


def hard_demap(y: Union[np.ndarray, Sequence[complex]], cons: Constellation) -> np.ndarray:
    """Decide for the label of the nearest point, ties go to the lowest point index."""
    nearest = np.argmin(_squared_distances(np.asarray(y), cons), axis=1)
    return cons.label_bits[nearest].reshape(-1)


def soft_demap(y: Union[np.ndarray, Sequence[complex]], cons: Constellation, sigma2: float
               ) -> np.ndarray:
    """Compute exact bit LLRs in the log domain for noise of total variance `sigma2`."""
    if not sigma2 > 0:
        raise InvalidParameter(f"sigma2 has to be positive, got {sigma2}.")
    metrics = -_squared_distances(np.asarray(y), cons) / sigma2
    llrs = np.empty((metrics.shape[0], cons.m))
    for k in range(cons.m):
        zero = cons.label_bits[:, k] == 0
        llrs[:, k] = logsumexp(metrics[:, zero], axis=1) - logsumexp(metrics[:, ~zero], axis=1)
    return np.clip(llrs, -LLR_CLAMP, LLR_CLAMP).reshape(-1)


def dump_constellation(cons: Constellation) -> str:
    """Create a CSV table with index, label bits, real and imaginary part of each point."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("index", "label", "real", "imag"))
    for index, point in enumerate(cons.points):
        label = "".join(str(b) for b in cons.label_bits[index])
        writer.writerow((index, label, repr(float(point.real)), repr(float(point.imag))))
    return buffer.getvalue()
