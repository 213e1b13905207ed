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
Embedding of extra bits into a frame-constant rotation angle.

The ell extra bits v select the angle r(v) = 2*pi*d(v)/2**ell, where d(v) reads the bits most
significant bit first.
"""

from __future__ import annotations
from dataclasses import dataclass
import math
from typing import Iterable, Optional, Union

import numpy as np

from . import ANGLE_TOLERANCE, MAX_EXTRA_BITS
from ..errors import InvalidParameter, OffGridAngle


TWO_PI = 2 * math.pi


def check_ell(ell: int) -> int:
    if not 1 <= ell <= MAX_EXTRA_BITS:
        raise InvalidParameter(f"ell has to be in 1..{MAX_EXTRA_BITS}, got {ell}.")
    return ell


@dataclass(frozen=True)
class ExtraBits:
    """Extra bit sequence of length ell."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        check_ell(len(self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise InvalidParameter(f"Extra bits have to be 0 or 1, got {self.bits}.")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> ExtraBits:
        return cls(tuple(int(b) for b in bits))

    @classmethod
    def from_int(cls, d: int, ell: int) -> ExtraBits:
        check_ell(ell)
        if not 0 <= d < 1 << ell:
            raise InvalidParameter(f"{d} does not fit into {ell} bits.")
        return cls(tuple((d >> shift) & 1 for shift in range(ell - 1, -1, -1)))

    @property
    def ell(self) -> int:
        return len(self.bits)

    @property
    def d(self) -> int:
        value = 0
        for bit in self.bits:
            value = (value << 1) | bit
        return value

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class RotationAngle:
    """An angle in [0, 2*pi), optionally the grid angle 2*pi*grid_index/2**ell."""

    radians: float
    grid_index: Optional[int] = None
    ell: Optional[int] = None

    def __post_init__(self) -> None:
        if not 0 <= self.radians < TWO_PI:
            raise InvalidParameter(f"Angle {self.radians!r} is not in [0, 2*pi).")
        if (self.grid_index is None) != (self.ell is None):
            raise InvalidParameter("grid_index and ell have to be given together.")

    @classmethod
    def on_grid(cls, grid_index: int, ell: int) -> RotationAngle:
        size = 1 << check_ell(ell)
        grid_index %= size
        return cls(radians=TWO_PI * grid_index / size, grid_index=grid_index, ell=ell)

    @classmethod
    def from_radians(cls, radians: float) -> RotationAngle:
        wrapped = math.fmod(radians, TWO_PI)
        if wrapped < 0:
            wrapped += TWO_PI
        return cls(radians=wrapped if wrapped < TWO_PI else 0.0)

    def __neg__(self) -> RotationAngle:
        if self.grid_index is not None and self.ell is not None:
            return RotationAngle.on_grid(-self.grid_index, self.ell)
        return RotationAngle.from_radians(-self.radians)

    def __add__(self, other: RotationAngle) -> RotationAngle:
        """Add modulo 2*pi, staying on the grid if both angles are on the same grid."""
        if (self.grid_index is not None and other.grid_index is not None
                and self.ell is not None and self.ell == other.ell):
            return RotationAngle.on_grid(self.grid_index + other.grid_index, self.ell)
        return RotationAngle.from_radians(self.radians + other.radians)


def grid_angles(ell: int) -> np.ndarray:
    """All 2**ell valid rotation angles in rad, ordered by grid index."""
    size = 1 << check_ell(ell)
    return TWO_PI * np.arange(size) / size


def angle_of(v: ExtraBits) -> RotationAngle:
    """Compute r(v) = 2*pi*d(v)/2**ell."""
    return RotationAngle.on_grid(v.d, v.ell)


def bits_of_angle(theta: Union[RotationAngle, float], ell: int) -> ExtraBits:
    """Snap `theta` to the grid of 2**ell angles and return the extra bits it encodes."""
    radians = theta.radians if isinstance(theta, RotationAngle) else float(theta)
    size = 1 << check_ell(ell)
    index = round(radians * size / TWO_PI)
    if abs(radians - TWO_PI * index / size) > ANGLE_TOLERANCE:
        raise OffGridAngle(radians, ell)
    return ExtraBits.from_int(index % size, ell)


def rotate(x: np.ndarray, theta: Union[RotationAngle, float]) -> np.ndarray:
    """Multiply every sample by exp(j*theta)."""
    radians = theta.radians if isinstance(theta, RotationAngle) else float(theta)
    return np.asarray(x, dtype=complex) * np.exp(1j * radians)
