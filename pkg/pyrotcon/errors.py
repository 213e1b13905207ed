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
Error objects and the exception hierarchy of pyrotcon.

Every exception raised by the library derives from :class:`PyrotconError` and carries an
:class:`Error` (or :class:`DataError`) describing what went wrong, such that the command line
interface may report a code and a readable message.
"""

from __future__ import annotations
from dataclasses import asdict, dataclass
from typing import Any, Optional, Union

ErrorType = Union["DataError", "Error"]


@dataclass(frozen=True)
class Error:
    """An error code with its message."""

    code: int
    message: str

    def model_dump(self) -> dict[str, Any]:
        """Create a dictionary of the attributes."""
        return asdict(self)


@dataclass(frozen=True)
class DataError:
    """An error with additional data, for example the offending value."""

    code: int
    message: str
    data: Any

    @classmethod
    def from_error(cls, error: Error, data: Any) -> DataError:
        return cls(code=error.code, message=error.message, data=data)

    def model_dump(self) -> dict[str, Any]:
        return asdict(self)


# Input errors between 100 and 199
LENGTH_MISMATCH = Error(code=100, message="Sequence has the wrong length.")
INVALID_PARAMETER = Error(code=101, message="Invalid parameter.")
OFF_GRID_ANGLE = Error(code=102, message="Angle is not on the rotation grid.")
# Code construction errors between 200 and 299
CONSTRUCTION_FAILED = Error(code=200, message="Parity-check matrix construction failed.")
RANK_DEFICIENT = Error(code=201, message="Parity-check matrix is rank deficient.")
# Receiver errors between 300 and 399
EMPTY_CANDIDATE_SET = Error(code=300, message="No rotation angle reaches the threshold.")
# File and configuration errors between 400 and 499
ALIST_PARSE_ERROR = Error(code=400, message="Malformed alist file.")
INVALID_CONFIG = Error(code=401, message="Invalid simulation configuration.")


class PyrotconError(Exception):
    """Base error that all pyrotcon exceptions extend."""

    def __init__(self, error: ErrorType) -> None:
        msg = f"{error.code}: {error.message}"
        self.error = error
        if isinstance(error, DataError):
            msg += f"\nError Data: {error.data}"
        super().__init__(msg)


class LengthMismatch(PyrotconError, ValueError):
    """A bit or sample sequence does not have the required length."""

    def __init__(self, name: str, expected: int, actual: int) -> None:
        super().__init__(DataError.from_error(
            LENGTH_MISMATCH, f"'{name}' has length {actual}, expected {expected}."))


class InvalidParameter(PyrotconError, ValueError):
    """An argument is out of its valid range."""

    def __init__(self, description: str) -> None:
        super().__init__(DataError.from_error(INVALID_PARAMETER, description))


class OffGridAngle(PyrotconError, ValueError):
    """An angle is further away from the rotation grid than the tolerance allows."""

    def __init__(self, radians: float, ell: int) -> None:
        self.radians = radians
        self.ell = ell
        super().__init__(DataError.from_error(
            OFF_GRID_ANGLE, f"{radians!r} rad is not a multiple of 2*pi/2**{ell}."))


class ConstructionError(PyrotconError):
    """The progressive edge growth could not build the requested matrix."""

    def __init__(self, description: str) -> None:
        super().__init__(DataError.from_error(CONSTRUCTION_FAILED, description))


class RankDeficient(PyrotconError):
    """Systematic encoding needs a parity-check matrix with full row rank."""

    def __init__(self, rank: int, n_rows: int) -> None:
        self.rank = rank
        self.n_rows = n_rows
        super().__init__(DataError.from_error(
            RANK_DEFICIENT, f"rank {rank} < {n_rows} rows"))


class EmptyCandidateSet(PyrotconError):
    """The threshold of the candidate search lies above the maximal objective."""

    def __init__(self, threshold: float, maximum: float) -> None:
        self.threshold = threshold
        self.maximum = maximum
        super().__init__(DataError.from_error(
            EMPTY_CANDIDATE_SET, f"threshold {threshold!r} > F_max {maximum!r}"))


class AlistParseError(PyrotconError):
    """An alist file could not be read, `line` is 1-based."""

    def __init__(self, line: int, description: str, path: Optional[str] = None) -> None:
        self.line = line
        self.path = path
        where = f"line {line}" if path is None else f"{path}, line {line}"
        super().__init__(DataError.from_error(ALIST_PARSE_ERROR, f"{where}: {description}"))


class InvalidConfig(PyrotconError, ValueError):
    """A simulation configuration field has an invalid value."""

    def __init__(self, field: str, description: str) -> None:
        self.field = field
        super().__init__(DataError.from_error(INVALID_CONFIG, f"'{field}': {description}"))
