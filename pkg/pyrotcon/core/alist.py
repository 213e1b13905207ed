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
The alist text format (MacKay convention) for parity-check matrices.

Line 1 holds "N M", line 2 the maximal column and row degrees, lines 3 and 4 the degree of
every column and every row. Then follow N lines with the 1-based check indices of each column
and M lines with the 1-based variable indices of each row. Lines may be padded with zeros when
read, they are never padded when written.
"""

from __future__ import annotations
import logging
from os import PathLike
from typing import Iterator, Optional, Union

from ..errors import AlistParseError
from .ldpc import ParityCheckMatrix


log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


def serialize_alist(h: ParityCheckMatrix) -> str:
    """Turn `h` into alist text."""
    col_degrees = h.col_degrees.tolist()
    row_degrees = h.row_degrees.tolist()
    lines = [
        f"{h.n_cols} {h.n_rows}",
        f"{max(col_degrees, default=0)} {max(row_degrees, default=0)}",
        " ".join(str(d) for d in col_degrees),
        " ".join(str(d) for d in row_degrees),
    ]
    # an unconnected node is written as a single zero, blank lines are skipped when read
    lines.extend(" ".join(str(i + 1) for i in col) or "0" for col in h.cols)
    lines.extend(" ".join(str(j + 1) for j in row) or "0" for row in h.rows)
    return "\n".join(lines) + "\n"


class _Lines:
    """Iterate the non-empty lines of a text, remembering the 1-based line numbers."""

    def __init__(self, text: str, path: Optional[str]) -> None:
        self.path = path
        self._lines: Iterator[tuple[int, str]] = (
            (number, line) for number, line in enumerate(text.splitlines(), start=1)
            if line.strip()
        )
        self.line_number = 0

    def error(self, description: str) -> AlistParseError:
        return AlistParseError(line=self.line_number, description=description, path=self.path)

    def integers(self, what: str) -> list[int]:
        try:
            self.line_number, line = next(self._lines)
        except StopIteration:
            self.line_number += 1
            raise self.error(f"File ends before {what}.")
        try:
            return [int(token) for token in line.split()]
        except ValueError:
            raise self.error(f"Non-integer value in {what}.")

    def exact(self, count: int, what: str) -> list[int]:
        values = self.integers(what)
        if len(values) != count:
            raise self.error(f"Expected {count} values in {what}, got {len(values)}.")
        return values

    def index_list(self, degree: int, bound: int, what: str) -> list[int]:
        values = self.integers(what)
        indices, padding = values[:degree], values[degree:]
        if len(indices) != degree:
            raise self.error(f"{what} lists {len(indices)} indices instead of {degree}.")
        if any(value != 0 for value in padding):
            raise self.error(f"{what} has more indices than its degree {degree}.")
        if any(not 1 <= i <= bound for i in indices):
            raise self.error(f"{what} has an index outside 1..{bound}.")
        return [i - 1 for i in indices]


def deserialize_alist(text: str, path: Optional[str] = None) -> ParityCheckMatrix:
    """Read alist text and validate the resulting matrix.

    :raises AlistParseError: if the text is malformed, naming the line.
    :raises InvalidParameter: if the lists describe an invalid matrix, e.g. duplicate indices.
    """
    lines = _Lines(text, path)
    n_cols, n_rows = lines.exact(2, "the size line")
    if n_cols < 1 or n_rows < 1:
        raise lines.error("The matrix size has to be positive.")
    max_col, max_row = lines.exact(2, "the maximal degrees line")
    col_degrees = lines.exact(n_cols, "the column degrees")
    if any(not 0 <= d <= max_col for d in col_degrees):
        raise lines.error(f"A column degree exceeds the maximum {max_col}.")
    row_degrees = lines.exact(n_rows, "the row degrees")
    if any(not 0 <= d <= max_row for d in row_degrees):
        raise lines.error(f"A row degree exceeds the maximum {max_row}.")
    cols = [sorted(lines.index_list(d, n_rows, f"column {j + 1}"))
            for j, d in enumerate(col_degrees)]
    rows = [sorted(lines.index_list(d, n_cols, f"row {i + 1}"))
            for i, d in enumerate(row_degrees)]
    return ParityCheckMatrix(n_cols=n_cols, n_rows=n_rows,
                             rows=tuple(tuple(row) for row in rows),
                             cols=tuple(tuple(col) for col in cols))


def write_alist(h: ParityCheckMatrix, path: Union[str, PathLike]) -> None:
    with open(path, "w") as file:
        file.write(serialize_alist(h))
    log.info(f"Wrote {h.n_rows}x{h.n_cols} matrix to '{path}'.")


def read_alist(path: Union[str, PathLike]) -> ParityCheckMatrix:
    with open(path, "r") as file:
        text = file.read()
    h = deserialize_alist(text, path=str(path))
    log.info(f"Read {h.n_rows}x{h.n_cols} matrix from '{path}'.")
    return h
